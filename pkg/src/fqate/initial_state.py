"""Initial ground states: uniform superpositions and Slater determinants."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from fqate.grid import GridSpec, RegisterLayout
from fqate.potentials import harmonic_1d
from fqate.spectra import kinetic_matrix_1d
from fqate.statevector import StateVector

ORTHONORMAL_TOL = 1e-8


def uniform_state(layout: RegisterLayout) -> StateVector:
    """Hadamard on every qubit: all amplitudes ``1/sqrt(dim)``."""
    dim = layout.total_dimension
    return StateVector(layout, np.full(dim, 1.0 / math.sqrt(dim)))


def initial_product_state(electron_state: StateVector, nuclear_qubits: int) -> StateVector:
    """``psi_el (x) |+>^{n_qn}``."""
    if electron_state.layout.nuclear_qubits != 0:
        raise ValueError("electron state already carries a nuclear register")
    if nuclear_qubits == 0:
        return electron_state.copy()
    layout = electron_state.layout.with_nuclear_qubits(nuclear_qubits)
    k = layout.nuclear_dimension
    amps = np.kron(electron_state.amplitudes, np.full(k, 1.0 / math.sqrt(k)))
    return StateVector(layout, amps, normalize=True)


@dataclass(frozen=True)
class OrbitalSet:
    """Product orbitals of a separable single-particle Hamiltonian, sorted by energy."""

    grid: GridSpec
    omegas: tuple[float, ...]
    axis_energies: tuple[np.ndarray, ...] = field(repr=False)
    axis_vectors: tuple[np.ndarray, ...] = field(repr=False)
    quantum_numbers: tuple[tuple[int, ...], ...]
    energies: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.omegas)

    def __len__(self) -> int:
        return len(self.quantum_numbers)

    def orbital(self, i: int) -> np.ndarray:
        """Orbital ``i`` on the ``(N,)*d`` grid, unit norm."""
        factors = [vecs[:, n] for vecs, n in zip(self.axis_vectors, self.quantum_numbers[i])]
        return reduce(np.multiply.outer, factors)

    def overlap(self, count: int) -> np.ndarray:
        orbs = np.array([self.orbital(i).reshape(-1) for i in range(count)])
        return orbs.conj() @ orbs.T


def _fix_phase(vecs: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vecs), axis=0)
    ph = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(ph) / ph)


def harmonic_orbitals(
    grid: GridSpec,
    omegas: Sequence[float] = (1.0, math.sqrt(2.0), math.sqrt(3.0)),
    count: int = 10,
) -> OrbitalSet:
    """Lowest ``count`` orbitals of ``sum_mu [p_mu^2/2m + m w_mu^2 (r_mu - L/2)^2 / 2]``.

    Each axis is diagonalized numerically with the same Fourier kinetic
    operator as the evolution, keeping levels below ``N/4`` per axis where
    the discretization is trustworthy.
    """
    omegas = tuple(float(w) for w in omegas)
    if len(omegas) not in (1, 3):
        raise ValueError("need one or three angular frequencies")
    level_cap = grid.point_count // 4
    t1 = kinetic_matrix_1d(grid)
    energies, vectors = [], []
    for w in omegas:
        e, v = np.linalg.eigh(t1 + np.diag(harmonic_1d(grid, w)))
        energies.append(e[:level_cap])
        vectors.append(_fix_phase(v[:, :level_cap]))
    labels = list(itertools.product(range(level_cap), repeat=len(omegas)))
    totals = np.array([sum(e[n] for e, n in zip(energies, lab)) for lab in labels])
    if count > len(labels):
        raise ValueError(f"only {len(labels)} resolved orbitals on this grid, asked for {count}")
    order = np.argsort(totals, kind="stable")[:count]
    return OrbitalSet(
        grid,
        omegas,
        tuple(energies),
        tuple(vectors),
        tuple(labels[i] for i in order),
        totals[order],
    )


def slater_state(orbitals: OrbitalSet, electron_count: int, nuclear_qubits: int = 0) -> StateVector:
    """Antisymmetrized product of the lowest ``electron_count`` orbitals.

    The amplitude at ``(r_1, ..., r_ne)`` is
    ``sum_sigma sign(sigma) prod_l phi_sigma(l)(r_l) / sqrt(n_e!)``.
    """
    if electron_count > len(orbitals):
        raise ValueError(f"need {electron_count} orbitals, set has {len(orbitals)}")
    gram = orbitals.overlap(electron_count)
    if np.max(np.abs(gram - np.eye(electron_count))) > ORTHONORMAL_TOL:
        raise ValueError("orbitals are not orthonormal")
    layout = RegisterLayout(orbitals.grid, electron_count, orbitals.dimension, nuclear_qubits)
    phis = [orbitals.orbital(i) for i in range(electron_count)]
    amps = np.zeros((orbitals.grid.point_count,) * layout.axis_count, dtype=np.complex128)
    for perm in itertools.permutations(range(electron_count)):
        amps += _permutation_sign(perm) * reduce(np.multiply.outer, [phis[p] for p in perm])
    amps /= math.sqrt(math.factorial(electron_count))
    electron = StateVector(layout.with_nuclear_qubits(0), amps.reshape(-1), normalize=True)
    return initial_product_state(electron, nuclear_qubits)


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- exact level-degeneracy check -----------------------------------------------


def _squarefree_split(n: int) -> tuple[int, int]:
    """``n = m**2 * r`` with ``r`` squarefree; returns ``(m, r)``."""
    if n <= 0:
        raise ValueError(f"need a positive integer, got {n}")
    m, r, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            m *= p
        if n % p == 0:
            n //= p
            r *= p
        p += 1
    return m, r * n


@dataclass(frozen=True)
class InjectivityReport:
    ok: bool
    violations: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    level_count: int


def epsilon_injectivity_check(
    n_max: int, omega_squared: Sequence[int] = (1, 2, 3), max_witnesses: int = 100
) -> InjectivityReport:
    """Check that ``eps(n) = sum_mu w_mu (n_mu + 1/2)`` separates all ``0 <= n_mu <= n_max``.

    Frequencies are given through their integer squares, ``w_mu = sqrt(omega_squared[mu])``.
    Writing ``w_mu = m_mu sqrt(r_mu)`` with squarefree ``r_mu``, two levels tie
    exactly when ``sum m_mu k_mu`` vanishes for every squarefree class, since
    square roots of distinct squarefree integers are linearly independent over
    the rationals.  Everything stays in integer arithmetic.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    splits = [_squarefree_split(int(w2)) for w2 in omega_squared]
    classes = sorted({r for _, r in splits})
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for n in itertools.product(range(n_max + 1), repeat=len(splits)):
        key = tuple(sum(m * nm for (m, r), nm in zip(splits, n) if r == cls) for cls in classes)
        groups.setdefault(key, []).append(n)
    witnesses = []
    for members in groups.values():
        if len(members) < 2:
            continue
        for pair in itertools.combinations(members, 2):
            witnesses.append(pair)
            if len(witnesses) >= max_witnesses:
                break
        if len(witnesses) >= max_witnesses:
            break
    witnesses.sort()
    ok = all(len(m) == 1 for m in groups.values())
    return InjectivityReport(ok, tuple(witnesses), (n_max + 1) ** len(splits))
