"""Exact-diagonalization oracle for the instantaneous Hamiltonian.

The dense kinetic operator is built from the explicit centred Fourier
matrix rather than from FFTs, so it is an independent check on the
evolution engine while describing the same discrete operator.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from fqate.errors import DegenerateSpectrumError, DimensionCapError
from fqate.grid import GridSpec, RegisterLayout
from fqate.potentials import AdiabaticProblem
from fqate.statevector import StateVector

DEFAULT_CAP = 4096
GAP_FLOOR = 1e-8
DEGENERACY_TOL = 1e-6
DEFAULT_A_POINTS = 257
HERMITIAN_TOL = 1e-10

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class SpectrumSlice:
    a: float
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def gaps(self) -> np.ndarray:
        """``E_j - E_0`` for ``j >= 1``."""
        return self.eigenvalues[1:] - self.eigenvalues[0]


def centered_fourier_matrix(grid: GridSpec) -> np.ndarray:
    """``F[s, k] = exp(i p_s x_k) / sqrt(N)`` with centred momenta."""
    n = grid.point_count
    return np.exp(1j * np.outer(grid.centered_momenta(), grid.positions())) / np.sqrt(n)


def kinetic_matrix_1d(grid: GridSpec) -> np.ndarray:
    F = centered_fourier_matrix(grid)
    return F.conj().T @ (grid.kinetic_energies()[:, None] * F)


def _check_cap(layout: RegisterLayout, cap: int) -> None:
    if layout.total_dimension > cap:
        raise DimensionCapError(
            f"dense oracle needs dimension {layout.total_dimension}, above the cap of {cap}"
        )


def kinetic_matrix(layout: RegisterLayout, cap: int = DEFAULT_CAP) -> np.ndarray:
    _check_cap(layout, cap)
    t1 = kinetic_matrix_1d(layout.grid)
    n = layout.grid.point_count
    axes = layout.axis_count
    out = np.zeros((layout.total_dimension,) * 2, dtype=np.complex128)
    for ax in range(axes):
        left = np.eye(n**ax)
        right = np.eye(n ** (axes - ax - 1) * layout.nuclear_dimension)
        out += np.kron(np.kron(left, t1), right)
    return out


def transverse_matrix(layout: RegisterLayout) -> np.ndarray:
    """``I_el (x) sum_l X_l`` on the nuclear register."""
    n_qn = layout.nuclear_qubits
    nuc = np.zeros((layout.nuclear_dimension,) * 2)
    for q in range(n_qn):
        nuc += np.kron(np.kron(np.eye(2**q), _SIGMA_X), np.eye(2 ** (n_qn - q - 1)))
    return np.kron(np.eye(layout.electron_dimension), nuc)


def dense_hamiltonian(
    layout: RegisterLayout,
    diagonal: np.ndarray,
    transverse: float = 0.0,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """``T + diag(V) - transverse * sum_l X_l`` as a dense Hermitian matrix."""
    _check_cap(layout, cap)
    diagonal = np.asarray(diagonal, dtype=np.float64).reshape(-1)
    if diagonal.size != layout.total_dimension:
        raise ValueError("potential diagonal does not match the layout")
    h = kinetic_matrix(layout, cap)
    h[np.diag_indices_from(h)] += diagonal
    if transverse:
        h -= transverse * transverse_matrix(layout)
    return h


def eig_hermitian(h: np.ndarray, a: float = float("nan")) -> SpectrumSlice:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh(h)
    return SpectrumSlice(float(a), w, v)


def hamiltonian_at(problem: AdiabaticProblem, a: float | Mapping[str, float], cap: int = DEFAULT_CAP) -> np.ndarray:
    return dense_hamiltonian(problem.layout, problem.diagonal(a), problem.transverse_weight(a), cap)


def slice_at(problem: AdiabaticProblem, a: float, cap: int = DEFAULT_CAP) -> SpectrumSlice:
    return eig_hermitian(hamiltonian_at(problem, a, cap), a)


def antisymmetric_basis(layout: RegisterLayout, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Orthonormal columns spanning the states odd under every electron exchange."""
    _check_cap(layout, cap)
    dim = layout.total_dimension
    n_e = layout.electron_count
    eye = np.eye(dim).reshape(layout.shape + (dim,))
    proj = np.zeros((dim, dim))
    for perm in itertools.permutations(range(n_e)):
        inversions = sum(perm[i] > perm[j] for i in range(n_e) for j in range(i + 1, n_e))
        axes = [layout.axis_index(perm[l], mu) for l in range(n_e) for mu in range(layout.dimension)]
        moved = np.transpose(eye, axes + [layout.axis_count, layout.axis_count + 1])
        proj += (-1) ** inversions * moved.reshape(dim, dim)
    proj /= math.factorial(n_e)
    w, v = np.linalg.eigh(proj)
    return v[:, w > 0.5]


def fermionic_slice(problem: AdiabaticProblem, a: float, cap: int = DEFAULT_CAP) -> SpectrumSlice:
    """Spectrum of ``H(a)`` restricted to the antisymmetric sector.

    Eigenvectors are returned in the full register basis, one column per
    level, so they can serve directly as an infidelity target.
    """
    h = hamiltonian_at(problem, a, cap)
    if problem.layout.electron_count < 2:
        return eig_hermitian(h, a)
    q = antisymmetric_basis(problem.layout, cap)
    sub = eig_hermitian(q.T @ h @ q, a)
    return SpectrumSlice(float(a), sub.eigenvalues, q @ sub.eigenvectors)


def derivative_operator(problem: AdiabaticProblem, cap: int = DEFAULT_CAP) -> np.ndarray:
    """``dH/dA`` for a shared schedule: a diagonal, or a dense matrix when a transverse field is present."""
    diag = problem.diagonal_derivative()
    if not problem.transverse:
        return diag
    _check_cap(problem.layout, cap)
    return np.diag(diag) + problem.transverse * transverse_matrix(problem.layout)


def adiabatic_indicator_f(spectrum: SpectrumSlice, v: np.ndarray, gap_floor: float = GAP_FLOOR) -> float:
    """``max_j |<j|V|0>| / (E_j - E_0)**2`` over every excited state ``j``.

    ``v`` is either a diagonal (1D) or a dense operator (2D).
    """
    gaps = spectrum.gaps
    if gaps.size == 0:
        return 0.0
    if gaps[0] <= gap_floor:
        raise DegenerateSpectrumError(
            f"ground-state gap {gaps[0]:.3e} at A={spectrum.a} is below the floor {gap_floor:.1e}"
        )
    vecs = spectrum.eigenvectors
    v = np.asarray(v)
    v_gs = v * vecs[:, 0] if v.ndim == 1 else v @ vecs[:, 0]
    elements = np.abs(vecs[:, 1:].conj().T @ v_gs)
    return float(np.max(elements / gaps**2))


def ground_state(
    spectrum: SpectrumSlice, layout: RegisterLayout, degeneracy_tol: float = DEGENERACY_TOL
) -> tuple[StateVector, int]:
    """Lowest eigenvector and the dimension of the ground eigenspace."""
    dim = int(np.count_nonzero(spectrum.eigenvalues - spectrum.eigenvalues[0] <= degeneracy_tol))
    return StateVector(layout, spectrum.eigenvectors[:, 0], normalize=True), dim


@dataclass(frozen=True)
class IndicatorTable:
    a: np.ndarray
    f: np.ndarray
    gap1: np.ndarray
    e0: np.ndarray
    e1: np.ndarray

    @property
    def f_max(self) -> float:
        return float(np.max(self.f))


def _indicator_row(args) -> tuple[float, float, float, float]:
    problem, a, cap, gap_floor, v, antisymmetric = args
    spec = fermionic_slice(problem, a, cap) if antisymmetric else slice_at(problem, a, cap)
    f = adiabatic_indicator_f(spec, v, gap_floor)
    e = spec.eigenvalues
    return f, e[1] - e[0], e[0], e[1]


def indicator_table(
    problem: AdiabaticProblem,
    a_grid: np.ndarray | None = None,
    *,
    cap: int = DEFAULT_CAP,
    gap_floor: float = GAP_FLOOR,
    jobs: int = 1,
    antisymmetric: bool = False,
) -> IndicatorTable:
    """Sample ``f(A)``, the first gap and the two lowest levels on an ``A`` grid.

    With ``antisymmetric`` the levels are those of the fermionic sector.
    """
    if a_grid is None:
        a_grid = np.linspace(0.0, 1.0, DEFAULT_A_POINTS)
    a_grid = np.asarray(a_grid, dtype=np.float64)
    v = derivative_operator(problem, cap)
    tasks = [(problem, float(a), cap, gap_floor, v, antisymmetric) for a in a_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_indicator_row, tasks, chunksize=8))
    else:
        rows = [_indicator_row(t) for t in tasks]
    cols = np.array(rows).T
    return IndicatorTable(a_grid, cols[0], cols[1], cols[2], cols[3])
