"""Structure search over a table of classical nuclear configurations.

Each label ``J`` of the nuclear register selects one bond length.  The
electron sees the wells of configuration ``J`` only in the ``|J>`` block,
and a transverse field on the register starts the search from a uniform
superposition of all labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from fqate.grid import GridSpec, RegisterLayout
from fqate.potentials import (
    UNUSED_CONFIG_PENALTY,
    AdiabaticProblem,
    PotentialTerm,
    coupled_diagonal,
    nuclear_diagonal,
    v_en_for_bondlength,
    v_nn_table,
)
from fqate.spectra import dense_hamiltonian
from fqate.statevector import StateVector

H2PLUS_BOND_LENGTHS = (2.0, 4.0, 6.0, 8.0)


@dataclass(frozen=True)
class NuclearConfigSet:
    grid: GridSpec
    bond_lengths: tuple[float, ...]
    nuclear_qubits: int
    penalty: float = UNUSED_CONFIG_PENALTY
    v_nn: np.ndarray = field(init=False, repr=False)
    v_en: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        d = tuple(float(x) for x in self.bond_lengths)
        if not d:
            raise ValueError("need at least one configuration")
        if len(set(d)) != len(d):
            raise ValueError("bond lengths must be distinct")
        object.__setattr__(self, "bond_lengths", d)
        object.__setattr__(self, "v_nn", v_nn_table(d, self.nuclear_qubits, penalty=self.penalty))
        object.__setattr__(self, "v_en", tuple(v_en_for_bondlength(self.grid, x) for x in d))

    @property
    def count(self) -> int:
        return len(self.bond_lengths)

    def layout(self) -> RegisterLayout:
        return RegisterLayout(self.grid, 1, 1, self.nuclear_qubits)


def coupled_en_diagonal(configs: NuclearConfigSet, layout: RegisterLayout | None = None) -> np.ndarray:
    """``sum_J V_en,J (x) |J><J|``; unused labels carry the penalty."""
    layout = layout or configs.layout()
    if layout.grid != configs.grid or layout.nuclear_qubits != configs.nuclear_qubits:
        raise ValueError("layout does not match the configuration set")
    return coupled_diagonal(layout, configs.v_en, fill=configs.penalty)


def transverse_rotation(state: StateVector, theta: float) -> StateVector:
    """``R_x(theta)`` on every nuclear qubit (in place)."""
    return state.apply_nuclear_rx(theta)


def rotation_angle(dt: float, a6: float, transverse: float) -> float:
    return -2.0 * dt * (1.0 - a6) * transverse


def hamiltonian_per_config(configs: NuclearConfigSet, j: int) -> np.ndarray:
    """Dense single-electron ``T + V_en,J + V_nn[J]`` for one configuration."""
    if not 0 <= j < configs.count:
        raise IndexError(f"configuration {j} outside [0, {configs.count})")
    layout = RegisterLayout(configs.grid)
    return dense_hamiltonian(layout, configs.v_en[j] + configs.v_nn[j])


def config_ground_energies(configs: NuclearConfigSet) -> np.ndarray:
    return np.array([np.linalg.eigvalsh(hamiltonian_per_config(configs, j))[0] for j in range(configs.count)])


def structure_search_problem(configs: NuclearConfigSet, transverse: float = 0.1) -> AdiabaticProblem:
    """``H(A) = T + A (V_en + V_nn) - (1 - A) J_x sum_l X_l``."""
    layout = configs.layout()
    terms = (
        PotentialTerm("electron_nucleus", coupled_en_diagonal(configs, layout), label="V_en"),
        PotentialTerm("nucleus_nucleus", nuclear_diagonal(layout, configs.v_nn), label="V_nn"),
    )
    return AdiabaticProblem(layout, terms, transverse=transverse, name="h2plus")


def h2plus_problem(
    length: float = 15.0,
    qubits: int = 6,
    bond_lengths: Sequence[float] = H2PLUS_BOND_LENGTHS,
    nuclear_qubits: int = 2,
    transverse: float = 0.1,
) -> tuple[AdiabaticProblem, NuclearConfigSet]:
    configs = NuclearConfigSet(GridSpec(length, qubits), tuple(bond_lengths), nuclear_qubits)
    return structure_search_problem(configs, transverse), configs


@dataclass(frozen=True)
class Optimum:
    j_star: int
    weights: np.ndarray = field(repr=False)
    ties: tuple[int, ...] = ()

    @property
    def tied(self) -> bool:
        return len(self.ties) > 1


def extract_optimum(state: StateVector, tie_tol: float = 1e-12) -> Optimum:
    """Most probable nuclear label; every label within ``tie_tol`` of the maximum is reported."""
    w = state.nuclear_weights()
    top = float(np.max(w))
    ties = tuple(int(j) for j in np.flatnonzero(w >= top - tie_tol))
    return Optimum(ties[0], w, ties)


def sample_measurements(state: StateVector, shots: int, seed: int) -> np.ndarray:
    """Counts per label from ``shots`` seeded measurements of the nuclear register."""
    w = state.nuclear_weights()
    rng = np.random.default_rng(seed)
    return rng.multinomial(shots, w / w.sum())
