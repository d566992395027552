"""Problem, initial state and target construction from a ``RunConfig``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fqate.config import RunConfig
from fqate.errors import ConfigError
from fqate.grid import GridSpec, RegisterLayout
from fqate.initial_state import harmonic_orbitals, slater_state, uniform_state
from fqate.potentials import (
    AdiabaticProblem,
    PotentialTerm,
    anisotropic_harmonic,
    electron_electron_diagonal,
    onebody_diagonal,
    parabolic_problem,
    soft_coulomb,
)
from fqate.scheduling import Schedule, linear_schedule, optimal_schedule
from fqate.spectra import IndicatorTable, SpectrumSlice, fermionic_slice, indicator_table
from fqate.statevector import StateVector
from fqate.structopt import NuclearConfigSet, structure_search_problem


@dataclass(frozen=True)
class Experiment:
    config: RunConfig
    problem: AdiabaticProblem
    initial: StateVector
    configs: NuclearConfigSet | None = None

    @property
    def fermionic(self) -> bool:
        return self.problem.layout.electron_count > 1

    def indicator(self, jobs: int = 1) -> IndicatorTable:
        a_grid = np.linspace(0.0, 1.0, self.config.a_points)
        return indicator_table(
            self.problem, a_grid, cap=self.config.dense_cap, jobs=jobs, antisymmetric=self.fermionic
        )

    def target(self) -> SpectrumSlice:
        return fermionic_slice(self.problem, 1.0, self.config.dense_cap)

    def schedule(self, kind: str, table: IndicatorTable | None = None) -> Schedule:
        if kind == "linear":
            return linear_schedule()
        if table is None:
            table = self.indicator()
        return optimal_schedule(table.a, table.f)


def _external_field(grid: GridSpec, dimension: int, spec: dict) -> np.ndarray | list[np.ndarray]:
    if spec["type"] == "harmonic":
        return anisotropic_harmonic(grid, spec["omegas"])
    coords = np.meshgrid(*([grid.positions()] * dimension), indexing="ij")
    field = np.zeros((grid.point_count,) * dimension)
    for center, charge in zip(spec["centers"], spec["charges"]):
        center = np.atleast_1d(np.asarray(center, dtype=np.float64))
        if center.shape != (dimension,):
            raise ConfigError(f"well centre {center.tolist()} does not have {dimension} coordinates")
        r2 = sum((x - c) ** 2 for x, c in zip(coords, center))
        field += soft_coulomb(-1.0, charge, np.sqrt(r2))
    return field


def custom_problem(cfg: RunConfig) -> AdiabaticProblem:
    grid = GridSpec(cfg.length, cfg.qubits)
    layout = RegisterLayout(grid, cfg.electrons, cfg.dimension, cfg.nuclear_qubits)
    terms = []
    if cfg.external is not None:
        field = _external_field(grid, cfg.dimension, cfg.external)
        terms.append(PotentialTerm("external_onebody", onebody_diagonal(layout, field), label="external"))
    if cfg.electron_interaction:
        terms.append(PotentialTerm("electron_electron", electron_electron_diagonal(layout), label="V_ee"))
    if cfg.v0 is not None:
        v0 = anisotropic_harmonic(grid, cfg.v0["omegas"])
        terms.append(PotentialTerm("initial_v0", onebody_diagonal(layout, v0), label="V0"))
    return AdiabaticProblem(layout, tuple(terms), transverse=cfg.transverse, name="custom")


def build_experiment(cfg: RunConfig) -> Experiment:
    if cfg.problem == "parabolic":
        problem = parabolic_problem(cfg.length, cfg.qubits, cfg.omega)
        return Experiment(cfg, problem, uniform_state(problem.layout))
    if cfg.problem == "h2plus":
        configs = NuclearConfigSet(GridSpec(cfg.length, cfg.qubits), cfg.bond_lengths, cfg.nuclear_qubits)
        problem = structure_search_problem(configs, cfg.transverse)
        return Experiment(cfg, problem, uniform_state(problem.layout), configs)
    problem = custom_problem(cfg)
    if cfg.v0 is None:
        initial = uniform_state(problem.layout)
    else:
        orbitals = harmonic_orbitals(problem.layout.grid, cfg.v0["omegas"], count=cfg.electrons)
        initial = slater_state(orbitals, cfg.electrons, cfg.nuclear_qubits)
    return Experiment(cfg, problem, initial)

