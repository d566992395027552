"""Invariant suite on small instances, run by ``fqate check``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from fqate.ate import AteRun, evolve
from fqate.config import parse_config
from fqate.experiments import build_experiment
from fqate.grid import GridSpec, RegisterLayout
from fqate.initial_state import epsilon_injectivity_check, uniform_state
from fqate.potentials import parabolic_problem
from fqate.scheduling import adiabatic_bound, linear_schedule, optimal_schedule
from fqate.spectra import indicator_table, kinetic_matrix, slice_at
from fqate.statevector import StateVector
from fqate.structopt import h2plus_problem

TWO_ELECTRON_TOY = {
    "problem": "custom",
    "length": 8.0,
    "qubits": 4,
    "electrons": 2,
    "external": {"type": "soft_coulomb", "centers": [4.0], "charges": [2.0]},
    "electron_interaction": True,
    "v0": {"type": "harmonic", "omegas": [1.0]},
    "dt": 0.05,
    "steps": [200],
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    limit: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.value:.3e} (limit {self.limit:.1e})"


def unitarity(steps: int = 2000, seed: int = 7) -> CheckResult:
    problem = parabolic_problem(qubits=5)
    state = StateVector.random(problem.layout, np.random.default_rng(seed))
    final = evolve(AteRun(problem, linear_schedule(), 0.1, steps, checkpoint_steps=()), state)
    drift = abs(final.norm() - 1.0)
    return CheckResult("norm drift", drift <= 1e-8, drift, 1e-8)


def kinetic_oracle(seed: int = 3) -> CheckResult:
    layout = RegisterLayout(GridSpec(6.0, 4), 2, 1, 1)
    state = StateVector.random(layout, np.random.default_rng(seed))
    expected = scipy.linalg.expm(-0.3j * kinetic_matrix(layout)) @ state.amplitudes
    err = float(np.max(np.abs(state.copy().kinetic_step(0.3).amplitudes - expected)))
    return CheckResult("kinetic step vs dense exponential", err <= 1e-10, err, 1e-10)


def uniform_ground_state() -> CheckResult:
    problem = parabolic_problem()
    target = slice_at(problem, 0.0)
    overlap = abs(np.vdot(target.eigenvectors[:, 0], uniform_state(problem.layout).amplitudes)) ** 2
    return CheckResult("uniform state vs A=0 ground state", abs(1 - overlap) <= 1e-10, abs(1 - overlap), 1e-10)


def frozen_nuclear_weights(steps: int = 300) -> CheckResult:
    problem, _ = h2plus_problem(qubits=4, transverse=0.0)
    rng = np.random.default_rng(11)
    state = StateVector.random(problem.layout, rng)
    before = state.nuclear_weights()
    after = evolve(AteRun(problem, linear_schedule(), 0.1, steps, checkpoint_steps=()), state).nuclear_weights()
    err = float(np.max(np.abs(after - before)))
    return CheckResult("nuclear weights without transverse field", err <= 1e-10, err, 1e-10)


def antisymmetry_transport() -> CheckResult:
    exp = build_experiment(parse_config(TWO_ELECTRON_TOY))
    cfg = exp.config
    final = evolve(AteRun(exp.problem, linear_schedule(), cfg.dt, cfg.steps[-1], checkpoint_steps=()), exp.initial)
    swapped = final.copy().swap_electrons(0, 1)
    dev = abs(1.0 - abs(np.vdot(swapped.amplitudes, -final.amplitudes)) ** 2)
    return CheckResult("exchange sign after evolution", dev <= 1e-8, dev, 1e-8)


def injectivity() -> CheckResult:
    good = epsilon_injectivity_check(20, (1, 2, 3))
    bad = epsilon_injectivity_check(20, (1, 1, 1))
    passed = good.ok and not bad.ok and bool(bad.violations)
    return CheckResult("level injectivity", passed, float(len(good.violations)), 0.0)


def schedule_constant() -> CheckResult:
    problem = parabolic_problem(qubits=5)
    table = indicator_table(problem, np.linspace(0.0, 1.0, 65))
    sched = optimal_schedule(table.a, table.f)
    bound = adiabatic_bound(sched, table.a, table.f)
    rel = abs(bound / sched.c - 1.0)
    passed = rel <= 0.05 and sched.c <= table.f_max and math.isfinite(bound)
    return CheckResult("optimal schedule constant", passed, rel, 0.05)


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    unitarity,
    kinetic_oracle,
    uniform_ground_state,
    frozen_nuclear_weights,
    antisymmetry_transport,
    injectivity,
    schedule_constant,
)


def run_checks() -> list[CheckResult]:
    return [check() for check in CHECKS]
