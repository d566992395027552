"""Trotterized adiabatic time evolution and infidelity sweeps.

One step at ``t_m = m dt`` (``m = 1 .. N``) applies, right to left,

    exp(-i T dt) . R_x(theta_m)^{(x) n_qn} . exp(-i V(t_m) dt)

where ``V(t_m)`` is the schedule-weighted diagonal and
``theta_m = -2 dt (1 - A6(t_m)) J_x``.  Without a nuclear register the
rotation is absent and this is the electron-only circuit.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.linalg

from fqate.errors import NumericalError
from fqate.potentials import SLOTS, AdiabaticProblem
from fqate.scheduling import Schedule, slot_schedules
from fqate.spectra import DEFAULT_CAP, DEGENERACY_TOL, SpectrumSlice, hamiltonian_at
from fqate.statevector import StateVector, kinetic_phases

OVERFLOW_LIMIT = 10.0
GUARD_INTERVAL = 1000


@dataclass
class Checkpoint:
    step: int
    time: float
    norm: float
    delta: float | None = None
    weights: np.ndarray | None = None


@dataclass
class AteRun:
    """Parameters of one evolution; ``checkpoints`` collects observables as it runs."""

    problem: AdiabaticProblem
    schedule: Schedule | Mapping[str, Schedule]
    dt: float
    steps: int
    checkpoint_steps: Sequence[int] | None = None
    target: SpectrumSlice | None = None
    stepping: str = "trotter"
    checkpoints: list[Checkpoint] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.stepping not in ("trotter", "exact"):
            raise ValueError(f"unknown stepping {self.stepping!r}")

    @property
    def final_time(self) -> float:
        return self.steps * self.dt

    def slot_schedules(self) -> dict[str, Schedule]:
        if isinstance(self.schedule, Schedule):
            return slot_schedules(self.schedule)
        return slot_schedules(self.schedule.get("A1", next(iter(self.schedule.values()))), self.schedule)

    def slot_values(self, m: int) -> dict[str, float]:
        s = m / self.steps
        return {slot: sched(s) for slot, sched in self.slot_schedules().items()}

    def resolved_checkpoints(self) -> set[int]:
        if self.checkpoint_steps is not None:
            return {int(m) for m in self.checkpoint_steps if 0 < m <= self.steps}
        return log_checkpoints(self.steps)


def log_checkpoints(steps: int, per_decade: int = 4) -> set[int]:
    if steps <= 0:
        return set()
    decades = max(1.0, math.log10(steps))
    ms = np.unique(np.round(np.logspace(0, math.log10(steps), int(decades * per_decade) + 1)).astype(int))
    return set(ms.tolist()) | {steps}


def _guard(state: StateVector, m: int) -> None:
    amps = state.amplitudes
    if not np.all(np.isfinite(amps)):
        raise NumericalError(f"non-finite amplitude after step {m}")
    peak = float(np.max(np.abs(amps) ** 2))
    if peak > OVERFLOW_LIMIT:
        raise NumericalError(f"amplitude weight {peak:.3e} after step {m} breaks unitarity")


def _record(run: AteRun, state: StateVector, m: int) -> None:
    _guard(state, m)
    cp = Checkpoint(m, m * run.dt, state.norm())
    if run.target is not None:
        cp.delta = infidelity(state, run.target)
    if state.layout.nuclear_qubits:
        cp.weights = state.nuclear_weights()
    run.checkpoints.append(cp)


def _evolve(run: AteRun, initial: StateVector, with_rotation: bool, callback: Callable | None) -> StateVector:
    problem = run.problem
    if initial.layout != problem.layout:
        raise ValueError("initial state layout does not match the problem")
    state = initial.copy()
    if run.steps == 0:
        return state
    schedules = run.slot_schedules()
    shared = all(schedules[s] is schedules["A1"] for s in SLOTS)
    if shared and run.stepping == "trotter":
        # Every slot follows one A, so V(A) = V_ini + A * (V_fin - V_ini).
        v_start = problem.diagonal(0.0)
        v_slope = problem.diagonal(1.0) - v_start
    kin = kinetic_phases(problem.layout, run.dt) if run.stepping == "trotter" else None
    wanted = run.resolved_checkpoints()
    sched = schedules["A1"]
    for m in range(1, run.steps + 1):
        values = dict.fromkeys(SLOTS, sched(m / run.steps)) if shared else run.slot_values(m)
        if run.stepping == "exact":
            h = hamiltonian_at(problem, values, DEFAULT_CAP)
            state.amplitudes = scipy.linalg.expm(-1j * run.dt * h) @ state.amplitudes
        else:
            diag = v_start + values["A1"] * v_slope if shared else problem.diagonal(values)
            state.amplitudes *= np.exp(-1j * run.dt * diag)
            if with_rotation and problem.layout.nuclear_qubits:
                theta = -2.0 * run.dt * problem.transverse_weight(values)
                if theta:
                    state.apply_nuclear_rx(theta)
            state.kinetic_step(run.dt, kin)
        if m in wanted:
            _record(run, state, m)
            if callback is not None:
                callback(m, state)
        elif m % GUARD_INTERVAL == 0:
            _guard(state, m)
    _guard(state, run.steps)
    return state


def evolve_electronic(run: AteRun, initial: StateVector, callback: Callable | None = None) -> StateVector:
    """Electron-only circuit: potential phase then kinetic step, for ``m = 1 .. N``."""
    if run.problem.transverse:
        raise ValueError("problem has a transverse field; use evolve_structopt")
    return _evolve(run, initial, with_rotation=False, callback=callback)


def evolve_structopt(run: AteRun, initial: StateVector, callback: Callable | None = None) -> StateVector:
    """Structure-search circuit with transverse rotations on the nuclear register."""
    if run.problem.layout.nuclear_qubits == 0:
        raise ValueError("structure search needs a nuclear register")
    return _evolve(run, initial, with_rotation=True, callback=callback)


def evolve(run: AteRun, initial: StateVector, callback: Callable | None = None) -> StateVector:
    if run.problem.layout.nuclear_qubits:
        return evolve_structopt(run, initial, callback)
    return evolve_electronic(run, initial, callback)


def infidelity(final: StateVector, target: SpectrumSlice, degeneracy_tol: float = DEGENERACY_TOL) -> float:
    """``1 - ||P_gs psi||^2`` with ``P_gs`` the projector on the ground eigenspace."""
    vecs = target.eigenvectors
    if vecs.shape[0] != final.amplitudes.size:
        raise ValueError("target spectrum does not match the state layout")
    e = target.eigenvalues
    dim = int(np.count_nonzero(e - e[0] <= degeneracy_tol))
    overlaps = vecs[:, :dim].conj().T @ final.amplitudes
    return float(min(1.0, max(0.0, 1.0 - np.sum(np.abs(overlaps) ** 2))))


@dataclass(frozen=True)
class SweepRow:
    steps: int
    final_time: float
    delta: float | None
    weights: tuple[float, ...] | None


def _sweep_point(args) -> SweepRow:
    problem, schedule, dt, steps, initial, target = args
    run = AteRun(problem, schedule, dt, steps, checkpoint_steps=())
    final = evolve(run, initial)
    delta = infidelity(final, target) if target is not None else None
    weights = tuple(final.nuclear_weights().tolist()) if final.layout.nuclear_qubits else None
    return SweepRow(steps, run.final_time, delta, weights)


def sweep_over_n(
    problem: AdiabaticProblem,
    schedule: Schedule | Mapping[str, Schedule],
    dt: float,
    steps_list: Sequence[int],
    initial: StateVector,
    target: SpectrumSlice | None = None,
    jobs: int = 1,
) -> list[SweepRow]:
    """One full evolution per ``N`` at fixed ``dt`` (so ``t_f = N dt`` grows with ``N``)."""
    steps_list = [int(n) for n in steps_list]
    if any(b < a for a, b in zip(steps_list, steps_list[1:])):
        raise ValueError("N list must be ascending")
    tasks = [(problem, schedule, dt, n, initial, target) for n in steps_list]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]


def first_below(rows: Sequence[SweepRow], threshold: float) -> int | None:
    """Smallest swept ``N`` whose infidelity is below ``threshold``."""
    for row in rows:
        if row.delta is not None and row.delta < threshold:
            return row.steps
    return None
