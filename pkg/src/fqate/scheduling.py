"""Annealing schedules ``A(s)`` on normalized time ``s = t / t_f``.

The optimal schedule solves ``dA/ds = c / f(A)`` with ``A(0) = 0`` and
``A(1) = 1``.  The ODE is separable, so

    s(A) = (1/c) * integral_0^A f(A') dA',    c = integral_0^1 f(A') dA',

and ``A(s)`` is the monotone inverse of ``s(A)``.  Quadrature is
trapezoidal on the sampled ``f`` grid, i.e. ``f`` is taken piecewise linear,
which makes ``s(A)`` piecewise quadratic.  That quadratic is inverted exactly
so that ``f(A(s)) dA/ds = c`` holds between knots too, not only on average.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from fqate.potentials import SLOTS


@dataclass(frozen=True)
class Schedule:
    """Monotone tabulated map ``s -> A`` with exact endpoints."""

    kind: str
    s: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    c: float | None = None
    rates: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        s = np.asarray(self.s, dtype=np.float64)
        a = np.asarray(self.a, dtype=np.float64)
        if s.shape != a.shape or s.ndim != 1 or s.size < 2:
            raise ValueError("schedule table needs matching 1D s and A samples")
        if s[0] != 0.0 or s[-1] != 1.0 or a[0] != 0.0 or a[-1] != 1.0:
            raise ValueError("schedule must run from (0, 0) to (1, 1)")
        if np.any(np.diff(s) <= 0):
            raise ValueError("schedule s samples must be strictly increasing")
        if np.any(np.diff(a) < 0):
            raise ValueError("schedule A samples must be non-decreasing")
        s.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "a", a)
        if self.rates is not None:
            rates = np.asarray(self.rates, dtype=np.float64)
            if rates.shape != a.shape or self.c is None:
                raise ValueError("rates need one value per knot and the constant c")
            rates.setflags(write=False)
            object.__setattr__(self, "rates", rates)

    def __call__(self, s):
        if self.rates is None:
            out = np.interp(s, self.s, self.a)
        else:
            out = self._invert_quadratic(np.clip(np.asarray(s, dtype=np.float64), 0.0, 1.0))
        return float(out) if np.ndim(out) == 0 else out

    def _invert_quadratic(self, s: np.ndarray) -> np.ndarray:
        # within a knot interval c (s - s_i) = f_i u + m u^2 / 2 with u = A - A_i
        i = np.clip(np.searchsorted(self.s, s, side="right") - 1, 0, self.s.size - 2)
        f_i = self.rates[i]
        m = (self.rates[i + 1] - f_i) / (self.a[i + 1] - self.a[i])
        rhs = self.c * (s - self.s[i])
        u = 2.0 * rhs / (f_i + np.sqrt(np.maximum(f_i**2 + 2.0 * m * rhs, 0.0)))
        return np.where(s >= 1.0, 1.0, np.minimum(self.a[i] + u, self.a[i + 1]))


def linear_schedule() -> Schedule:
    return Schedule("linear", np.array([0.0, 1.0]), np.array([0.0, 1.0]))


def user_schedule(s, a) -> Schedule:
    return Schedule("user_table", s, a)


def optimal_schedule(a_grid, f_values) -> Schedule:
    """Schedule with ``f(A(s)) dA/ds`` constant; the constant is ``Schedule.c``."""
    a_grid = np.asarray(a_grid, dtype=np.float64)
    f_values = np.asarray(f_values, dtype=np.float64)
    if a_grid.shape != f_values.shape or a_grid.size < 2:
        raise ValueError("f table needs matching A and f samples")
    if a_grid[0] != 0.0 or a_grid[-1] != 1.0 or np.any(np.diff(a_grid) <= 0):
        raise ValueError("A grid must increase strictly from 0 to 1")
    if not np.all(np.isfinite(f_values)) or np.any(f_values <= 0):
        raise ValueError("f must be positive and finite to build the optimal schedule")
    segments = 0.5 * (f_values[1:] + f_values[:-1]) * np.diff(a_grid)
    cumulative = np.concatenate(([0.0], np.cumsum(segments)))
    c = float(cumulative[-1])
    s = cumulative / c
    s[-1] = 1.0
    return Schedule("optimal", s, a_grid.copy(), c, rates=f_values.copy())


def adiabatic_bound(schedule: Schedule, a_grid, f_values, s_grid=None) -> float:
    """``max_s f(A(s)) dA/ds`` on a sample grid.

    ``f`` is interpolated linearly from the table and ``dA/ds`` is a
    finite difference of the schedule on ``s_grid`` (default 4097 uniform
    points).
    """
    if s_grid is None:
        s_grid = np.linspace(0.0, 1.0, 4097)
    s_grid = np.asarray(s_grid, dtype=np.float64)
    a_s = np.asarray(schedule(s_grid))
    slope = np.gradient(a_s, s_grid)
    f_s = np.interp(a_s, a_grid, f_values)
    return float(np.max(f_s * slope))


def slot_schedules(shared: Schedule, overrides: Mapping[str, Schedule] | None = None) -> dict[str, Schedule]:
    """Per-slot schedule map; every slot defaults to ``shared``."""
    out = {slot: shared for slot in SLOTS}
    for slot, sched in (overrides or {}).items():
        if slot not in SLOTS:
            raise ValueError(f"unknown schedule slot {slot!r}")
        out[slot] = sched
    return out
