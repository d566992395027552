"""Position-basis potentials and their schedule-weighted composition.

Every potential is a real diagonal over the global index space.  The
time-dependent Hamiltonian handled here is

    H(A) = T + A1 V_ext + A2 V_ee + A3 V_en + A4 V_nn + (1 - A5) V_0
             - (1 - A6) J_x sum_l X_l

with every slot running from 0 to 1.  A single-schedule run sets all slots
to the same value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from fqate.grid import GridSpec, RegisterLayout
from fqate.statevector import swap_electron_axes

SLOTS = ("A1", "A2", "A3", "A4", "A5", "A6")
KINDS = ("external_onebody", "electron_electron", "electron_nucleus", "nucleus_nucleus", "initial_v0")
DEFAULT_SLOT = {
    "external_onebody": "A1",
    "electron_electron": "A2",
    "electron_nucleus": "A3",
    "nucleus_nucleus": "A4",
    "initial_v0": "A5",
}
TRANSVERSE_SLOT = "A6"
UNUSED_CONFIG_PENALTY = 1.0e3
SOFTNESS = 1.0


# -- elementary potentials ---------------------------------------------------


def harmonic_1d(grid: GridSpec, omega: float, center: float | None = None) -> np.ndarray:
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    if center is None:
        center = grid.length / 2.0
    x = grid.positions()
    return 0.5 * grid.mass * omega**2 * (x - center) ** 2


def anisotropic_harmonic(
    grid: GridSpec, omegas: Sequence[float] = (1.0, math.sqrt(2.0), math.sqrt(3.0))
) -> list[np.ndarray]:
    """One harmonic diagonal per axis, all centred at ``L/2``."""
    return [harmonic_1d(grid, w) for w in omegas]


def soft_coulomb(z1: float, z2: float, r, softness: float = SOFTNESS):
    if not softness > 0:
        raise ValueError(f"softness must be positive, got {softness!r}")
    return z1 * z2 / np.sqrt(np.square(r) + softness**2)


def v_en_for_bondlength(grid: GridSpec, bond_length: float, softness: float = SOFTNESS) -> np.ndarray:
    """Two unit-charge soft-Coulomb wells at ``(L +- d)/2`` felt by one electron."""
    L = grid.length
    if not 0 < bond_length < L:
        raise ValueError(f"bond length {bond_length!r} must lie in (0, {L})")
    x = grid.positions()
    left = L / 2 - bond_length / 2
    right = L / 2 + bond_length / 2
    return soft_coulomb(-1.0, 1.0, x - right, softness) + soft_coulomb(-1.0, 1.0, x - left, softness)


def v_nn_table(
    bond_lengths: Sequence[float],
    nuclear_qubits: int | None = None,
    softness: float = SOFTNESS,
    penalty: float = UNUSED_CONFIG_PENALTY,
) -> np.ndarray:
    """Nuclear repulsion per label; labels past the list get ``penalty``."""
    d = np.asarray(bond_lengths, dtype=np.float64)
    if d.size == 0:
        raise ValueError("need at least one nuclear configuration")
    size = d.size if nuclear_qubits is None else 1 << nuclear_qubits
    if d.size > size:
        raise ValueError(f"{d.size} configurations do not fit in {nuclear_qubits} nuclear qubits")
    table = np.full(size, float(penalty))
    table[: d.size] = soft_coulomb(1.0, 1.0, d, softness)
    return table


# -- broadcasting onto the global register -----------------------------------


def _electron_coordinate(layout: RegisterLayout, electron: int, axis: int) -> np.ndarray:
    """Positions of one electron coordinate, broadcastable to ``layout.shape``."""
    shape = [1] * len(layout.shape)
    ax = layout.axis_index(electron, axis)
    shape[ax] = layout.grid.point_count
    return layout.grid.positions().reshape(shape)


def _electron_field(layout: RegisterLayout, field_: np.ndarray, electron: int) -> np.ndarray:
    """A single-electron field of shape ``(N,)*d`` placed on one electron's axes."""
    shape = [1] * len(layout.shape)
    for mu in range(layout.dimension):
        shape[layout.axis_index(electron, mu)] = layout.grid.point_count
    return np.asarray(field_).reshape(shape)


def _as_field(layout: RegisterLayout, onebody) -> np.ndarray:
    """Accept a full ``(N,)*d`` field or a list of per-axis 1D diagonals (summed)."""
    n = layout.grid.point_count
    if isinstance(onebody, (list, tuple)):
        if len(onebody) != layout.dimension:
            raise ValueError(f"need {layout.dimension} per-axis diagonals, got {len(onebody)}")
        total = np.zeros((1,) * layout.dimension)
        for mu, diag in enumerate(onebody):
            shape = [1] * layout.dimension
            shape[mu] = n
            total = total + np.asarray(diag, dtype=np.float64).reshape(shape)
        return np.broadcast_to(total, layout.electron_shape()).copy()
    arr = np.asarray(onebody, dtype=np.float64)
    if layout.dimension == 1 and arr.shape == (n,):
        return arr
    if arr.shape != layout.electron_shape():
        raise ValueError(f"one-body field has shape {arr.shape}, expected {layout.electron_shape()}")
    return arr


def onebody_diagonal(layout: RegisterLayout, onebody) -> np.ndarray:
    """``sum_l v(r_l)`` broadcast over the nuclear register."""
    fld = _as_field(layout, onebody)
    total = np.zeros(layout.shape)
    for l in range(layout.electron_count):
        total = total + _electron_field(layout, fld, l)
    return total.reshape(-1)


def electron_electron_diagonal(
    layout: RegisterLayout, charge_product: float = 1.0, softness: float = SOFTNESS
) -> np.ndarray:
    """Pairwise soft-Coulomb repulsion ``sum_{l<l'} v(|r_l - r_l'|)``."""
    total = np.zeros(layout.shape)
    for l, lp in itertools.combinations(range(layout.electron_count), 2):
        r2 = 0.0
        for mu in range(layout.dimension):
            r2 = r2 + (_electron_coordinate(layout, l, mu) - _electron_coordinate(layout, lp, mu)) ** 2
        total = total + charge_product / np.sqrt(r2 + softness**2)
    return np.broadcast_to(total, layout.shape).reshape(-1).copy()


def nuclear_diagonal(layout: RegisterLayout, table: np.ndarray) -> np.ndarray:
    table = np.asarray(table, dtype=np.float64)
    if table.shape != (layout.nuclear_dimension,):
        raise ValueError(f"nuclear table has shape {table.shape}, expected ({layout.nuclear_dimension},)")
    return np.broadcast_to(table, layout.shape).reshape(-1).copy()


def coupled_diagonal(layout: RegisterLayout, fields: Sequence[np.ndarray], fill: float) -> np.ndarray:
    """``sum_J [sum_l v_J(r_l)] |J><J|``; labels without a field get ``fill``."""
    if len(fields) > layout.nuclear_dimension:
        raise ValueError(f"{len(fields)} configurations exceed the nuclear register")
    out = np.full(layout.shape, float(fill))
    single = layout.with_nuclear_qubits(0)
    for j, fld in enumerate(fields):
        out[..., j] = onebody_diagonal(single, fld).reshape(single.shape)[..., 0]
    return out.reshape(-1)


# -- terms and composition ----------------------------------------------------


@dataclass(frozen=True)
class PotentialTerm:
    kind: str
    diagonal: np.ndarray = field(repr=False)
    slot: str = ""
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        slot = self.slot or DEFAULT_SLOT[self.kind]
        if slot not in SLOTS and slot != "fixed":
            raise ValueError(f"unknown schedule slot {slot!r}")
        object.__setattr__(self, "slot", slot)
        diag = np.asarray(self.diagonal, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(diag)):
            raise ValueError(f"{self.kind} diagonal has non-finite entries")
        diag.setflags(write=False)
        object.__setattr__(self, "diagonal", diag)

    @property
    def complementary(self) -> bool:
        """True when the term is switched off as its slot goes to 1."""
        return self.kind == "initial_v0"

    def weight(self, slot_values: Mapping[str, float]) -> float:
        if self.slot == "fixed":
            return 1.0
        a = float(slot_values[self.slot])
        return 1.0 - a if self.complementary else a


def slot_values(a: float | Mapping[str, float]) -> dict[str, float]:
    """Expand a shared schedule value into all six slots."""
    if isinstance(a, Mapping):
        missing = [s for s in SLOTS if s not in a]
        if missing:
            raise ValueError(f"missing schedule slots {missing}")
        return {s: float(a[s]) for s in SLOTS}
    return {s: float(a) for s in SLOTS}


def assemble_diagonal(
    layout: RegisterLayout, terms: Sequence[PotentialTerm], a: float | Mapping[str, float]
) -> np.ndarray:
    values = slot_values(a)
    out = np.zeros(layout.total_dimension)
    for term in terms:
        if term.diagonal.size != layout.total_dimension:
            raise ValueError(f"{term.kind} diagonal does not match the layout")
        out += term.weight(values) * term.diagonal
    return out


@dataclass(frozen=True)
class AdiabaticProblem:
    """Potential terms plus optional transverse field on one layout."""

    layout: RegisterLayout
    terms: tuple[PotentialTerm, ...]
    transverse: float = 0.0
    name: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            if term.diagonal.size != self.layout.total_dimension:
                raise ValueError(f"{term.kind} diagonal does not match the layout")
        if self.transverse < 0:
            raise ValueError("transverse field strength must be >= 0")
        if self.transverse and self.layout.nuclear_qubits == 0:
            raise ValueError("transverse field needs a nuclear register")

    def diagonal(self, a: float | Mapping[str, float]) -> np.ndarray:
        return assemble_diagonal(self.layout, self.terms, a)

    def transverse_weight(self, a: float | Mapping[str, float]) -> float:
        """Coefficient ``(1 - A6) J_x`` of ``-sum_l X_l``."""
        return (1.0 - slot_values(a)[TRANSVERSE_SLOT]) * self.transverse

    def diagonal_derivative(self) -> np.ndarray:
        """``dV/dA`` of the diagonal part when every slot shares one ``A``."""
        out = np.zeros(self.layout.total_dimension)
        for term in self.terms:
            if term.slot == "fixed":
                continue
            out += -term.diagonal if term.complementary else term.diagonal
        return out

    def is_swap_symmetric(self, atol: float = 1e-12) -> bool:
        """Whether every term is invariant under all electron transpositions."""
        if self.layout.electron_count < 2:
            return True
        pairs = list(itertools.combinations(range(self.layout.electron_count), 2))
        return all(
            np.allclose(swap_electron_axes(self.layout, term.diagonal, i, j), term.diagonal, atol=atol, rtol=0)
            for term in self.terms
            for i, j in pairs
        )


def parabolic_problem(length: float = 10.0, qubits: int = 6, omega: float = 1.0) -> AdiabaticProblem:
    """One electron in 1D with ``H(A) = T + A * m w^2 (x - L/2)^2 / 2``."""
    grid = GridSpec(length, qubits)
    layout = RegisterLayout(grid)
    term = PotentialTerm("external_onebody", onebody_diagonal(layout, harmonic_1d(grid, omega)), label="harmonic")
    return AdiabaticProblem(layout, (term,), name="parabolic")
