"""Spatial grids and the layout of electron/nuclear registers.

Every electron axis is an ``n_qe``-qubit register holding ``N = 2**n_qe``
grid points of one shared :class:`GridSpec`.  The global index of a basis
state is built in C order from the electron coordinates followed by the
nuclear label ``J``::

    index = (((k_1 * N + k_2) * N + ...) * 2**n_qn) + J

so the nuclear register is the least significant block and marginal
weights over ``J`` are a strided sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``2**qubit_count`` points on ``[0, length)``."""

    length: float
    qubit_count: int
    mass: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValueError(f"grid length must be positive, got {self.length!r}")
        if int(self.qubit_count) != self.qubit_count or self.qubit_count < 1:
            raise ValueError(f"qubit_count must be an integer >= 1, got {self.qubit_count!r}")
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValueError(f"mass must be positive, got {self.mass!r}")

    @property
    def point_count(self) -> int:
        return 1 << int(self.qubit_count)

    @property
    def spacing(self) -> float:
        return self.length / self.point_count

    @property
    def momentum_step(self) -> float:
        return 2.0 * math.pi / self.length

    def _check_index(self, k: int) -> int:
        k = int(k)
        if not 0 <= k < self.point_count:
            raise IndexError(f"grid index {k} outside [0, {self.point_count})")
        return k

    def position_of(self, k: int) -> float:
        return self._check_index(k) * self.spacing

    def momentum_of(self, s: int) -> float:
        """Momentum of bin ``s``; bins are centred, ``s - N/2`` in ``[-N/2, N/2)``."""
        return (self._check_index(s) - self.point_count // 2) * self.momentum_step

    def positions(self) -> np.ndarray:
        return np.arange(self.point_count) * self.spacing

    def centered_momenta(self) -> np.ndarray:
        """Momenta ordered by bin index ``s = 0 .. N-1``."""
        return (np.arange(self.point_count) - self.point_count // 2) * self.momentum_step

    def kinetic_energies(self) -> np.ndarray:
        """``(s~ dp)**2 / 2m`` ordered by bin index ``s``."""
        return self.centered_momenta() ** 2 / (2.0 * self.mass)


@dataclass(frozen=True)
class RegisterLayout:
    """Composition of ``n_e`` electron position registers and a nuclear register."""

    grid: GridSpec
    electron_count: int = 1
    dimension: int = 1
    nuclear_qubits: int = 0

    def __post_init__(self) -> None:
        if self.electron_count < 1:
            raise ValueError("electron_count must be >= 1")
        if self.dimension not in (1, 3):
            raise ValueError(f"spatial dimension must be 1 or 3, got {self.dimension!r}")
        if self.nuclear_qubits < 0:
            raise ValueError("nuclear_qubits must be >= 0")

    @property
    def axis_count(self) -> int:
        return self.electron_count * self.dimension

    @property
    def electron_dimension(self) -> int:
        return self.grid.point_count ** self.axis_count

    @property
    def nuclear_dimension(self) -> int:
        return 1 << self.nuclear_qubits

    @property
    def total_dimension(self) -> int:
        return self.electron_dimension * self.nuclear_dimension

    @property
    def total_qubits(self) -> int:
        return self.axis_count * self.grid.qubit_count + self.nuclear_qubits

    @property
    def shape(self) -> tuple[int, ...]:
        """Tensor shape of the amplitude array; the last axis is the nuclear label."""
        return (self.grid.point_count,) * self.axis_count + (self.nuclear_dimension,)

    def axis_index(self, electron: int, axis: int) -> int:
        """Tensor axis holding coordinate ``axis`` of electron ``electron``."""
        if not 0 <= electron < self.electron_count:
            raise IndexError(f"electron {electron} outside [0, {self.electron_count})")
        if not 0 <= axis < self.dimension:
            raise IndexError(f"axis {axis} outside [0, {self.dimension})")
        return electron * self.dimension + axis

    def flatten(self, electron_indices: Sequence[int], nuclear_index: int = 0) -> int:
        """Global index of ``(k_1, ..., k_{n_e d}, J)``.

        ``electron_indices`` lists every electron axis coordinate in register
        order (electron-major, then x/y/z).
        """
        coords = tuple(int(k) for k in electron_indices)
        if len(coords) != self.axis_count:
            raise ValueError(f"expected {self.axis_count} electron coordinates, got {len(coords)}")
        n = self.grid.point_count
        index = 0
        for k in coords:
            if not 0 <= k < n:
                raise IndexError(f"electron coordinate {k} outside [0, {n})")
            index = index * n + k
        j = int(nuclear_index)
        if not 0 <= j < self.nuclear_dimension:
            raise IndexError(f"nuclear index {j} outside [0, {self.nuclear_dimension})")
        return index * self.nuclear_dimension + j

    def unflatten(self, index: int) -> tuple[tuple[int, ...], int]:
        index = int(index)
        if not 0 <= index < self.total_dimension:
            raise IndexError(f"global index {index} outside [0, {self.total_dimension})")
        index, j = divmod(index, self.nuclear_dimension)
        n = self.grid.point_count
        coords = []
        for _ in range(self.axis_count):
            index, k = divmod(index, n)
            coords.append(k)
        return tuple(reversed(coords)), j

    def electron_shape(self) -> tuple[int, ...]:
        return (self.grid.point_count,) * self.dimension

    def with_nuclear_qubits(self, n_qn: int) -> RegisterLayout:
        return RegisterLayout(self.grid, self.electron_count, self.dimension, n_qn)
