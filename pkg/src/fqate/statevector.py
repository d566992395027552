"""Dense statevector with the primitive steps of a first-quantized circuit.

The position register of one axis is mapped to momentum by the centred
transform

    F[s, k] = exp(i p_s x_k) / sqrt(N),   p_s = (s - N/2) dp,  x_k = k dx,

which reduces to an orthonormal inverse DFT of ``(-1)**k psi[k]``.  The
kinetic step is ``F^dag diag(exp(-i E_s tau)) F`` on every electron axis;
the alternating signs cancel, so it is applied as one n-dimensional FFT pair.
"""

from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np

from fqate.grid import RegisterLayout

NORM_TOL = 1e-10
_DUMP_MAGIC = b"ATESTATE"
_DUMP_HEADER = struct.Struct("<8sII")


class StateVector:
    """Unit-norm complex amplitudes over a :class:`RegisterLayout`.

    Steps mutate the amplitudes in place and return ``self`` so calls can be
    chained.  Use :meth:`copy` before evolving a state that is still needed.
    """

    def __init__(self, layout: RegisterLayout, amplitudes, *, normalize: bool = False) -> None:
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != layout.total_dimension:
            raise ValueError(
                f"amplitude count {amps.size} does not match layout dimension {layout.total_dimension}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes contain non-finite entries")
        nrm = float(np.linalg.norm(amps))
        if normalize:
            if nrm == 0.0:
                raise ValueError("cannot normalize the zero vector")
            amps /= nrm
        elif abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {nrm!r} differs from 1 by more than {NORM_TOL}")
        self.layout = layout
        self.amplitudes = amps

    # -- construction -----------------------------------------------------

    @classmethod
    def basis(cls, layout: RegisterLayout, index: int) -> StateVector:
        amps = np.zeros(layout.total_dimension, dtype=np.complex128)
        amps[int(index)] = 1.0
        return cls(layout, amps)

    @classmethod
    def random(cls, layout: RegisterLayout, rng: np.random.Generator) -> StateVector:
        amps = rng.normal(size=layout.total_dimension) + 1j * rng.normal(size=layout.total_dimension)
        return cls(layout, amps, normalize=True)

    def copy(self) -> StateVector:
        out = object.__new__(StateVector)
        out.layout = self.layout
        out.amplitudes = self.amplitudes.copy()
        return out

    # -- views ------------------------------------------------------------

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to ``layout.shape`` (a view)."""
        return self.amplitudes.reshape(self.layout.shape)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __len__(self) -> int:
        return self.amplitudes.size

    # -- evolution steps --------------------------------------------------

    def apply_diagonal_phase(self, diag: np.ndarray, tau: float) -> StateVector:
        """``psi[x] <- exp(-i diag[x] tau) psi[x]``."""
        diag = np.asarray(diag, dtype=np.float64).reshape(-1)
        if diag.size != self.amplitudes.size:
            raise ValueError(f"diagonal length {diag.size} != state length {self.amplitudes.size}")
        if not math.isfinite(tau):
            raise ValueError(f"non-finite duration {tau!r}")
        if not np.all(np.isfinite(diag)):
            raise ValueError("diagonal contains non-finite entries")
        self.amplitudes *= np.exp(-1j * tau * diag)
        return self

    def centered_qft_axis(self, electron: int, axis: int = 0, *, inverse: bool = False) -> StateVector:
        ax = self.layout.axis_index(electron, axis)
        n = self.layout.grid.point_count
        sign_shape = [1] * len(self.layout.shape)
        sign_shape[ax] = n
        signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0).reshape(sign_shape)
        t = self.tensor()
        if inverse:
            t = signs * np.fft.fft(t, axis=ax, norm="ortho")
        else:
            t = np.fft.ifft(signs * t, axis=ax, norm="ortho")
        self.amplitudes = np.ascontiguousarray(t).reshape(-1)
        return self

    def kinetic_step(self, tau: float, phases: np.ndarray | None = None) -> StateVector:
        """Free evolution ``exp(-i T tau)`` on every electron axis.

        ``phases`` may carry a precomputed :func:`kinetic_phases` array for
        ``tau``; the evolution loop passes it to avoid rebuilding it each step.
        """
        if phases is None:
            phases = kinetic_phases(self.layout, tau)
        axes = tuple(range(self.layout.axis_count))
        t = np.fft.ifftn(self.tensor(), axes=axes)
        t *= phases
        self.amplitudes = np.fft.fftn(t, axes=axes).reshape(-1)
        return self

    def swap_electrons(self, i: int, j: int) -> StateVector:
        self.amplitudes = swap_electron_axes(self.layout, self.amplitudes, i, j)
        return self

    def apply_nuclear_rx(self, theta: float) -> StateVector:
        """Apply ``R_x(theta) = exp(-i theta/2 sigma_x)`` to every nuclear qubit.

        Nuclear qubit 0 is the most significant bit of ``J``.
        """
        n_qn = self.layout.nuclear_qubits
        if n_qn == 0:
            raise ValueError("layout has no nuclear register")
        c = math.cos(theta / 2.0)
        s = -1j * math.sin(theta / 2.0)
        t = self.amplitudes.reshape((self.layout.electron_dimension,) + (2,) * n_qn)
        for q in range(1, n_qn + 1):
            a0 = np.take(t, 0, axis=q)
            a1 = np.take(t, 1, axis=q)
            t = np.stack((c * a0 + s * a1, s * a0 + c * a1), axis=q)
        self.amplitudes = t.reshape(-1)
        return self

    # -- observables ------------------------------------------------------

    def inner_product(self, other: StateVector) -> complex:
        """``<self|other>``."""
        if other.layout != self.layout:
            raise ValueError("states live on different layouts")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: StateVector) -> float:
        return abs(self.inner_product(other)) ** 2

    def nuclear_weights(self) -> np.ndarray:
        if self.layout.nuclear_qubits == 0:
            raise ValueError("layout has no nuclear register")
        p = self.probabilities().reshape(self.layout.electron_dimension, self.layout.nuclear_dimension)
        return p.sum(axis=0)

    # -- persistence ------------------------------------------------------

    def dump(self, path: str | Path) -> None:
        """Write the binary dump: 16-byte header then little-endian (re, im) float64 pairs."""
        log2_dim = self.layout.total_dimension.bit_length() - 1
        with open(path, "wb") as fh:
            fh.write(_DUMP_HEADER.pack(_DUMP_MAGIC, self.layout.electron_count, log2_dim))
            fh.write(self.amplitudes.astype("<c16").tobytes())

    @classmethod
    def load(cls, path: str | Path, layout: RegisterLayout) -> StateVector:
        raw = Path(path).read_bytes()
        if len(raw) < _DUMP_HEADER.size:
            raise ValueError("state dump shorter than its header")
        magic, n_e, log2_dim = _DUMP_HEADER.unpack_from(raw)
        if magic != _DUMP_MAGIC:
            raise ValueError(f"bad state dump magic {magic!r}")
        if n_e != layout.electron_count or (1 << log2_dim) != layout.total_dimension:
            raise ValueError(
                f"dump is for n_e={n_e}, dim=2**{log2_dim}; layout has "
                f"n_e={layout.electron_count}, dim={layout.total_dimension}"
            )
        amps = np.frombuffer(raw, dtype="<c16", offset=_DUMP_HEADER.size)
        return cls(layout, amps.astype(np.complex128))


def kinetic_phases(layout: RegisterLayout, tau: float) -> np.ndarray:
    """``exp(-i tau sum_axes E(p))`` on the FFT-ordered momentum grid, broadcastable to ``layout.shape``."""
    grid = layout.grid
    n = grid.point_count
    p = np.fft.fftfreq(n, d=1.0 / n) * grid.momentum_step
    e1 = p**2 / (2.0 * grid.mass)
    total = np.zeros((1,) * layout.axis_count)
    for ax in range(layout.axis_count):
        shape = [1] * layout.axis_count
        shape[ax] = n
        total = total + e1.reshape(shape)
    return np.exp(-1j * tau * total)[..., np.newaxis]


def swap_electron_axes(layout: RegisterLayout, values: np.ndarray, i: int, j: int) -> np.ndarray:
    """Permute a flat array over the global index by exchanging electrons ``i`` and ``j``."""
    if i == j:
        raise ValueError("swap requires two distinct electrons")
    t = np.asarray(values).reshape(layout.shape)
    for mu in range(layout.dimension):
        t = np.swapaxes(t, layout.axis_index(i, mu), layout.axis_index(j, mu))
    return np.ascontiguousarray(t).reshape(-1)


def inner_product(a: StateVector, b: StateVector) -> complex:
    return a.inner_product(b)
