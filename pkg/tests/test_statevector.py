import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from fqate.grid import GridSpec, RegisterLayout
from fqate.statevector import StateVector, inner_product, kinetic_phases

GRID = GridSpec(10.0, 6)
LAYOUT = RegisterLayout(GRID)


def fourier_oracle(grid):
    """F[s, k] = exp(i p_s x_k) / sqrt(N), written out element by element."""
    n = grid.point_count
    f = np.empty((n, n), dtype=complex)
    for s in range(n):
        for k in range(n):
            f[s, k] = np.exp(1j * (s - n // 2) * grid.momentum_step * k * grid.spacing) / math.sqrt(n)
    return f


def kinetic_oracle(grid):
    f = fourier_oracle(grid)
    e = np.array([((s - grid.point_count // 2) * grid.momentum_step) ** 2 / 2 for s in range(grid.point_count)])
    return f.conj().T @ np.diag(e) @ f


def random_state(layout, seed):
    return StateVector.random(layout, np.random.default_rng(seed))


def test_construction_checks_norm_and_size():
    with pytest.raises(ValueError):
        StateVector(LAYOUT, np.ones(64))
    with pytest.raises(ValueError):
        StateVector(LAYOUT, np.ones(32) / math.sqrt(32))
    with pytest.raises(ValueError):
        StateVector(LAYOUT, np.full(64, np.nan))
    s = StateVector(LAYOUT, np.ones(64), normalize=True)
    assert s.norm() == pytest.approx(1.0, abs=1e-15)


def test_zero_phase_is_identity():
    s = random_state(LAYOUT, 1)
    out = s.copy().apply_diagonal_phase(np.zeros(64), 0.7)
    np.testing.assert_array_equal(out.amplitudes, s.amplitudes)


def test_constant_phase_is_global():
    s = random_state(LAYOUT, 2)
    out = s.copy().apply_diagonal_phase(np.full(64, 3.3), 0.4)
    assert out.fidelity(s) == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(out.amplitudes, np.exp(-1j * 3.3 * 0.4) * s.amplitudes)


def test_phase_on_basis_state():
    s = StateVector.basis(LAYOUT, 5)
    diag = np.zeros(64)
    diag[5] = 2.0
    s.apply_diagonal_phase(diag, 0.1)
    assert np.angle(s.amplitudes[5]) == pytest.approx(-0.2)


def test_phase_rejects_bad_input():
    s = random_state(LAYOUT, 3)
    with pytest.raises(ValueError):
        s.apply_diagonal_phase(np.zeros(10), 0.1)
    with pytest.raises(ValueError):
        s.apply_diagonal_phase(np.full(64, np.inf), 0.1)
    with pytest.raises(ValueError):
        s.apply_diagonal_phase(np.zeros(64), float("nan"))


@pytest.mark.parametrize("q", [2, 3, 6])
def test_qft_matches_explicit_matrix(q):
    grid = GridSpec(7.0, q)
    layout = RegisterLayout(grid)
    s = random_state(layout, q)
    expected = fourier_oracle(grid) @ s.amplitudes
    np.testing.assert_allclose(s.copy().centered_qft_axis(0).amplitudes, expected, atol=1e-12)
    back = fourier_oracle(grid).conj().T @ s.amplitudes
    np.testing.assert_allclose(s.copy().centered_qft_axis(0, inverse=True).amplitudes, back, atol=1e-12)


def test_qft_round_trip():
    s = random_state(LAYOUT, 4)
    out = s.copy().centered_qft_axis(0).centered_qft_axis(0, inverse=True)
    assert out.fidelity(s) >= 1 - 1e-12


def test_uniform_goes_to_zero_momentum():
    s = StateVector(LAYOUT, np.ones(64), normalize=True).centered_qft_axis(0)
    assert abs(s.amplitudes[32]) ** 2 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("s0", [-32, -5, 0, 7, 31])
def test_plane_wave_goes_to_delta(s0):
    # rows of F are exp(+i p_s x_k), so F picks out exp(-i p0 x) at bin s0
    # and exp(+i p0 x) at bin -s0 (mod N)
    x = GRID.positions()
    p0 = s0 * GRID.momentum_step
    down = StateVector(LAYOUT, np.exp(-1j * p0 * x) / 8.0).centered_qft_axis(0)
    assert abs(down.amplitudes[s0 + 32]) ** 2 == pytest.approx(1.0, abs=1e-12)
    up = StateVector(LAYOUT, np.exp(1j * p0 * x) / 8.0).centered_qft_axis(0)
    assert abs(up.amplitudes[(32 - s0) % 64]) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_qft_acts_on_one_axis_only():
    layout = RegisterLayout(GridSpec(5.0, 3), electron_count=2, nuclear_qubits=1)
    s = random_state(layout, 5)
    f = fourier_oracle(layout.grid)
    expected = np.einsum("ab,ibj->iaj", f, s.tensor()).reshape(-1)
    np.testing.assert_allclose(s.copy().centered_qft_axis(1).amplitudes, expected, atol=1e-12)
    with pytest.raises(IndexError):
        s.centered_qft_axis(2)


def test_kinetic_zero_time_identity():
    s = random_state(LAYOUT, 6)
    assert s.copy().kinetic_step(0.0).fidelity(s) == pytest.approx(1.0, abs=1e-14)


def test_kinetic_momentum_eigenstate_phase():
    x = GRID.positions()
    wave = np.exp(1j * 4 * GRID.momentum_step * x) / 8.0
    out = StateVector(LAYOUT, wave).kinetic_step(0.1)
    energy = 16 * (2 * math.pi / 10) ** 2 / 2
    assert energy == pytest.approx(3.1583, abs=1e-4)
    ratio = out.amplitudes / wave
    np.testing.assert_allclose(ratio, np.exp(-1j * energy * 0.1), atol=1e-12)
    assert np.angle(ratio[0]) == pytest.approx(-0.31583, abs=1e-5)


def test_kinetic_leaves_uniform_state():
    s = StateVector(LAYOUT, np.ones(64), normalize=True)
    np.testing.assert_allclose(s.copy().kinetic_step(2.5).amplitudes, s.amplitudes, atol=1e-14)


def test_kinetic_matches_dense_exponential():
    s = random_state(LAYOUT, 7)
    expected = scipy.linalg.expm(-0.37j * kinetic_oracle(GRID)) @ s.amplitudes
    np.testing.assert_allclose(s.copy().kinetic_step(0.37).amplitudes, expected, atol=1e-11)


def test_kinetic_two_electrons_is_kronecker_sum():
    grid = GridSpec(6.0, 3)
    layout = RegisterLayout(grid, electron_count=2, nuclear_qubits=1)
    t1 = kinetic_oracle(grid)
    eye = np.eye(8)
    h = np.kron(np.kron(t1, eye) + np.kron(eye, t1), np.eye(2))
    s = random_state(layout, 8)
    expected = scipy.linalg.expm(-0.5j * h) @ s.amplitudes
    np.testing.assert_allclose(s.copy().kinetic_step(0.5).amplitudes, expected, atol=1e-11)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_kinetic_composes(t1, t2, seed):
    s = random_state(LAYOUT, seed)
    a = s.copy().kinetic_step(t1).kinetic_step(t2)
    b = s.copy().kinetic_step(t1 + t2)
    assert a.fidelity(b) >= 1 - 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_kinetic_commutes_with_swap(seed):
    layout = RegisterLayout(GridSpec(5.0, 3), electron_count=2, dimension=1, nuclear_qubits=1)
    s = random_state(layout, seed)
    a = s.copy().kinetic_step(0.3).swap_electrons(0, 1)
    b = s.copy().swap_electrons(0, 1).kinetic_step(0.3)
    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_symmetric_phase_commutes_with_swap():
    grid = GridSpec(5.0, 3)
    layout = RegisterLayout(grid, electron_count=2)
    x = grid.positions()
    diag = (1.0 / np.sqrt((x[:, None] - x[None, :]) ** 2 + 1)).reshape(-1)
    s = random_state(layout, 9)
    a = s.copy().apply_diagonal_phase(diag, 0.2).swap_electrons(0, 1)
    b = s.copy().swap_electrons(0, 1).apply_diagonal_phase(diag, 0.2)
    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-14)


def test_kinetic_phases_shape():
    layout = RegisterLayout(GridSpec(5.0, 3), electron_count=2, nuclear_qubits=2)
    assert kinetic_phases(layout, 0.1).shape == (8, 8, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.floats(-5, 5))
def test_steps_preserve_norm(seed, tau, theta):
    layout = RegisterLayout(GridSpec(8.0, 4), electron_count=1, nuclear_qubits=2)
    rng = np.random.default_rng(seed)
    s = StateVector.random(layout, rng)
    s.apply_diagonal_phase(rng.normal(size=layout.total_dimension), tau)
    assert abs(s.norm() - 1) <= 1e-10
    s.kinetic_step(tau)
    assert abs(s.norm() - 1) <= 1e-10
    s.centered_qft_axis(0)
    assert abs(s.norm() - 1) <= 1e-10
    s.apply_nuclear_rx(theta)
    assert abs(s.norm() - 1) <= 1e-10


def test_inner_product_examples():
    a = random_state(LAYOUT, 10)
    b = random_state(LAYOUT, 11)
    assert inner_product(a, a) == pytest.approx(1.0)
    assert inner_product(StateVector.basis(LAYOUT, 0), StateVector.basis(LAYOUT, 1)) == 0
    assert a.inner_product(b) == pytest.approx(np.conj(b.inner_product(a)))
    assert abs(a.inner_product(b)) <= 1.0
    with pytest.raises(ValueError):
        a.inner_product(StateVector.basis(RegisterLayout(GRID, nuclear_qubits=1), 0))


def test_swap_involution_and_symmetric_product():
    layout = RegisterLayout(GridSpec(5.0, 3), electron_count=2, dimension=3)
    s = random_state(layout, 12)
    np.testing.assert_array_equal(s.copy().swap_electrons(0, 1).swap_electrons(0, 1).amplitudes, s.amplitudes)
    phi = np.random.default_rng(0).normal(size=8**3)
    phi /= np.linalg.norm(phi)
    prod = StateVector(layout, np.outer(phi, phi).reshape(-1))
    np.testing.assert_allclose(prod.copy().swap_electrons(0, 1).amplitudes, prod.amplitudes)


def test_swap_exchanges_coordinates():
    grid = GridSpec(5.0, 2)
    layout = RegisterLayout(grid, electron_count=3, dimension=1, nuclear_qubits=1)
    idx = layout.flatten([1, 2, 3], 1)
    s = StateVector.basis(layout, idx).swap_electrons(0, 2)
    assert abs(s.amplitudes[layout.flatten([3, 2, 1], 1)]) == 1.0
    with pytest.raises(ValueError):
        s.swap_electrons(1, 1)


def test_two_orbital_determinant_is_odd():
    rng = np.random.default_rng(3)
    grid = GridSpec(5.0, 4)
    layout = RegisterLayout(grid, electron_count=2)
    q, _ = np.linalg.qr(rng.normal(size=(16, 2)))
    phi, chi = q[:, 0], q[:, 1]
    det = (np.outer(phi, chi) - np.outer(chi, phi)) / math.sqrt(2)
    s = StateVector(layout, det.reshape(-1))
    neg = StateVector(layout, -s.amplitudes)
    assert s.copy().swap_electrons(0, 1).fidelity(neg) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(s.copy().swap_electrons(0, 1).amplitudes, -s.amplitudes, atol=1e-14)


def test_nuclear_weights_examples():
    lay = RegisterLayout(GRID, nuclear_qubits=2)
    el = random_state(LAYOUT, 13).amplitudes
    plus = StateVector(lay, np.kron(el, np.full(4, 0.5)))
    np.testing.assert_allclose(plus.nuclear_weights(), [0.25] * 4, atol=1e-14)
    two = StateVector(lay, np.kron(el, np.eye(4)[2]))
    np.testing.assert_allclose(two.nuclear_weights(), [0, 0, 1, 0], atol=1e-14)
    with pytest.raises(ValueError):
        random_state(LAYOUT, 0).nuclear_weights()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_nuclear_weights_sum_to_one(seed):
    lay = RegisterLayout(GridSpec(3.0, 3), electron_count=2, nuclear_qubits=3)
    w = random_state(lay, seed).nuclear_weights()
    assert w.shape == (8,)
    assert w.sum() == pytest.approx(1.0, abs=1e-10)


def test_rx_matches_kron_of_rotations():
    lay = RegisterLayout(GridSpec(3.0, 2), nuclear_qubits=2)
    s = random_state(lay, 14)
    theta = 0.7
    r = np.array([[math.cos(theta / 2), -1j * math.sin(theta / 2)], [-1j * math.sin(theta / 2), math.cos(theta / 2)]])
    op = np.kron(np.eye(4), np.kron(r, r))
    np.testing.assert_allclose(s.copy().apply_nuclear_rx(theta).amplitudes, op @ s.amplitudes, atol=1e-14)


def test_rx_qubit_zero_is_most_significant():
    lay = RegisterLayout(GridSpec(3.0, 1), nuclear_qubits=2)
    s = StateVector.basis(lay, lay.flatten([0], 0b00))
    s.apply_nuclear_rx(math.pi)
    # R_x(pi)^{(x)2} maps |00> to -|11>
    assert s.amplitudes[lay.flatten([0], 0b11)] == pytest.approx(-1.0)


def test_dump_round_trip(tmp_path):
    lay = RegisterLayout(GridSpec(3.0, 3), electron_count=2, nuclear_qubits=1)
    s = random_state(lay, 15)
    path = tmp_path / "state.bin"
    s.dump(path)
    raw = path.read_bytes()
    assert raw[:8] == b"ATESTATE"
    assert int.from_bytes(raw[8:12], "little") == 2
    assert int.from_bytes(raw[12:16], "little") == 7
    assert len(raw) == 16 + 16 * lay.total_dimension
    assert np.frombuffer(raw[16:32], "<f8")[0] == s.amplitudes[0].real
    back = StateVector.load(path, lay)
    np.testing.assert_array_equal(back.amplitudes, s.amplitudes)
    with pytest.raises(ValueError):
        StateVector.load(path, RegisterLayout(GridSpec(3.0, 3)))


def test_handles_two_to_the_twenty_amplitudes():
    lay = RegisterLayout(GridSpec(10.0, 10), electron_count=2)
    s = StateVector(lay, np.ones(lay.total_dimension), normalize=True)
    assert lay.total_dimension == 2**20
    s.kinetic_step(0.1)
    assert abs(s.norm() - 1) <= 1e-10
