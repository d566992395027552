import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqate.grid import GridSpec, RegisterLayout
from fqate.initial_state import (
    OrbitalSet,
    _permutation_sign,
    _squarefree_split,
    epsilon_injectivity_check,
    harmonic_orbitals,
    initial_product_state,
    slater_state,
    uniform_state,
)
from fqate.potentials import harmonic_1d
from fqate.spectra import kinetic_matrix_1d, slice_at
from fqate.statevector import StateVector

GRID = GridSpec(10.0, 6)


def kinetic_expectation(state):
    """<T> from the momentum distribution on every electron axis."""
    lay = state.layout
    t = state.tensor()
    axes = tuple(range(lay.axis_count))
    p = np.abs(np.fft.fftn(t, axes=axes, norm="ortho")) ** 2
    k = 2 * np.pi * np.fft.fftfreq(lay.grid.point_count, d=lay.grid.spacing)
    e1 = k**2 / (2 * lay.grid.mass)
    total = 0.0
    for ax in axes:
        shape = [1] * t.ndim
        shape[ax] = -1
        total += float(np.sum(p * e1.reshape(shape)))
    return total


def test_uniform_examples(parabolic):
    s = uniform_state(RegisterLayout(GRID))
    np.testing.assert_allclose(s.amplitudes, 1 / 8)
    gs = slice_at(parabolic, 0.0).eigenvectors[:, 0]
    assert abs(np.vdot(gs, s.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-10)


def test_uniform_with_nuclear_register_is_all_plus():
    lay = RegisterLayout(GRID, nuclear_qubits=2)
    plus = np.array([1.0, 1.0]) / math.sqrt(2)
    amps = plus
    for _ in range(6 + 2 - 1):
        amps = np.kron(amps, plus)
    np.testing.assert_allclose(uniform_state(lay).amplitudes, amps)


def test_harmonic_orbitals_properties():
    orbs = harmonic_orbitals(GRID, (1.0,), count=6)
    phi0 = orbs.orbital(0)
    assert np.all(phi0 > 0)
    np.testing.assert_allclose(phi0[1:], phi0[1:][::-1], atol=1e-12)
    np.testing.assert_allclose(np.diff(orbs.energies), 1.0, atol=1e-3)
    np.testing.assert_allclose(orbs.overlap(6), np.eye(6), atol=1e-8)
    assert len(orbs) == 6 and orbs.dimension == 1


def test_orbitals_match_dense_diagonalization():
    orbs = harmonic_orbitals(GRID, (1.0,), count=4)
    e = np.linalg.eigvalsh(kinetic_matrix_1d(GRID) + np.diag(harmonic_1d(GRID, 1.0)))
    np.testing.assert_allclose(orbs.energies, e[:4], atol=1e-12)


def test_default_3d_energies_distinct_and_sorted():
    g = GridSpec(10.0, 4)
    orbs = harmonic_orbitals(g, count=10)
    assert orbs.dimension == 3
    assert np.all(np.diff(orbs.energies) > 1e-9)
    # brute-force ordering of the analytic ladder gives the same labels
    w = np.array([1.0, math.sqrt(2), math.sqrt(3)])
    labels = sorted(itertools.product(range(4), repeat=3), key=lambda n: float(w @ (np.array(n) + 0.5)))
    assert list(orbs.quantum_numbers) == labels[:10]
    np.testing.assert_allclose(orbs.overlap(10), np.eye(10), atol=1e-8)


def test_orbital_count_capped():
    with pytest.raises(ValueError):
        harmonic_orbitals(GridSpec(10.0, 3), (1.0,), count=3)
    with pytest.raises(ValueError):
        harmonic_orbitals(GRID, (1.0, 2.0), count=1)


def test_slater_single_electron_is_orbital():
    orbs = harmonic_orbitals(GRID, (1.0,), count=3)
    s = slater_state(orbs, 1)
    np.testing.assert_allclose(s.amplitudes, orbs.orbital(0), atol=1e-14)


def test_slater_two_electrons_odd():
    orbs = harmonic_orbitals(GridSpec(8.0, 4), (1.0,), count=2)
    s = slater_state(orbs, 2)
    neg = StateVector(s.layout, -s.amplitudes)
    assert s.copy().swap_electrons(0, 1).fidelity(neg) == pytest.approx(1.0, abs=1e-12)


def sector_basis(layout):
    n = layout.grid.point_count
    cols = []
    for k1, k2 in itertools.combinations(range(n), 2):
        v = np.zeros(layout.total_dimension)
        v[layout.flatten([k1, k2])] = 1 / math.sqrt(2)
        v[layout.flatten([k2, k1])] = -1 / math.sqrt(2)
        cols.append(v)
    return np.array(cols).T


def test_slater_is_sector_ground_state():
    g = GridSpec(8.0, 4)
    layout = RegisterLayout(g, electron_count=2)
    h1 = kinetic_matrix_1d(g) + np.diag(harmonic_1d(g, 1.0))
    h = np.kron(h1, np.eye(16)) + np.kron(np.eye(16), h1)
    q = sector_basis(layout)
    e, v = np.linalg.eigh(q.T @ h @ q)
    oracle = q @ v[:, 0]
    s = slater_state(harmonic_orbitals(g, (1.0,), count=2), 2)
    assert abs(np.vdot(oracle, s.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("q, n_e, omegas", [(4, 2, (1.0,)), (4, 3, (1.0,)), (3, 2, (1.0, 2.0, 3.0))])
def test_slater_antisymmetric_and_energy(q, n_e, omegas):
    g = GridSpec(8.0, q)
    orbs = harmonic_orbitals(g, omegas, count=n_e)
    s = slater_state(orbs, n_e)
    for i, j in itertools.combinations(range(n_e), 2):
        np.testing.assert_allclose(s.copy().swap_electrons(i, j).amplitudes, -s.amplitudes, atol=1e-12)
    v0 = s.layout
    # potential energy by direct summation over each electron coordinate
    t = s.tensor()[..., 0]
    p = np.abs(t) ** 2
    x = g.positions() - g.length / 2
    pot = 0.0
    for l in range(n_e):
        for mu, w in enumerate(omegas):
            ax = v0.axis_index(l, mu)
            shape = [1] * p.ndim
            shape[ax] = -1
            pot += float(np.sum(p * (0.5 * w**2 * x**2).reshape(shape)))
    energy = kinetic_expectation(s) + pot
    assert energy == pytest.approx(float(np.sum(orbs.energies[:n_e])), abs=1e-6)


def test_slater_rejects_too_many():
    orbs = harmonic_orbitals(GridSpec(8.0, 4), (1.0,), count=2)
    with pytest.raises(ValueError):
        slater_state(orbs, 3)


def test_slater_rejects_non_orthonormal():
    orbs = harmonic_orbitals(GridSpec(8.0, 4), (1.0,), count=2)
    vecs = orbs.axis_vectors[0].copy()
    vecs[:, 1] = vecs[:, 0]
    broken = OrbitalSet(orbs.grid, orbs.omegas, orbs.axis_energies, (vecs,), ((0,), (1,)), orbs.energies)
    with pytest.raises(ValueError):
        slater_state(broken, 2)


def test_slater_with_nuclear_register():
    orbs = harmonic_orbitals(GridSpec(8.0, 4), (1.0,), count=2)
    s = slater_state(orbs, 2, nuclear_qubits=1)
    np.testing.assert_allclose(s.nuclear_weights(), [0.5, 0.5])


@pytest.mark.parametrize("perm, sign", [((0, 1, 2), 1), ((1, 0, 2), -1), ((1, 2, 0), 1), ((2, 1, 0), -1)])
def test_permutation_sign(perm, sign):
    assert _permutation_sign(perm) == sign


@given(st.permutations(range(6)))
def test_permutation_sign_matches_inversions(perm):
    inv = sum(perm[i] > perm[j] for i in range(6) for j in range(i + 1, 6))
    assert _permutation_sign(perm) == (-1) ** inv


def test_product_state_examples(h2plus):
    el = uniform_state(RegisterLayout(GridSpec(15.0, 6)))
    s = initial_product_state(el, 2)
    np.testing.assert_allclose(s.nuclear_weights(), [0.25] * 4)
    same = initial_product_state(el, 0)
    np.testing.assert_array_equal(same.amplitudes, el.amplitudes)
    problem, _ = h2plus
    gs = slice_at(problem, 0.0)
    assert gs.eigenvalues[1] - gs.eigenvalues[0] > 1e-3
    assert abs(np.vdot(gs.eigenvectors[:, 0], s.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValueError):
        initial_product_state(s, 1)


@pytest.mark.parametrize("n, split", [(1, (1, 1)), (2, (1, 2)), (8, (2, 2)), (12, (2, 3)), (72, (6, 2)), (49, (7, 1))])
def test_squarefree_split(n, split):
    assert _squarefree_split(n) == split


def integer_case_analysis(k):
    """Does k_x + sqrt2 k_y + sqrt3 k_z vanish?  Integer-only reasoning.

    Moving k_x across and squaring gives k_x^2 = 2 k_y^2 + 3 k_z^2 + 2 sqrt6 k_y k_z,
    so k_y k_z must vanish.  Then k_x^2 = 2 k_y^2 or k_x^2 = 3 k_z^2, and neither
    2 nor 3 is a rational square, which leaves only the zero vector.
    """
    kx, ky, kz = k
    if ky * kz != 0:
        return False
    if kz == 0:
        return kx * kx == 2 * ky * ky and ky == 0
    return kx * kx == 3 * kz * kz and kz == 0


def test_case_analysis_oracle_over_difference_vectors():
    r = range(-20, 21)
    solutions = [k for k in itertools.product(r, r, r) if integer_case_analysis(k)]
    assert solutions == [(0, 0, 0)]


def test_injectivity_defaults_pass():
    report = epsilon_injectivity_check(20)
    assert report.ok and report.violations == () and report.level_count == 21**3


def test_injectivity_isotropic_fails_with_witness():
    report = epsilon_injectivity_check(20, (1, 1, 1))
    assert not report.ok
    assert ((0, 0, 1), (0, 1, 0)) in report.violations or ((0, 1, 0), (1, 0, 0)) in report.violations
    for n, m in report.violations:
        assert sum(n) == sum(m) and n != m


def test_injectivity_small_brute_force_pairs():
    # all level pairs for n_max = 4, against the case analysis on each difference
    levels = list(itertools.product(range(5), repeat=3))
    ties = [
        (n, m) for n, m in itertools.combinations(levels, 2)
        if integer_case_analysis(tuple(a - b for a, b in zip(n, m)))
    ]
    assert ties == []
    assert epsilon_injectivity_check(4).ok


def test_injectivity_other_frequencies():
    # w = (1, 2, sqrt2): (2,0,0) and (0,1,0) tie
    report = epsilon_injectivity_check(3, (1, 4, 2))
    assert not report.ok
    assert ((0, 1, 0), (2, 0, 0)) in report.violations
    # w = (sqrt2, sqrt8, sqrt3): sqrt8 = 2 sqrt2 ties (2,0,0) and (0,1,0)
    assert not epsilon_injectivity_check(2, (2, 8, 3)).ok
    with pytest.raises(ValueError):
        epsilon_injectivity_check(0)


def test_first_two_excitations_distinct():
    report = epsilon_injectivity_check(1)
    assert report.ok and report.level_count == 8
    assert not epsilon_injectivity_check(1, (1, 1, 3)).ok
