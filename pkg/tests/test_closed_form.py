import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from conftest import ball_vectors, eps_values, random_ball, random_pure, tau_values, unit_vectors
from rabims.closed_form import (
    Trajectory,
    excited_population_ground_start,
    geometric_frame,
    ms2_bloch,
    ms2_density,
    rwa_bloch,
    rwa_density,
    rwa_deviation,
    w3_xyz,
)
from rabims.core import BlochVector, DensityState, bloch_from_density, density_from_bloch

GROUND = DensityState(0, -1)


# ---- special-case formulas, written out independently as oracles


def ground_start(eps, tau):
    s = eps * tau
    a10 = eps * (-math.cos(s / 2) ** 2 + math.cos(tau) * math.cos(s))
    a20 = -math.sin(s) - eps * math.sin(tau) * math.cos(s)
    a30 = -math.cos(s) + eps * math.sin(s) * math.sin(tau)
    rho12 = -0.5j * math.sin(s) - 0.5 * eps * (math.cos(s / 2) ** 2 - np.exp(-1j * tau) * math.cos(s))
    return np.array([a10, a20, a30]), rho12


def yz_start(a20, a30, eps, tau):
    s = eps * tau
    r20 = math.cos(s) * a20 + math.sin(s) * a30
    r30 = -math.sin(s) * a20 + math.cos(s) * a30
    a10 = -eps / 2 * math.sin(s) * (1 - 2 * math.cos(tau)) * a20 + eps / 2 * (
        1 + math.cos(s) * (1 - 2 * math.cos(tau))
    ) * a30
    a2 = r20 - eps * math.sin(s) * math.sin(tau) * a20 + eps * math.cos(s) * math.sin(tau) * a30
    a3 = r30 - eps * math.sin(tau) * math.cos(s) * a20 - eps * math.sin(tau) * math.sin(s) * a30
    return np.array([0.0, r20, r30]), np.array([a10, a2, a3])


def x_start(a10, eps, tau):
    s = eps * tau
    return np.array([a10, -eps / 2 * math.sin(s) * a10, -eps / 2 * (1 - 2 * math.cos(tau) + math.cos(s)) * a10])


# ---- RWA


def test_rwa_identity_at_zero(rng):
    for v in random_ball(rng, 20):
        assert rwa_bloch(BlochVector(*v), 0.3, 0.0).as_array() == pytest.approx(v, abs=0)


def test_rwa_half_turn_flips_population():
    r = rwa_bloch(BlochVector(0, 0, -1), 0.25, math.pi / 0.25)
    assert r.as_array() == pytest.approx([0, 0, 1], abs=1e-15)


@given(st.floats(0.01, 0.9), tau_values)
def test_rwa_x_axis_fixed(eps, tau):
    assert rwa_bloch(BlochVector(1, 0, 0), eps, tau).as_array().tolist() == [1.0, 0.0, 0.0]


def test_rwa_density_quarter_turn():
    d = rwa_density(GROUND, 0.1, (math.pi / 2) / 0.1)
    assert d.rho12 == pytest.approx(-0.5j, abs=1e-15)
    assert d.alpha30 == pytest.approx(0.0, abs=1e-15)
    r = rwa_bloch(BlochVector(0, 0, -1), 0.1, (math.pi / 2) / 0.1)
    assert bloch_from_density(d).as_array() == pytest.approx(r.as_array(), abs=1e-15)


def test_rwa_density_period(rng):
    eps = 0.13
    for v in random_ball(rng, 20):
        d0 = density_from_bloch(BlochVector(*v))
        for tau in rng.uniform(0, 200, 5):
            a = rwa_density(d0, eps, tau)
            b = rwa_density(d0, eps, tau + 2 * math.pi / eps)
            assert abs(a.rho12 - b.rho12) < 1e-13 and abs(a.alpha30 - b.alpha30) < 1e-13


@given(ball_vectors(), eps_values, tau_values)
def test_rwa_density_matches_bloch(r0, eps, tau):
    a = bloch_from_density(rwa_density(density_from_bloch(r0), eps, tau)).as_array()
    b = rwa_bloch(r0, eps, tau).as_array()
    assert np.max(np.abs(a - b)) <= 1e-14


@given(ball_vectors(), eps_values, tau_values)
def test_rwa_preserves_norm(r0, eps, tau):
    assert abs(rwa_bloch(r0, eps, tau).norm - r0.norm) <= 1e-14


# ---- two-term solution


@given(ball_vectors(), eps_values)
def test_ms2_is_identity_at_zero(r0, eps):
    d0 = density_from_bloch(r0)
    d = ms2_density(d0, eps, 0.0)
    assert d.rho12 == d0.rho12 and d.alpha30 == pytest.approx(d0.alpha30, abs=1e-16)
    assert ms2_bloch(r0, eps, 0.0).as_array() == pytest.approx(r0.as_array(), abs=1e-16)


def test_ms2_reduces_to_rwa_as_eps_vanishes(rng):
    # eps enters the slow phase eps*tau too, so hold that phase fixed
    for v in random_ball(rng, 20):
        d0 = density_from_bloch(BlochVector(*v))
        for phase in (0.3, 2.0, 5.0):
            diffs = []
            for eps in (1e-2, 1e-3, 1e-4):
                a = ms2_density(d0, eps, phase / eps)
                b = rwa_density(d0, eps, phase / eps)
                diffs.append(max(abs(a.rho12 - b.rho12), abs(a.alpha30 - b.alpha30)))
            # the gap closes linearly in eps
            assert diffs[0] <= 2e-2 and diffs[1] <= 2e-3 and diffs[2] <= 2e-4


def test_ms2_ground_state_special_case(rng):
    for eps, tau in zip(rng.uniform(0.01, 0.5, 200), rng.uniform(0, 300, 200)):
        expected_r, expected_rho = ground_start(eps, tau)
        d = ms2_density(GROUND, eps, tau)
        assert abs(d.rho12 - expected_rho) < 1e-14
        assert ms2_bloch(BlochVector(0, 0, -1), eps, tau).as_array() == pytest.approx(expected_r, abs=1e-14)


def test_ms2_x_axis_special_case(rng):
    for a10, eps, tau in zip(rng.uniform(-1, 1, 200), rng.uniform(0.01, 0.5, 200), rng.uniform(0, 300, 200)):
        got = ms2_bloch(BlochVector(a10, 0, 0), eps, tau).as_array()
        assert got == pytest.approx(x_start(a10, eps, tau), abs=1e-14)
        assert rwa_bloch(BlochVector(a10, 0, 0), eps, tau).as_array() == pytest.approx([a10, 0, 0], abs=0)


def test_ms2_yz_plane_special_case(rng):
    for _ in range(200):
        a20, a30 = rng.uniform(-0.7, 0.7, 2)
        eps, tau = rng.uniform(0.01, 0.5), rng.uniform(0, 300)
        rwa_exp, ms_exp = yz_start(a20, a30, eps, tau)
        assert rwa_bloch(BlochVector(0, a20, a30), eps, tau).as_array() == pytest.approx(rwa_exp, abs=1e-14)
        assert ms2_bloch(BlochVector(0, a20, a30), eps, tau).as_array() == pytest.approx(ms_exp, abs=1e-14)


def test_yz_plane_leaves_plane_only_with_nutation():
    r0 = BlochVector(0, 0.6, -0.8)
    taus = np.linspace(0, 2 * math.pi / 0.1, 500)
    assert max(abs(rwa_bloch(r0, 0.1, t).alpha10) for t in taus) == 0.0
    assert max(abs(ms2_bloch(r0, 0.1, t).alpha10) for t in taus) > 0.05


@given(ball_vectors(), eps_values, tau_values)
def test_ms2_bloch_matches_density_form(r0, eps, tau):
    a = bloch_from_density(ms2_density(density_from_bloch(r0), eps, tau)).as_array()
    b = ms2_bloch(r0, eps, tau).as_array()
    assert np.max(np.abs(a - b)) <= 1e-12


@settings(max_examples=300)
@given(ball_vectors(), eps_values, tau_values)
def test_ms2_never_shrinks(r0, eps, tau):
    assert ms2_bloch(r0, eps, tau).norm >= r0.norm - 1e-15


def test_ms2_within_4eps_of_rwa_over_one_oscillation(rng):
    for v in random_ball(rng, 50):
        r0 = BlochVector(*v)
        for eps in (0.02, 0.1, 0.25):
            for tau in np.linspace(0, 2 * math.pi / eps, 400):
                diff = ms2_bloch(r0, eps, tau).as_array() - rwa_bloch(r0, eps, tau).as_array()
                assert np.max(np.abs(diff)) <= 4 * eps


# ---- geometry


def test_geometric_frame_at_zero():
    f = geometric_frame(0.2, 0.0)
    assert f.w_hat == pytest.approx([1, 0, 0])
    assert f.Q_hat == pytest.approx([1, 0, 0])
    assert f.q == pytest.approx(-0.4)
    assert f.w3 == pytest.approx([0, 0, 0], abs=0)


def test_geometric_frame_quarter_turn():
    f = geometric_frame(0.2, math.pi / 2)
    assert f.w_hat == pytest.approx([0, -1, 0], abs=1e-15)
    assert f.q == pytest.approx(-0.2 * math.sqrt(2))
    assert f.Q_hat == pytest.approx(np.array([1, -1, 0]) / math.sqrt(2))


def test_geometric_frame_singular_axis():
    f = geometric_frame(0.2, 3 * math.pi)
    assert f.singular_axis and f.Q_hat is None and f.q == 0.0
    assert all(np.isfinite(f.w3))


def test_geometric_frame_unit_vectors(rng):
    for eps, tau in zip(rng.uniform(0.01, 0.9, 200), rng.uniform(0, 500, 200)):
        f = geometric_frame(eps, tau)
        assert abs(np.linalg.norm(f.w_hat) - 1) < 1e-12
        assert abs(np.linalg.norm(f.w2_hat) - 1) < 1e-12
        assert abs(np.linalg.norm(f.Q_hat) - 1) < 1e-12
        assert f.q <= 0


def test_w3_matches_integral_form(rng):
    # integral of w_hat from 0 to tau, plus sin(eps*tau/2) * w2_hat
    for eps, tau in zip(rng.uniform(0.01, 0.9, 30), rng.uniform(0, 40, 30)):
        ix = quad(math.cos, 0, tau, limit=200)[0]
        iy = quad(lambda u: -math.sin(u), 0, tau, limit=200)[0]
        h = 0.5 * eps * tau
        expected = np.array([ix, iy, 0.0]) + math.sin(h) * np.array([0.0, math.sin(h), math.cos(h)])
        assert np.array(w3_xyz(eps, tau)) == pytest.approx(expected, abs=1e-10)


# ---- RWA deviation


def test_rwa_deviation_equals_solution_difference(rng):
    for v in random_ball(rng, 100):
        d0 = density_from_bloch(BlochVector(*v))
        eps, tau = rng.uniform(0.01, 0.5), rng.uniform(0, 500)
        dr, da = rwa_deviation(d0, eps, tau)
        a, b = ms2_density(d0, eps, tau), rwa_density(d0, eps, tau)
        assert dr == pytest.approx(abs(a.rho12 - b.rho12), abs=1e-15)
        assert da == pytest.approx(abs(a.alpha30 - b.alpha30), abs=1e-15)


def test_rwa_deviation_vectorized(rng):
    d0 = density_from_bloch(BlochVector(*random_pure(rng, 1)[0]))
    taus = rng.uniform(0, 100, 50)
    dr, da = rwa_deviation(d0, 0.2, taus)
    for t, a, b in zip(taus, dr, da):
        assert (a, b) == pytest.approx(rwa_deviation(d0, 0.2, t), abs=1e-16)


def test_rwa_deviation_zero_at_start():
    assert rwa_deviation(DensityState(0.3 + 0.1j, 0.2), 0.2, 0.0) == (0.0, 0.0)


@given(unit_vectors(), st.floats(0.001, 0.99), tau_values)
def test_rwa_deviation_bounds(r0, eps, tau):
    dr, da = rwa_deviation(density_from_bloch(r0), eps, tau)
    assert dr <= 2 * eps and da <= 4 * eps


# ---- excited population


def test_population_examples():
    assert excited_population_ground_start(0.2, 0.0) == 0.0
    assert excited_population_ground_start(0.25, math.pi / 0.25) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_population_matches_two_term_alpha30(rng):
    for eps, tau in zip(rng.uniform(0.01, 0.5, 1000), rng.uniform(0, 500, 1000)):
        p = excited_population_ground_start(eps, tau)
        assert p == pytest.approx(0.5 * (1 + ms2_density(GROUND, eps, tau).alpha30), abs=1e-14)


@given(st.floats(0.001, 0.99), tau_values)
def test_population_excursion_bounded(eps, tau):
    # quadratic form in (sin, cos) of half the slow phase
    half = 0.5 * math.sqrt(1 + eps * eps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        p = excited_population_ground_start(eps, tau)
    assert 0.5 - half - 1e-15 <= p <= 0.5 + half + 1e-15


def test_population_excursion_is_reported():
    with pytest.warns(RuntimeWarning):
        p = excited_population_ground_start(0.9, 13.493)
    assert p < -0.1


def test_trajectory_validation():
    t = Trajectory([0, 1, 2], np.zeros((3, 3)), "rwa")
    assert len(t) == 3 and t.bloch(1) == BlochVector(0, 0, 0)
    with pytest.raises(ValueError):
        Trajectory([0, 1], np.zeros((3, 3)), "rwa")
    with pytest.raises(ValueError):
        Trajectory([0, 2, 1], np.zeros((3, 3)), "rwa")
