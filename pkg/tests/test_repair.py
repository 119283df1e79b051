import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ball_vectors, eps_values, random_ball, tau_values, unit_vectors
from rabims.closed_form import ms2_density
from rabims.core import BlochVector, DensityState, bloch_from_density, density_from_bloch
from rabims.integrator import IntegrationConfig, integrate
from rabims.repair import (
    PureDecomposition,
    evolve_mixed,
    evolve_pure_normalized,
    ms_eigenvalues,
    ms_norm_sq,
    normalize_pure,
    norm_growth_terms,
)

GROUND = DensityState(0, -1)
EXCITED = DensityState(0, 1)


@given(ball_vectors(), eps_values, tau_values)
def test_norm_growth_identity(r0, eps, tau):
    d0 = density_from_bloch(r0)
    direct = bloch_from_density(ms2_density(d0, eps, tau)).norm ** 2
    assert ms_norm_sq(d0, eps, tau) == pytest.approx(direct, abs=1e-12)


def test_norm_growth_terms_vanish_at_start(rng):
    for v in random_ball(rng, 20):
        e1, e2 = norm_growth_terms(density_from_bloch(BlochVector(*v)), 0.2, 0.0)
        assert abs(e1) < 1e-15 and abs(e2) < 1e-15


@given(unit_vectors(), eps_values, tau_values)
def test_raw_eigenvalues_leave_unit_interval(r0, eps, tau):
    p, m = ms_eigenvalues(density_from_bloch(r0), eps, tau)
    assert p >= 1 - 1e-15 and m <= 1e-15 and p + m == 1.0


def test_normalize_pure():
    d = normalize_pure(DensityState(0.1, 0.3))
    assert d.radius == pytest.approx(1.0, abs=1e-15)
    assert d.rho12 / d.alpha30 == pytest.approx(0.1 / 0.3)
    with pytest.raises(ValueError):
        normalize_pure(DensityState(0, 0))


@given(unit_vectors(), eps_values, tau_values)
def test_normalized_evolution_is_pure(r0, eps, tau):
    d = evolve_pure_normalized(density_from_bloch(r0), eps, tau)
    assert abs(d.radius - 1) <= 1e-14


def test_normalized_requires_pure_input():
    with pytest.raises(ValueError):
        evolve_pure_normalized(DensityState(0, 0.5), 0.1, 1.0)


def test_normalized_closer_to_exact_for_ground_start():
    eps = 0.25
    r0 = BlochVector(0, 0, -1)
    tr = integrate(r0, eps, IntegrationConfig(2 * math.pi / eps, 0.001, sample_stride=5))
    raw = norm = 0.0
    for t, p in zip(tr.taus, tr.points):
        exact = np.linalg.norm(p)
        a = bloch_from_density(ms2_density(GROUND, eps, t)).as_array()
        b = bloch_from_density(evolve_pure_normalized(GROUND, eps, t)).as_array()
        raw = max(raw, np.linalg.norm(a - p) / exact)
        norm = max(norm, np.linalg.norm(b - p) / exact)
    assert norm < raw


def test_decomposition_validation():
    with pytest.raises(ValueError):
        PureDecomposition((0.5, 0.6), (GROUND, EXCITED))
    with pytest.raises(ValueError):
        PureDecomposition((1.2, -0.2), (GROUND, EXCITED))
    with pytest.raises(ValueError):
        PureDecomposition((0.5, 0.5), (GROUND, DensityState(0, 0.5)))
    with pytest.raises(ValueError):
        PureDecomposition((1.0,), (GROUND, EXCITED))
    with pytest.raises(TypeError):
        evolve_mixed(GROUND, 0.1, 1.0)


def test_mixed_at_start_is_convex_combination():
    dec = PureDecomposition((0.7, 0.3), (DensityState(0.5, 0), EXCITED))
    d = evolve_mixed(dec, 0.1, 0.0)
    assert bloch_from_density(d).as_array() == pytest.approx([0.7, 0, 0.3], abs=1e-15)
    assert dec.state() == DensityState(0.35, 0.3)


def test_balanced_antipodal_mixture_stays_at_origin():
    # the two-term map is linear, so antipodal inputs stay antipodal
    dec = PureDecomposition((0.5, 0.5), (GROUND, EXCITED))
    d = evolve_mixed(dec, 0.1, 10.0)
    assert abs(d.rho12) < 1e-15 and abs(d.alpha30) < 1e-15


def test_mixed_result_depends_on_decomposition():
    # the origin as an antipodal pair and as an equal-weight trine
    pair = PureDecomposition((0.5, 0.5), (GROUND, EXCITED))
    h = math.sqrt(3) / 2
    trine = PureDecomposition(
        (1 / 3, 1 / 3, 1 / 3),
        tuple(density_from_bloch(BlochVector(*v)) for v in ((0, 0, 1), (h, 0, -0.5), (-h, 0, -0.5))),
    )
    assert np.abs(bloch_from_density(trine.state()).as_array()).max() < 1e-15
    ra = bloch_from_density(evolve_mixed(pair, 0.2, 7.0)).as_array()
    rb = bloch_from_density(evolve_mixed(trine, 0.2, 7.0)).as_array()
    assert np.abs(ra).max() < 1e-14
    assert np.abs(rb).max() > 1e-4


@settings(max_examples=100)
@given(ball_vectors(), eps_values, tau_values)
def test_eigen_split_reproduces_state_and_stays_physical(r0, eps, tau):
    d0 = density_from_bloch(r0)
    dec = PureDecomposition.from_eigendecomposition(d0)
    s = dec.state()
    assert abs(s.rho12 - d0.rho12) < 1e-15 and abs(s.alpha30 - d0.alpha30) < 1e-15
    d = evolve_mixed(dec, eps, tau)
    assert d.radius <= 1 + 1e-12


@given(st.floats(0.0, 1.0), eps_values, tau_values)
def test_mixed_result_keeps_radius_for_eigen_split(n, eps, tau):
    # antipodal split evolves to an antipodal pair, so the radius is preserved
    d0 = density_from_bloch(BlochVector(0, n * 0.6, n * 0.8))
    d = evolve_mixed(PureDecomposition.from_eigendecomposition(d0), eps, tau)
    assert d.radius == pytest.approx(n, abs=1e-12)
