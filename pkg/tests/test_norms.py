import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jaclab import norms, radial
from jaclab.perturbation import PerturbationParams, build

from oracles import L2_CUSP, LLOGL_DISK, LLOGL_RATIO_IDENTITY


def test_lp_norm_of_one_on_disk():
    assert norms.lp_norm(radial.constant_density(2), 2).value == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_l2_norm_of_boundary_cusp():
    f = radial.RadialFunction(2, lambda r: (1 - r) ** (-1 / 3), singular_radii=(1.0,))
    assert norms.lp_norm(f, 2).value == pytest.approx(L2_CUSP, rel=1e-10)


def test_divergent_norm_is_infinite():
    f = radial.RadialFunction(2, lambda r: (1 - r) ** (-0.6), singular_radii=(1.0,))
    rep = norms.lp_norm(f, 2)
    assert not rep.finite


def test_outer_branch_l1_mass():
    for n in (2, 3):
        params = PerturbationParams(n, 2, 4, -1.5, 0.95)
        fp = build(radial.constant_density(n), params)
        expected = radial.unit_ball_volume(n) * (1 - params.gamma_R**n)
        assert norms.lp_norm(fp, 1, (params.R, 1.0)).value == pytest.approx(expected, rel=1e-10)


def test_llogl_of_one_on_disk():
    rep = norms.llogl_norm(radial.constant_density(2))
    assert rep.value == pytest.approx(LLOGL_DISK, abs=1e-6)
    assert rep.l1_mass == pytest.approx(math.pi)


def test_llogl_of_zero():
    zero = radial.RadialFunction(2, lambda r: np.zeros_like(r))
    assert norms.llogl_norm(zero).value == 0.0


def test_llogl_ratio_identity():
    rep = norms.llogl_bound_ratio(radial.identity_profile(2))
    assert rep.ratio == pytest.approx(LLOGL_RATIO_IDENTITY, rel=1e-10)
    assert rep.metadata["boundary_term"] == 1.0


def test_llogl_ratio_needs_identity_boundary():
    with pytest.raises(ValueError):
        norms.llogl_bound_ratio(radial.power_profile(2, 0.5, 1.0))


def test_dist_self_is_zero(builtin_densities):
    f = builtin_densities["power"]
    assert norms.dist(f, f, 2) == 0.0
    assert norms.dist(f, f, 1) == 0.0


def test_llogl_dominates_l1(builtin_densities):
    for f in builtin_densities.values():
        assert norms.llogl_norm(f).value >= norms.lp_norm(f, 1).value


def test_two_pass_stability(builtin_densities):
    for f in builtin_densities.values():
        rep = norms.llogl_norm(f)
        for d in (-1e-9, 1e-9):
            assert abs(norms.llogl_norm(f, l1_mass=rep.l1_mass + d).value - rep.value) < 1e-6


def _random(seed):
    return radial.random_piecewise_density(2, np.random.default_rng(seed))


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_triangle_inequality(a, b, c):
    f, g, h = _random(a), _random(b), _random(c)
    assert norms.dist(f, h, 2) <= norms.dist(f, g, 2) + norms.dist(g, h, 2) + 1e-9


@given(seed=st.integers(0, 10**6), t=st.floats(0.01, 50))
def test_homogeneity(seed, t):
    f = _random(seed)
    lhs = norms.lp_norm(radial.scaled_density(f, t), 3).value
    assert lhs == pytest.approx(t * norms.lp_norm(f, 3).value, rel=1e-12)


def test_region_validation():
    with pytest.raises(ValueError):
        norms.lp_norm(radial.constant_density(2), 2, (0.5, 0.2))
    with pytest.raises(ValueError):
        norms.lp_norm(radial.constant_density(2), 0.5)
