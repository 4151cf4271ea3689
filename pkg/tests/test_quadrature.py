import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jaclab.errors import DivergentIntegral, InvalidIntegrand, ToleranceNotMet
from jaclab.quadrature import GL_DEGREE, QuadratureConfig, integrate, integrate_weighted

from oracles import INTERIOR_CUSP, WEIGHTED_2R


def test_linear_and_weighted_examples():
    assert integrate(lambda r: r, 0, 1).value == pytest.approx(0.5, abs=1e-15)
    assert integrate_weighted(lambda r: np.ones_like(r), 0, 1, 3).value == pytest.approx(1 / 3, abs=1e-15)
    assert integrate_weighted(lambda r: np.ones_like(r), 0, 1, 2).value == pytest.approx(0.5, abs=1e-15)
    assert integrate_weighted(lambda r: np.ones_like(r), 0.9, 1, 2).value == pytest.approx(0.095, abs=1e-15)


def test_weighted_2r_matches_symbolic_value():
    assert integrate_weighted(lambda r: 2 * r, 0, 1, 2).value == pytest.approx(WEIGHTED_2R, abs=1e-14)


@pytest.mark.parametrize("k", [0, 1, 7, 15, GL_DEGREE])
def test_polynomial_exactness(k):
    assert integrate(lambda r: r**k, 0, 1).value == pytest.approx(1 / (k + 1), rel=1e-14)


def test_flagged_endpoint_singularity():
    cfg = QuadratureConfig(singular_endpoints=(False, True))
    res = integrate(lambda r: (1 - r) ** -0.5, 0, 1, cfg)
    assert res.value == pytest.approx(2.0, abs=1e-12)
    assert res.error < 1e-8


def test_interior_singularity_uses_split_point():
    res = integrate(lambda r: np.abs(r - 0.9) ** (-2 / 3) * r, 0, 1, singular=(0.9,))
    assert res.value == pytest.approx(INTERIOR_CUSP, abs=1e-11)
    assert res.evaluations < 20000


def test_divergent_endpoint_reported():
    with pytest.raises(DivergentIntegral) as info:
        integrate(lambda r: 1 / (1 - r), 0, 1, singular=(1.0,))
    assert info.value.estimate > 0


def test_budget_exhaustion_carries_estimate():
    cfg = QuadratureConfig(rel_tol=1e-14, abs_tol=1e-16, max_subdivisions=2)
    with pytest.raises(ToleranceNotMet) as info:
        integrate(lambda r: np.sin(200 * r) ** 2, 0, 1, cfg)
    assert math.isfinite(info.value.estimate)


def test_nonfinite_sample_is_invalid():
    with pytest.raises(InvalidIntegrand):
        integrate(lambda r: np.where(r > 0.5, np.nan, 1.0), 0, 1)


def test_interval_conventions():
    assert integrate(lambda r: r, 0.3, 0.3).value == 0.0
    with pytest.raises(ValueError):
        integrate(lambda r: r, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate_weighted(lambda r: r, 0, 1, 1)


def test_config_validation_and_json():
    cfg = QuadratureConfig(rel_tol=1e-8, singular_endpoints=(True, False))
    assert QuadratureConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig.from_json({"rel_tol": 1e-8, "mystery": 1})


@given(
    a=st.floats(-3, 3),
    b=st.floats(-3, 3),
    w=st.floats(0.5, 8),
)
def test_linearity(a, b, w):
    g = lambda r: np.cos(w * r)
    h = lambda r: np.exp(-r) * r**2
    both = integrate(lambda r: a * g(r) + b * h(r), 0, 1).value
    sep = a * integrate(g, 0, 1).value + b * integrate(h, 0, 1).value
    assert both == pytest.approx(sep, abs=10 * 1e-10 * (abs(a) + abs(b)) + 1e-12)


@given(c=st.floats(0.01, 0.99), w=st.floats(0.5, 20))
def test_additivity(c, w):
    g = lambda r: np.sin(w * r) + r**3
    whole = integrate(g, 0, 1).value
    parts = integrate(g, 0, c).value + integrate(g, c, 1).value
    assert whole == pytest.approx(parts, abs=10 * 1e-10 * max(1, abs(whole)))


@given(beta=st.floats(0.05, 0.9))
def test_power_singularity_closed_form(beta):
    cfg = QuadratureConfig(singular_endpoints=(True, False))
    res = integrate(lambda r: r**-beta, 0, 1, cfg)
    assert res.value == pytest.approx(1 / (1 - beta), rel=1e-9)
