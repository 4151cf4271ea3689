import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jaclab import radial
from jaclab.errors import InvalidDensity, UndefinedAtOrigin

from oracles import ENERGY_POWER_PROFILE


def test_constant_density_gives_identity():
    for n in (2, 3, 5):
        prof = radial.solve_radial(radial.constant_density(n))
        r = np.linspace(0, 1, 11)
        assert np.allclose(prof.rho(r), r, atol=1e-15)


def test_power_density_profile():
    prof = radial.solve_radial(radial.power_density(2, 1.5, 1.0))
    r = np.linspace(0.01, 1, 50)
    assert np.allclose(prof.rho(r), r**1.5, rtol=1e-14)
    assert np.allclose(prof.rho_dot(r), 1.5 * r**0.5, rtol=1e-13)


def test_jacobian_of_explicit_profiles():
    r = np.linspace(0.05, 1, 20)
    assert np.allclose(radial.jacobian(radial.identity_profile(3), r), 1.0)
    assert np.allclose(radial.jacobian(radial.power_profile(2, 1.0, 1.5), r), 1.5 * r, rtol=1e-14)


def test_annulus_profile_matches_solver(builtin_densities):
    from jaclab.perturbation import PerturbationParams, annulus_profile, build

    params = PerturbationParams(2, 2, 4, -1.5, 0.9)
    fp = build(builtin_densities["constant"], params)
    prof = radial.solve_radial(fp)
    r = np.linspace(0.9, 1, 30)
    assert np.allclose(prof.rho(r), annulus_profile(params).rho(r), rtol=1e-12)


@pytest.mark.parametrize("closed", [True, False])
def test_roundtrip_on_builtins(builtin_densities, closed):
    rng = np.random.default_rng(3)
    for name, f in builtin_densities.items():
        prof = radial.solve_radial(f, use_closed_form=closed)
        r = rng.uniform(1e-3, 1, 100)
        rel = np.abs(radial.jacobian(prof, r) - f(r)) / f(r)
        assert rel.max() <= 1e-7, name


def test_rho_dot_agrees_with_finite_differences(builtin_densities):
    # independent of the identity used by the solver
    for name, f in builtin_densities.items():
        if f.singular_radii or f.breakpoints:
            continue
        prof = radial.solve_radial(f)
        r = np.linspace(0.1, 0.95, 17)
        h = 1e-5
        fd = (prof.rho(r + h) - prof.rho(r - h)) / (2 * h)
        assert np.allclose(prof.rho_dot(r), fd, rtol=1e-7), name


@given(seed=st.integers(0, 2**32 - 1))
def test_roundtrip_random_piecewise(seed):
    f = radial.random_piecewise_density(2, np.random.default_rng(seed))
    prof = radial.solve_radial(f)
    r = np.random.default_rng(seed + 1).uniform(1e-3, 1, 100)
    assert np.max(np.abs(radial.jacobian(prof, r) - f(r)) / f(r)) <= 1e-7
    assert float(prof.rho(1.0)) == pytest.approx(1.0, abs=1e-12)


def test_boundary_value_and_monotonicity(builtin_densities):
    grid = np.linspace(0, 1, 4001)
    for name, f in builtin_densities.items():
        prof = radial.solve_radial(f)
        assert float(prof.rho(1.0)) == pytest.approx(1.0, abs=1e-9), name
        assert np.all(np.diff(prof.rho(grid)) >= 0), name


def test_lower_bound_propagation(builtin_densities):
    r = np.linspace(1e-4, 1, 1000)
    for f in builtin_densities.values():
        prof = radial.solve_radial(f)
        assert np.all(prof.rho(r) / r >= f.lower_bound ** (1 / f.n) * (1 - 1e-12))


def test_change_of_variables(builtin_densities):
    for name, f in builtin_densities.items():
        prof = radial.solve_radial(f)
        for a, b in [(0.0, 1.0), (0.2, 0.7), (0.45, 0.55)]:
            assert radial.image_volume(prof, (a, b)) == pytest.approx(radial.ball_integral(f, a, b), abs=1e-7), name


def test_sobolev_energy_oracle():
    prof = radial.solve_radial(radial.power_density(2, 1.5, 1.0))
    assert radial.sobolev_energy(prof, 2) == pytest.approx(ENERGY_POWER_PROFILE, rel=1e-12)
    assert radial.sobolev_energy(radial.identity_profile(2), 2) == pytest.approx(1.0)


def test_operator_norm_and_radial_derivative():
    prof = radial.power_profile(2, 1.0, 1.5)
    r = np.array([0.25, 1.0])
    assert np.allclose(radial.du_operator_norm(prof, r), np.maximum(1.5 * r**0.5, r**0.5))
    assert np.allclose(radial.radial_derivative_norm(prof, r), 1.5 * r**0.5)


def test_origin_is_refused():
    prof = radial.solve_radial(radial.constant_density(2))
    with pytest.raises(UndefinedAtOrigin):
        prof.rho_dot(0.0)
    with pytest.raises(UndefinedAtOrigin):
        radial.jacobian(prof, np.array([0.0, 0.5]))


def test_zero_lower_bound_refuses_tiny_radii():
    prof = radial.solve_radial(radial.power_density(2, 1.5, 1.0))
    with pytest.raises(UndefinedAtOrigin):
        prof.rho_dot(1e-8)
    assert prof.rho_dot(1e-3) > 0


def test_invalid_densities():
    with pytest.raises(InvalidDensity):
        radial.piecewise_constant_density(2, [0, 0.5, 1], [1.0, -0.5])
    with pytest.raises(InvalidDensity):
        radial.constant_density(2, 1.0, lower_bound=2.0)


def test_json_roundtrip(builtin_densities):
    r = np.linspace(0.01, 0.99, 37)
    for name, f in builtin_densities.items():
        if name in ("cusp", "sampled"):
            continue  # renormalized densities are scaled wrappers; checked below
        g = radial.density_from_json(f.to_json())
        assert np.allclose(f(r), g(r), rtol=1e-15), name
    cusp = builtin_densities["cusp"]
    assert np.allclose(radial.density_from_json(cusp.to_json())(r), cusp(r))


def test_strict_json_decoding():
    with pytest.raises(InvalidDensity):
        radial.density_from_json({"kind": "closed_form", "n": 2, "family": "constant", "colour": "red"})
    with pytest.raises(InvalidDensity):
        radial.density_from_json({"kind": "nope", "n": 2})
    with pytest.raises(InvalidDensity):
        radial.density_from_json({"kind": "piecewise", "edges": [0, 1], "values": [1]})


def test_cusp_offset_keeps_precision():
    f = radial.cusp_density(2, 0.5, 1.0, 0.9, 0.25)
    t = np.array([1e-40, -1e-40])
    assert np.allclose(f.offset(t), 0.5 + 1e10)
