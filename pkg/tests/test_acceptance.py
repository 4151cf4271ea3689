"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and runtime budgets are the stated ones; none is relaxed here.
"""

import math
import time

import numpy as np
import pytest

from jaclab import blowup, minimality, norms, radial
from jaclab.cli import main as cli_main
from jaclab.perturbation import PerturbationParams, annulus_mass, annulus_profile, build

import oracles as O

SWEEP = (0.9, 0.99, 0.999, 0.9999)


@pytest.fixture
def verdict(request):
    """Print one line for the criterion, then fail the test if any check failed."""

    def record(number, title, checks, elapsed, budget=None):
        ok = all(passed for _, passed in checks)
        if budget is not None:
            within = elapsed < budget
            checks = [*checks, (f"runtime {elapsed:.2f} s < {budget} s", within)]
            ok = ok and within
        detail = "; ".join(f"{'ok' if passed else 'FAILED'}: {text}" for text, passed in checks)
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number} ({title}): {detail}"
        capman = request.config.pluginmanager.getplugin("capturemanager")
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        assert ok, line

    return record


def _random_params(rng, n=2):
    q = rng.uniform(max(n, 2.5), 7.0)
    p = rng.uniform(1.0, q - 0.5)
    alpha = rng.uniform(-q / p + 0.02, -1.02)
    return PerturbationParams(n, p, q, alpha, rng.uniform(0.76, 0.999))


def test_criterion_1_radial_roundtrip(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    family = [radial.constant_density(2), radial.power_density(2, 1.5, 1.0)]
    family += [radial.random_piecewise_density(2, rng, lower_bound=0.5) for _ in range(20)]
    worst = 0.0
    for f in family:
        prof = radial.solve_radial(f)
        r = rng.uniform(0.0, 1.0, 100)
        r = r[r > 0]
        worst = max(worst, float(np.max(np.abs(radial.jacobian(prof, r) - f(r)) / f(r))))
    elapsed = time.perf_counter() - t0
    verdict(1, "radial roundtrip", [(f"max relative error {worst:.2e} <= 1e-7 over {len(family)} densities",
                                     worst <= 1e-7)], elapsed, 5)


def test_criterion_2_mass_and_boundary(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(99)
    sets = [PerturbationParams(2, 2, 4, -1.5, 0.9)] + [_random_params(rng, n=int(rng.integers(2, 4))) for _ in range(10)]
    mean_err = mass_err = 0.0
    exact_boundary = True
    for params in sets:
        f = radial.constant_density(params.n) if params.n != 2 else radial.random_piecewise_density(2, rng)
        fp = build(f, params)
        # mean by quadrature over the ball, independent of the closed-form cumulative mass
        mean = radial.ball_integral(fp, 0.0, 1.0) / radial.unit_ball_volume(params.n)
        mean_err = max(mean_err, abs(mean - 1.0))
        exact_boundary &= float(annulus_profile(params).rho(1.0)) == 1.0
        exact_boundary &= float(radial.solve_radial(fp).rho(1.0)) == 1.0
        quad = annulus_mass(params, check=True)
        mass_err = max(mass_err, abs(quad - (1 - params.gamma_R**params.n) / params.n))
    elapsed = time.perf_counter() - t0
    verdict(2, "mass and boundary identities", [
        (f"max |mean - 1| = {mean_err:.2e} <= 1e-9", mean_err <= 1e-9),
        ("rho(1) == 1 exactly", exact_boundary),
        (f"max annulus mass error {mass_err:.2e} <= 1e-9", mass_err <= 1e-9),
    ], elapsed, 2)


def test_criterion_3_blowup_exponent(verdict):
    t0 = time.perf_counter()
    rep = blowup.scan(radial.constant_density(2), blowup.SweepTemplate(2, 2, 4, -1.5), SWEEP)
    elapsed = time.perf_counter() - t0
    s = rep.fits["energy_slope"].slope
    e = rep.fits["energy_exact_slope"].slope
    verdict(3, "blow-up exponent", [
        (f"surrogate slope {s:.6f} = -0.5 +- 0.02", abs(s + 0.5) <= 0.02),
        (f"exact energy slope {e:.4f} = -0.5 +- 0.05", abs(e + 0.5) <= 0.05),
    ], elapsed, 2)


def test_criterion_4_tail_vanishing(verdict):
    t0 = time.perf_counter()
    rep = blowup.scan(radial.constant_density(2), blowup.SweepTemplate(2, 2, 4, -1.5), SWEEP)
    elapsed = time.perf_counter() - t0
    s = rep.fits["tail_slope"].slope
    d = rep.column("dist_p")
    verdict(4, "tail-vanishing exponent", [
        (f"tail slope {s:.4f} = 0.25 +- 0.05", abs(s - 0.25) <= 0.05),
        ("dist_p strictly decreasing: " + ", ".join(f"{x:.5f}" for x in d), bool(np.all(np.diff(d) < 0))),
    ], elapsed, 10)


def test_criterion_5_p1_branch(verdict):
    t0 = time.perf_counter()
    rep = blowup.scan(radial.constant_density(2), blowup.SweepTemplate(2, 1, 4, -1.5), SWEEP)
    s = rep.fits["llogl_slope"].slope
    v = norms.llogl_norm(radial.constant_density(2)).value
    elapsed = time.perf_counter() - t0
    verdict(5, "p = 1 branch", [
        (f"log-corrected L log L tail slope {s:.4f} = 0.625 +- 0.05", abs(s - 0.625) <= 0.05),
        (f"L log L of 1 on the disk {v:.10f} vs pinned {O.LLOGL_DISK:.10f} within 1e-6",
         abs(v - O.LLOGL_DISK) <= 1e-6 and abs(O.LLOGL_DISK - math.pi * math.log(math.e + 1 / math.pi)) < 1e-12),
    ], elapsed, 10)


def test_criterion_6_quasiminimality(verdict):
    t0 = time.perf_counter()
    params = PerturbationParams(2, 2, 4, -1.5, 0.9)
    rng = np.random.default_rng(6)
    maps = [minimality.radial_map(params, 256, 256)]
    twists = [minimality.random_twist(params.R, rng) for _ in range(10)]
    maps += [minimality.twist_competitor(params, tw, 256, 256) for tw in twists]
    reports = [minimality.quasimin_ratio(v, params) for v in maps]
    lhs_le_rhs = all(r.lhs <= r.rhs * (1 + 1e-12) for r in reports)
    margin = min(r.chain["first_moment"]["margin"] for r in reports)
    lam = minimality.partition(maps[0], params).lam
    lam_err = abs(lam - (1 - params.gamma**2 * params.R**2) / 4)
    orders = []
    for tw in twists:
        coarse = minimality.jacobian_residual(minimality.twist_competitor(params, tw, 256, 256), params)
        fine = minimality.jacobian_residual(minimality.twist_competitor(params, tw, 512, 512), params)
        orders.append(math.log2(coarse / fine))
    elapsed = time.perf_counter() - t0
    verdict(6, "quasiminimality chain", [
        ("LHS <= RHS for radial map and 10 twists", lhs_le_rhs),
        (f"min first-moment margin {margin:.4f} >= 0", margin >= 0),
        (f"|lambda - (1 - gamma^n R^n)/(2n)| = {lam_err:.1e}", lam_err <= 4 * np.finfo(float).eps),
        (f"residual order under refinement min {min(orders):.3f} >= 1.5", min(orders) >= 1.5),
    ], elapsed, 30)


def test_criterion_7_change_of_variables(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    fixtures = [
        radial.constant_density(2), radial.constant_density(3), radial.power_density(2, 1.5, 1.0),
        radial.piecewise_constant_density(2, [0, 0.5, 1], [1.5, (1 - 1.5 * 0.25) / 0.75]),
        radial.renormalized(radial.cusp_density(2, 0.5, 1.0, 0.5, 0.25)),
        radial.renormalized(radial.sampled_density(2, np.linspace(0, 1, 9), 1 + 0.5 * np.sin(np.linspace(0, 3, 9)))),
        build(radial.constant_density(2), PerturbationParams(2, 2, 4, -1.5, 0.9)),
    ] + [radial.random_piecewise_density(2, rng) for _ in range(5)]
    worst = 0.0
    for f in fixtures:
        prof = radial.solve_radial(f)
        for a, b in [(0.0, 1.0), (0.1, 0.6), (0.55, 0.95)]:
            worst = max(worst, abs(radial.image_volume(prof, (a, b)) - radial.ball_integral(f, a, b)))
    params = PerturbationParams(2, 2, 4, -1.5, 0.9)
    u = minimality.radial_map(params)
    img = minimality.image_accounting(u, minimality.partition(u, params), params)
    target = math.pi * (1 - params.gamma_R**2)
    rel = abs(img.tubes["all"]["image_volume"] - target) / target
    elapsed = time.perf_counter() - t0
    verdict(7, "change of variables", [
        (f"image_volume identity max error {worst:.1e} <= 1e-7", worst <= 1e-7),
        (f"binned image volume relative error {rel:.4f} <= 0.02", rel <= 0.02),
    ], elapsed, 20)


def test_criterion_8_sharpness(verdict):
    t0 = time.perf_counter()
    rep = blowup.sharpness_family(2.0, 4.0, 0.5, n=2, center=0.9)
    elapsed = time.perf_counter() - t0
    E = np.array(rep.q_energies)
    verdict(8, "sharpness", [
        (f"{len(E) - 1} refinements, q-energies strictly increasing", len(E) == 7 and bool(np.all(np.diff(E) > 0))),
        (f"last/first ratio {rep.growth:.3f} > 10", rep.growth > 10),
        (f"p-norm Cauchy gap {rep.p_cauchy:.1e} <= 1e-6", rep.p_cauchy <= 1e-6),
    ], elapsed, 5)


def test_criterion_9_determinism(verdict, tmp_path):
    t0 = time.perf_counter()
    cfg = tmp_path / "scan.json"
    cfg.write_text('{"params": {"R_list": [0.9, 0.99, 0.999, 0.9999]}, "seed": 0}')
    codes = [cli_main(["scan", "--config", str(cfg), "--out", str(tmp_path / name)]) for name in ("one", "two")]
    same = (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()
    elapsed = time.perf_counter() - t0
    verdict(9, "determinism", [
        (f"exit codes {codes}", codes == [0, 0]),
        ("two scan runs give byte-identical JSON", same),
    ], elapsed)
