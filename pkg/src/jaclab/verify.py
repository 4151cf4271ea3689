"""Desk-scale invariant suites, one per module, used by ``jaclab verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import blowup, minimality, norms, perturbation, quadrature, radial
from .errors import DivergentIntegral, JaclabError

SUITES = ("quadrature", "radial", "norms", "perturbation", "blowup", "minimality")
FAULTS = ("roundtrip",)


@dataclass
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str

    @property
    def label(self) -> str:
        return f"{self.suite}.{self.name}"


def _fixtures(n: int = 2, seed: int = 0, count: int = 5):
    rng = np.random.default_rng(seed)
    out = {
        "constant": radial.constant_density(n),
        "power": radial.power_density(n, (n + 1) / n, 1.0),
        "cusp": radial.renormalized(radial.cusp_density(n, 0.5, 1.0, 0.5, 0.25)),
        "sampled": radial.renormalized(
            radial.sampled_density(n, np.linspace(0, 1, 9), 1.0 + 0.5 * np.sin(np.linspace(0, 3, 9)))
        ),
    }
    for k in range(count):
        out[f"random{k}"] = radial.random_piecewise_density(n, rng)
    return out


# --------------------------------------------------------------------------


def _quadrature(ctx):
    res = quadrature.integrate(lambda r: (1.0 - r) ** -0.5, 0.0, 1.0, singular=(1.0,))
    yield "endpoint_singularity", abs(res.value - 2.0) < 1e-10, f"|I - 2| = {abs(res.value - 2.0):.2e}"
    exact = 3.24315690515395
    res = quadrature.integrate(lambda r: np.abs(r - 0.9) ** (-2.0 / 3.0) * r, 0.0, 1.0, singular=(0.9,))
    yield "interior_singularity", abs(res.value - exact) < 1e-10, f"|I - I*| = {abs(res.value - exact):.2e}"
    try:
        quadrature.integrate(lambda r: 1.0 / (1.0 - r), 0.0, 1.0, singular=(1.0,))
        yield "divergence_detected", False, "no error raised"
    except DivergentIntegral:
        yield "divergence_detected", True, "DivergentIntegral"
    g = lambda r: np.exp(r) * np.sin(3 * r)
    h = lambda r: np.sqrt(r)
    lin = quadrature.integrate(lambda r: 2 * g(r) - 3 * h(r), 0, 1).value
    sep = 2 * quadrature.integrate(g, 0, 1).value - 3 * quadrature.integrate(h, 0, 1).value
    yield "linearity", abs(lin - sep) < 1e-9, f"diff {abs(lin - sep):.2e}"
    whole = quadrature.integrate(g, 0, 1).value
    parts = quadrature.integrate(g, 0, 0.3).value + quadrature.integrate(g, 0.3, 1).value
    yield "additivity", abs(whole - parts) < 1e-9, f"diff {abs(whole - parts):.2e}"
    poly = quadrature.integrate(lambda r: r**quadrature.GL_DEGREE, 0, 1).value
    ok = abs(poly - 1.0 / (quadrature.GL_DEGREE + 1)) < 1e-14
    yield "polynomial_exactness", ok, f"degree {quadrature.GL_DEGREE}"


def _radial(ctx):
    rng = np.random.default_rng(ctx["seed"])
    worst = 0.0
    for f in ctx["fixtures"].values():
        prof = radial.solve_radial(f)
        r = rng.uniform(1e-3, 1.0, 100)
        # random radii avoid the jump points of piecewise densities with probability one
        jac = radial.jacobian(prof, r)
        if ctx["fault"] == "roundtrip":
            jac = jac * (1.0 + 1e-5 * r)
        worst = max(worst, float(np.max(np.abs(jac - f(r)) / f(r))))
    yield "roundtrip", worst <= 1e-7, f"max relative error {worst:.2e}"
    err = max(abs(float(radial.solve_radial(f).rho(1.0)) - 1.0) for f in ctx["fixtures"].values())
    yield "boundary_value", err < 1e-8, f"max |rho(1) - 1| = {err:.2e}"
    grid = np.linspace(1e-4, 1.0, 2001)
    mono = all(np.all(np.diff(radial.solve_radial(f).rho(grid)) >= 0) for f in ctx["fixtures"].values())
    yield "monotone_profile", mono, "rho nondecreasing"
    worst = 0.0
    for f in ctx["fixtures"].values():
        prof = radial.solve_radial(f)
        a, b = 0.2, 0.85
        worst = max(worst, abs(radial.image_volume(prof, (a, b)) - radial.ball_integral(f, a, b)))
    yield "change_of_variables", worst < 1e-7, f"max error {worst:.2e}"
    low = True
    for f in ctx["fixtures"].values():
        prof = radial.solve_radial(f)
        low &= bool(np.all(prof.rho(grid) / grid >= f.lower_bound ** (1 / f.n) * (1 - 1e-12)))
    yield "lower_bound_propagation", low, "rho/r >= c^(1/n)"
    e = radial.sobolev_energy(radial.solve_radial(radial.power_density(2, 1.5, 1.0)), 2)
    yield "energy_oracle", abs(e - 13 / 12) < 1e-9, f"|E - 13/12| = {abs(e - 13 / 12):.2e}"


def _norms(ctx):
    v = norms.llogl_norm(radial.constant_density(2)).value
    exact = math.pi * math.log(math.e + 1 / math.pi)
    yield "llogl_oracle", abs(v - exact) < 1e-6, f"|N - pi log(e + 1/pi)| = {abs(v - exact):.2e}"
    fx = list(ctx["fixtures"].values())
    worst = -math.inf
    for f, g, h in zip(fx, fx[1:], fx[2:]):
        lhs = norms.dist(f, h, 2)
        rhs = norms.dist(f, g, 2) + norms.dist(g, h, 2)
        worst = max(worst, lhs - rhs)
    yield "triangle_inequality", worst <= 1e-9, f"max excess {worst:.2e}"
    f = fx[1]
    a = norms.lp_norm(radial.scaled_density(f, 3.0), 2).value
    b = 3.0 * norms.lp_norm(f, 2).value
    yield "homogeneity", abs(a - b) < 1e-9 * b, f"diff {abs(a - b):.2e}"
    dom = all(norms.llogl_norm(f).value >= norms.lp_norm(f, 1).value for f in fx)
    yield "llogl_dominates_l1", dom, "llogl >= L^1"
    rep = norms.llogl_norm(f)
    shift = max(
        abs(norms.llogl_norm(f, l1_mass=rep.l1_mass + d).value - rep.value) for d in (-1e-9, 1e-9)
    )
    yield "two_pass_stability", shift < 1e-6, f"change {shift:.2e}"


def _perturbation(ctx):
    rng = np.random.default_rng(ctx["seed"])
    worst_mean = worst_mass = worst_rel = 0.0
    branch_ok = True
    for k in range(20):
        f = list(ctx["fixtures"].values())[k % len(ctx["fixtures"])]
        q = rng.uniform(2.5, 6.0)
        p = rng.uniform(1.0, min(2.0, q - 0.5))
        alpha = rng.uniform(-q / p + 0.05, -1.05)
        R = rng.uniform(0.8, 0.995)
        params = perturbation.PerturbationParams(2, p, q, alpha, R)
        fp = perturbation.build(f, params)
        worst_mean = max(worst_mean, abs(fp.mean() - 1.0))
        worst_mass = max(worst_mass, abs(perturbation.annulus_mass(params, check=True)
                                         - (1 - params.gamma_R**2) / 2))
        worst_rel = max(worst_rel, abs(1 - params.gamma * R - (1 - R) ** (1 + alpha / q)))
        r = np.linspace(R, 1, 257)
        branch_ok &= bool(np.all(perturbation.outer_branch(params, r) >= params.gamma * (1 - 1e-12)))
    yield "defining_relation", worst_rel < 1e-14, f"max residual {worst_rel:.2e}"
    yield "unit_mean", worst_mean < 1e-9, f"max |mean - 1| = {worst_mean:.2e}"
    yield "annulus_mass", worst_mass < 1e-9, f"max error {worst_mass:.2e}"
    yield "outer_branch_bound", branch_ok, "outer branch >= gamma^(n-1)"
    params = perturbation.PerturbationParams(2, 2, 4, -1.5, 0.9)
    e = perturbation.annulus_energy(params)
    exact = radial.unit_ball_volume(2) * params.M**4 * (1 - 0.9**2)
    ok = abs(e.exact - exact) < 1e-10 * exact and abs(e.surrogate - 0.1**-0.5) < 1e-10 * 0.1**-0.5
    yield "energy_identity", ok, f"exact {e.exact:.12g}, surrogate {e.surrogate:.12g}"
    js = range(8, 49, 4)
    mono = True
    final = 0.0
    for name in ("constant", "power", "cusp"):
        f = ctx["fixtures"][name]
        for p in (1.0, 2.0):
            ds = [norms.dist(f, perturbation.build(f, perturbation.PerturbationParams(2, p, 4, -1.5, 1 - 2.0**-j)), p)
                  for j in js]
            mono &= bool(np.all(np.diff(ds) < 0))
            final = max(final, ds[-1])
    yield "distance_vanishing", mono and final < 0.1, f"R_j = 1 - 2^-j, j = 8..48; last {final:.3g}"
    es = [perturbation.annulus_energy(perturbation.PerturbationParams(2, 2, 4, -1.5, 1 - 2.0**-j)).exact
          for j in range(3, 20)]
    ratios = np.array(es[1:]) / np.array(es[:-1])
    target = 2.0**0.5
    ok = bool(np.all(np.abs(ratios / target - 1) < 0.1))
    yield "energy_divergence", ok, f"ratios in [{ratios.min():.4f}, {ratios.max():.4f}], target {target:.4f}"


def _blowup(ctx):
    f = radial.constant_density(2)
    template = blowup.SweepTemplate()
    R_list = blowup.DEFAULT_R_LIST
    rep = blowup.scan(f, template, R_list)
    ex = rep.column("energy_exact")
    slope = rep.fits["energy_exact_slope"].slope
    yield "energy_blowup", bool(np.all(np.diff(ex) > 0)) and abs(slope + 0.5) < 0.05, f"slope {slope:.4f}"
    tail = rep.column("lp_tail")
    slope = rep.fits["tail_slope"].slope
    yield "tail_vanishing", bool(np.all(np.diff(tail) < 0)) and abs(slope - 0.25) < 0.05, f"slope {slope:.4f}"
    rep1 = blowup.scan(f, blowup.SweepTemplate(p=1.0), R_list)
    ll = rep1.column("llogl_tail")
    gap = 1 - np.array(R_list)
    bound = rep1.llogl_constant * gap**template.llogl_exponent * np.log(math.e + 1 / gap)
    ok = bool(np.all(np.diff(ll) < 0) and np.all(ll <= bound * (1 + 1e-12)))
    yield "llogl_tail_bound", ok, f"K = {rep1.llogl_constant:.4f}"
    worst = 0.0
    for drop in range(len(R_list)):
        sub = [R for k, R in enumerate(R_list) if k != drop]
        r2 = blowup.scan(f, template, sub)
        for key in ("energy_slope", "tail_slope"):
            worst = max(worst, abs(r2.fits[key].slope - rep.fits[key].slope))
    yield "fit_stability", worst < 0.02, f"max leave-one-out change {worst:.4f}"
    s = blowup.sharpness_family(2.0, 4.0, 0.5)
    ok = bool(np.all(np.diff(s.q_energies) > 0)) and s.growth > 10 and s.p_cauchy < 1e-6
    yield "sharpness", ok, f"growth {s.growth:.3f}, p-norm Cauchy {s.p_cauchy:.1e}"
    rng = np.random.default_rng(ctx["seed"])
    ratios = [blowup.estimate_check(radial.random_piecewise_density(2, rng), 2).ratio for _ in range(20)]
    yield "estimate_bounded", max(ratios) < 1.0, f"max ratio {max(ratios):.6f}"


def _minimality(ctx):
    params = perturbation.PerturbationParams(2, 2, 4, -1.5, 0.9)
    u = minimality.radial_map(params, 128, 128)
    rep = minimality.quasimin_ratio(u, params)
    yield "radial_self_competitor", abs(rep.rhs / rep.lhs - 1) < 1e-12, f"RHS/LHS - 1 = {rep.rhs / rep.lhs - 1:.1e}"
    part = minimality.partition(u, params)
    lam = (1 - params.gamma_R**2) / 4
    yield "threshold", part.lam == params.threshold and abs(part.lam - lam) < 1e-15, f"lambda {part.lam!r}"
    rng = np.random.default_rng(ctx["seed"])
    ok, worst = True, math.inf
    for _ in range(3):
        v = minimality.twist_competitor(params, minimality.random_twist(params.R, rng), 128, 128)
        r = minimality.quasimin_ratio(v, params)
        ok &= r.status == "exact" and r.rhs >= r.lhs and r.holds
        worst = min(worst, r.chain["first_moment"]["margin"])
    yield "twist_chain", ok and worst >= 0, f"min first-moment margin {worst:.4f}"
    d = minimality.damped_map(params, n_theta=64, n_r=64)
    p = minimality.partition(d, params)
    yield "damped_split", bool(np.array_equal(p.theta1, np.arange(0, 64, 2))), f"{p.theta1.size} rays in Theta_1"


_SUITE_FUNCS: dict[str, Callable] = {
    "quadrature": _quadrature,
    "radial": _radial,
    "norms": _norms,
    "perturbation": _perturbation,
    "blowup": _blowup,
    "minimality": _minimality,
}


def run(suites=None, *, seed: int = 0, fault: str | None = None) -> list[CheckResult]:
    suites = list(SUITES) if not suites else list(suites)
    unknown = set(suites) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites: {sorted(unknown)}")
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    ctx = {"seed": seed, "fault": fault, "fixtures": _fixtures(seed=seed)}
    results = []
    for suite in suites:
        try:
            for name, ok, detail in _SUITE_FUNCS[suite](ctx):
                results.append(CheckResult(suite, name, bool(ok), detail))
        except (JaclabError, ArithmeticError, ValueError) as exc:
            results.append(CheckResult(suite, "error", False, f"{type(exc).__name__}: {exc}"))
    return results


def summary(results: list[CheckResult]) -> str:
    width = max(len(r.label) for r in results)
    lines = [f"{'PASS' if r.ok else 'FAIL'}  {r.label:<{width}}  {r.detail}" for r in results]
    failed = sum(not r.ok for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)
