"""Parameter sweeps recovering the blow-up and tail-vanishing exponents.

Along R -> 1 the radial annulus energy of f_{gamma,R} grows like
(1 - R)^(1 + alpha) while the L^p tail of f_{gamma,R} on A(R, 1) vanishes
like (1 - R)^(alpha p/q + 1); for p = 1 the L log L tail vanishes like
(1 - R)^(alpha/q + 1) log(e + 1/(1 - R)). Exponents are recovered by
ordinary least squares on log-log data.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import FitRefused, JaclabError, ParameterDomainError
from .norms import dist, llogl_norm, lp_norm
from .minimality import quasimin_constant
from .perturbation import PerturbationParams, annulus_energy, build, lp_tail
from .quadrature import QuadratureConfig, integrate
from .radial import (
    CuspDensity,
    RadialDensity,
    cusp_density,
    solve_radial,
    sobolev_energy,
    unit_ball_volume,
)

__all__ = [
    "SweepTemplate",
    "ScanRow",
    "ScanReport",
    "Fit",
    "loglog_fit",
    "quasimin_constant",
    "scan",
    "estimate_check",
    "EstimateReport",
    "sharpness_family",
    "SharpnessReport",
    "CSV_HEADER",
    "SCHEMA",
]

SCHEMA = "jaclab.scan/1"
CSV_HEADER = ("R", "gamma", "M", "dist_p", "energy_exact", "energy_surrogate", "lp_tail", "llogl_tail")
DEFAULT_R_LIST = (0.9, 0.99, 0.999, 0.9999)


@dataclass(frozen=True)
class SweepTemplate:
    """Perturbation parameters without R."""

    n: int = 2
    p: float = 2.0
    q: float = 4.0
    alpha: float = -1.5

    def at(self, R: float) -> PerturbationParams:
        return PerturbationParams(self.n, self.p, self.q, self.alpha, R)

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "q": self.q, "alpha": self.alpha}

    @property
    def energy_exponent(self) -> float:
        return 1.0 + self.alpha

    @property
    def tail_exponent(self) -> float:
        return self.alpha * self.p / self.q + 1.0

    @property
    def llogl_exponent(self) -> float:
        return self.alpha / self.q + 1.0


@dataclass(frozen=True)
class Fit:
    slope: float
    stderr: float
    intercept: float
    points: int

    def to_json(self) -> dict:
        return {"slope": self.slope, "stderr": self.stderr, "intercept": self.intercept, "points": self.points}


def loglog_fit(x, y) -> Fit:
    """OLS fit of log y against log x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = np.isfinite(x) & np.isfinite(y) & (x > 0) & (y > 0)
    if ok.sum() < 3:
        raise FitRefused(f"need at least 3 positive finite points for a fit, got {int(ok.sum())}")
    res = stats.linregress(np.log(x[ok]), np.log(y[ok]))
    stderr = float(res.stderr) if np.isfinite(res.stderr) else 0.0
    return Fit(float(res.slope), stderr, float(res.intercept), int(ok.sum()))


@dataclass
class ScanRow:
    R: float
    gamma: float = math.nan
    M: float = math.nan
    dist_p: float = math.nan
    energy_exact: float = math.nan
    energy_surrogate: float = math.nan
    lp_tail: float = math.nan
    llogl_tail: float = math.nan
    energy_lower_bound: float = math.nan
    lower_bound: float = math.nan
    within_epsilon: bool = False
    lower_bound_ok: bool = False
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def csv_values(self) -> list:
        return [getattr(self, k) for k in CSV_HEADER]

    def to_json(self) -> dict:
        out = {k: getattr(self, k) for k in CSV_HEADER}
        out.update(
            energy_lower_bound=self.energy_lower_bound,
            lower_bound=self.lower_bound,
            within_epsilon=self.within_epsilon,
            lower_bound_ok=self.lower_bound_ok,
            error=self.error,
        )
        return out


@dataclass
class ScanReport:
    rows: list[ScanRow]
    fits: dict[str, Fit]
    params: SweepTemplate
    base: dict
    predicted: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    llogl_constant: float = math.nan

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows if r.ok], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row.csv_values()])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "params": self.params.to_json(),
            "base_density": self.base,
            "quasimin_constant": quasimin_constant(self.params.n, self.params.q),
            "thresholds": dict(self.thresholds),
            "rows": [r.to_json() for r in self.rows],
            "fits": {k: v.to_json() for k, v in self.fits.items()},
            "predicted": dict(self.predicted),
            "llogl_constant": self.llogl_constant,
        }


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("JACLAB_THREADS", "1")))
    except ValueError:
        return 1


def _row(f, template, R, cfg, epsilon, eta):
    row = ScanRow(R=float(R))
    try:
        params = template.at(R)
        fp = build(f, params, cfg)
        energy = annulus_energy(params)
        row.gamma, row.M = params.gamma, params.M
        row.dist_p = dist(f, fp, template.p, cfg)
        row.energy_exact, row.energy_surrogate = energy.exact, energy.surrogate
        row.energy_lower_bound = energy.exact / quasimin_constant(params.n, params.q)
        row.lp_tail = lp_tail(params, f, template.p, cfg).value
        row.llogl_tail = llogl_norm(fp, (params.R, 1.0), cfg).value
        row.lower_bound = fp.lower_bound
        row.within_epsilon = row.dist_p < epsilon
        row.lower_bound_ok = fp.lower_bound >= (1.0 - eta) * f.lower_bound
    except (JaclabError, ValueError, ArithmeticError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def scan(
    f: RadialDensity,
    template: SweepTemplate,
    R_list,
    cfg: QuadratureConfig | None = None,
    *,
    epsilon: float = 0.1,
    eta: float = 0.05,
    threads: int | None = None,
) -> ScanReport:
    """One row per R, then log-log fits against 1 - R.

    Row failures are recorded per row; fits are refused with fewer than
    three successful rows.
    """
    R_list = [float(R) for R in R_list]
    if len(R_list) < 3:
        raise FitRefused(f"a sweep needs at least 3 radii, got {len(R_list)}")
    if any(b <= a for a, b in zip(R_list, R_list[1:])):
        raise ParameterDomainError("R_list must be strictly increasing")
    if any(not 0.75 < R < 1.0 for R in R_list):
        raise ParameterDomainError("every R must lie in (3/4, 1)")
    if f.n != template.n:
        raise ParameterDomainError(f"density dimension {f.n} != template n {template.n}")
    threads = threads or _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda R: _row(f, template, R, cfg, epsilon, eta), R_list))
    else:
        rows = [_row(f, template, R, cfg, epsilon, eta) for R in R_list]
    good = [r for r in rows if r.ok]
    if len(good) < 3:
        raise FitRefused(f"only {len(good)} rows succeeded; a fit needs 3")
    gap = np.array([1.0 - r.R for r in good])
    col = lambda name: np.array([getattr(r, name) for r in good])
    log_factor = np.log(math.e + 1.0 / gap)
    fits = {
        "energy_slope": loglog_fit(gap, col("energy_surrogate")),
        "energy_exact_slope": loglog_fit(gap, col("energy_exact")),
        "tail_slope": loglog_fit(gap, col("lp_tail")),
        "llogl_slope": loglog_fit(gap, col("llogl_tail") / log_factor),
    }
    k_ratio = col("llogl_tail") / (gap**template.llogl_exponent * log_factor)
    return ScanReport(
        rows=rows,
        fits=fits,
        params=template,
        base=f.to_json(),
        predicted={
            "energy_slope": template.energy_exponent,
            "tail_slope": template.tail_exponent,
            "llogl_slope": template.llogl_exponent,
        },
        thresholds={"epsilon": epsilon, "eta": eta},
        llogl_constant=float(k_ratio.max()),
    )


# --------------------------------------------------------------------------
# the radial estimate and its sharpness
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EstimateReport:
    lhs: float
    rhs: float
    ratio: float
    lower_bound: float
    lp_norm: float

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio,
                "lower_bound": self.lower_bound, "lp_norm": self.lp_norm}


def estimate_check(f: RadialDensity, p: float, cfg: QuadratureConfig | None = None) -> EstimateReport:
    """Ratio of ||Du||_p (radial surrogate) to ||f||_p / c^((n-1)/n) + ||f||_p^(1/n) on B_1."""
    c = float(f.lower_bound)
    if not c > 0:
        raise ParameterDomainError("estimate_check needs a positive lower bound")
    n = f.n
    prof = solve_radial(f, cfg)
    lhs = sobolev_energy(prof, p, (0.0, 1.0), cfg) ** (1.0 / p)
    norm = lp_norm(f, p, None, cfg).value
    rhs = norm / c ** ((n - 1) / n) + norm ** (1.0 / n)
    return EstimateReport(lhs, rhs, lhs / rhs, c, norm)


@dataclass
class SharpnessReport:
    density: CuspDensity
    epsilons: list[float]
    q_energies: list[float]
    p_norms: list[float]
    p_norm_full: float
    p: float
    q: float
    delta: float
    predicted_log_slope: float = 0.0

    @property
    def observed_log_slope(self) -> float:
        """Last increment of the q-energy per unit of log(1/eps)."""
        e, E = self.epsilons, self.q_energies
        return (E[-1] - E[-2]) / math.log(e[-2] / e[-1])

    @property
    def growth(self) -> float:
        return self.q_energies[-1] / self.q_energies[0]

    @property
    def p_cauchy(self) -> float:
        return abs(self.p_norms[-1] - self.p_norms[-2])

    def to_json(self) -> dict:
        return {
            "density": self.density.to_json(),
            "p": self.p,
            "q": self.q,
            "delta": self.delta,
            "epsilons": list(self.epsilons),
            "q_energies": list(self.q_energies),
            "p_norms": list(self.p_norms),
            "p_norm_full": self.p_norm_full,
            "growth": self.growth,
            "p_cauchy": self.p_cauchy,
            "predicted_log_slope": self.predicted_log_slope,
            "observed_log_slope": self.observed_log_slope,
        }


def sharpness_family(
    p: float,
    q: float,
    delta: float,
    *,
    n: int = 2,
    center: float = 0.9,
    base: float = 0.5,
    exponent: float | None = None,
    epsilons=None,
    cfg: QuadratureConfig | None = None,
) -> SharpnessReport:
    """Witness that the radial estimate cannot be upgraded from p to q.

    f = base + kappa |r - center|^(-1/q) on (delta, 1), kappa fixing unit
    mean, lies in L^p but not in L^q. The q-energy of the radial solution on
    [delta, 1] with |r - center| > eps is reported for shrinking eps next to
    the truncated (convergent) L^p norm of f. Integrals near the cusp are
    taken in the offset variable t = r - center so that eps can go far below
    the floating-point spacing at ``center``.

    The divergence is logarithmic, E(eps) ~ S log(1/eps), so the default
    schedule eps_k = 0.05 * 10^(-20 k), k = 0..6, spans 120 decades; S is
    reported as ``predicted_log_slope``.
    """
    if not 1 <= p < q:
        raise ParameterDomainError(f"need 1 <= p < q, got p={p}, q={q}")
    if not 0 < delta < 1:
        raise ParameterDomainError("delta must lie in (0, 1)")
    if not delta < center < 1:
        raise ParameterDomainError("center must lie in (delta, 1)")
    beta = 1.0 / q if exponent is None else float(exponent)
    if epsilons is None:
        epsilons = [0.05 * 10.0 ** (-20 * k) for k in range(7)]
    epsilons = [float(e) for e in epsilons]
    unit = cusp_density(n, 0.0, 1.0, center, beta, (delta, 1.0))
    kappa = (1.0 - base) / unit.mean(cfg)
    f = cusp_density(n, base, kappa, center, beta, (delta, 1.0))
    prof = solve_radial(f, cfg)
    left, right = center - delta, 1.0 - center
    sphere = n * unit_ball_volume(n)

    def energy_integrand(t):
        r = center + t
        rho = prof.rho_fn(r)
        rd = r ** (n - 1) * f.offset(t) / rho ** (n - 1)
        return (rd**q + (rho / r) ** q) * r ** (n - 1)

    def power_integrand(t):
        return f.offset(t) ** p * (center + t) ** (n - 1)

    def two_sided(g, eps):
        # t = +-exp(s) turns the approach to the cusp into a smooth integrand on a log scale
        total = 0.0
        for sign, width in ((1.0, right), (-1.0, left)):
            if eps < width:
                total += integrate(
                    lambda s: g(sign * np.exp(s)) * np.exp(s), math.log(eps), math.log(width), cfg
                ).value
        return total

    # [delta, 1] minus the window, plus the ball B_delta where f = base
    q_energies, p_norms = [], []
    inner_p = base**p * delta**n / n
    for eps in epsilons:
        q_energies.append(two_sided(energy_integrand, eps))
        p_norms.append((sphere * (inner_p + two_sided(power_integrand, eps))) ** (1.0 / p))
    full = lp_norm(f, p, None, cfg).value
    # |rho'|^q ~ (center/rho(center))^(q(n-1)) kappa^q / |t| from both sides when exponent = 1/q
    rho0 = float(prof.rho_fn(center))
    slope = 0.0
    if beta * q == 1.0:
        slope = 2.0 * kappa**q * (center / rho0) ** (q * (n - 1)) * center ** (n - 1)
    return SharpnessReport(f, epsilons, q_energies, p_norms, full, float(p), float(q), float(delta), slope)
