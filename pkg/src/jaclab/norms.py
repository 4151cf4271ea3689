"""L^p and L log L norms of radial functions on balls and annuli.

The L log L norm is the Zygmund-type expression

    ||f||_{L log L(E)} = integral_E |f| log(e + |f| / ||f||_{L^1(E)}) dx,

evaluated in two passes (L^1 mass first). The Luxemburg norm is not
implemented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergentIntegral
from .quadrature import QuadratureConfig, integrate_weighted
from .radial import (
    OVERFLOW_GUARD,
    RadialFunction,
    RadialProfile,
    difference,
    jacobian,
    sobolev_energy,
    sphere_area,
)

__all__ = ["NormReport", "lp_norm", "llogl_norm", "dist", "llogl_bound_ratio", "RatioReport"]


@dataclass(frozen=True)
class NormReport:
    value: float
    space: str
    region: tuple[float, float]
    l1_mass: float
    p: float = 1.0

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "region": list(self.region),
            "value": self.value,
            "l1_mass": self.l1_mass,
        }


def _region(f, region):
    a, b = (0.0, 1.0) if region in (None, "ball") else (float(region[0]), float(region[1]))
    if not 0.0 <= a < b <= 1.0:
        raise ValueError(f"region must satisfy 0 <= a < b <= 1, got [{a}, {b}]")
    return a, b


def _shell_integral(f: RadialFunction, g, a, b, cfg):
    """n omega_n integral_a^b g(r) r^(n-1) dr with f's split points; inf when divergent."""
    try:
        val = integrate_weighted(g, a, b, f.n, cfg, **f.cuts(a, b)).value
    except DivergentIntegral:
        return math.inf
    val *= sphere_area(f.n)
    return math.inf if val > OVERFLOW_GUARD else val


def lp_norm(f: RadialFunction, p: float, region=None, cfg: QuadratureConfig | None = None) -> NormReport:
    """(n omega_n integral_a^b |f|^p r^(n-1) dr)^(1/p)."""
    if p < 1:
        raise ValueError(f"L^p exponent must be >= 1, got {p}")
    a, b = _region(f, region)
    integral = _shell_integral(f, lambda r: np.abs(f(r)) ** p, a, b, cfg)
    l1 = integral if p == 1 else _shell_integral(f, lambda r: np.abs(f(r)), a, b, cfg)
    value = integral ** (1.0 / p) if math.isfinite(integral) else math.inf
    return NormReport(value, f"Lp({p:g})", (a, b), l1, float(p))


def llogl_norm(
    f: RadialFunction,
    region=None,
    cfg: QuadratureConfig | None = None,
    *,
    l1_mass: float | None = None,
) -> NormReport:
    """Two-pass L log L norm; ``l1_mass`` overrides the first pass."""
    a, b = _region(f, region)
    m = _shell_integral(f, lambda r: np.abs(f(r)), a, b, cfg) if l1_mass is None else float(l1_mass)
    if m == 0.0:
        return NormReport(0.0, "LlogL", (a, b), 0.0)
    if not math.isfinite(m):
        return NormReport(math.inf, "LlogL", (a, b), m)

    def integrand(r):
        v = np.abs(f(r))
        return v * np.log(math.e + v / m)

    return NormReport(_shell_integral(f, integrand, a, b, cfg), "LlogL", (a, b), m)


def dist(f: RadialFunction, g: RadialFunction, p: float, cfg: QuadratureConfig | None = None) -> float:
    """dist_p on the unit ball: L^p distance for p > 1, L log L of f - g for p = 1."""
    if p < 1:
        raise ValueError("dist_p needs p >= 1")
    h = difference(f, g)
    if p == 1:
        return llogl_norm(h, None, cfg).value
    return lp_norm(h, p, None, cfg).value


@dataclass(frozen=True)
class RatioReport:
    ratio: float
    numerator: float
    denominator: float
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "ratio": self.ratio,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "metadata": dict(self.metadata),
        }


def llogl_bound_ratio(p: RadialProfile, cfg: QuadratureConfig | None = None) -> RatioReport:
    """||Ju||_{L log L(B_1)} / (1 + integral_0^1 (|rho'|^n + (rho/r)^n) r^(n-1) dr).

    The constant 1 stands in for the fixed identity boundary term and the
    radial n-energy for ||Du||_{L^n}^n. This is a diagnostic ratio; no bound
    on it is asserted.
    """
    if abs(float(p.rho(1.0)) - 1.0) > 1e-8:
        raise ValueError("llogl_bound_ratio needs identity boundary values, rho(1) = 1")
    src = p.source
    ju = RadialFunction(
        n=p.n,
        func=lambda r: jacobian(p, r),
        breakpoints=src.breakpoints if src is not None else (),
        singular_radii=src.singular_radii if src is not None else (),
    )
    num = llogl_norm(ju, None, cfg).value
    energy = sobolev_energy(p, p.n, (0.0, 1.0), cfg)
    den = 1.0 + energy
    return RatioReport(
        ratio=num / den if math.isfinite(den) else 0.0,
        numerator=num,
        denominator=den,
        metadata={
            "gradient_term": "radial n-energy integral_0^1 (|rho'|^n + (rho/r)^n) r^(n-1) dr",
            "boundary_term": 1.0,
            "note": "constants of the comparison are not asserted",
        },
    )
