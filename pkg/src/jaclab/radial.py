"""Radial data and radial stretchings u(x) = rho(|x|) x/|x|.

For a radial density f the stretching solving det Du = f with u = id on the
unit sphere has

    rho(r)^n = integral_0^r n f(s) s^(n-1) ds,
    rho'(r)  = r^(n-1) f(r) / rho(r)^(n-1),

and Du(x) has eigenvalue rho' in the radial direction and rho/r (n-1 times)
tangentially, so Ju = rho' rho^(n-1) / r^(n-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import comb, gammaln

from .errors import DivergentIntegral, InvalidDensity, UndefinedAtOrigin
from .quadrature import QuadratureConfig, integrate, integrate_weighted

__all__ = [
    "unit_ball_volume",
    "sphere_area",
    "RadialFunction",
    "RadialDensity",
    "RadialProfile",
    "constant_density",
    "power_density",
    "piecewise_constant_density",
    "sampled_density",
    "cusp_density",
    "CuspDensity",
    "renormalized",
    "scaled_density",
    "random_piecewise_density",
    "difference",
    "density_from_json",
    "identity_profile",
    "power_profile",
    "affine_profile",
    "solve_radial",
    "jacobian",
    "du_operator_norm",
    "radial_derivative_norm",
    "sobolev_energy",
    "image_volume",
    "ball_integral",
]

# values above this are reported as an infinite energy/norm
OVERFLOW_GUARD = 1e300


def unit_ball_volume(n: int) -> float:
    """omega_n, the Lebesgue measure of the unit ball in R^n."""
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0))


def sphere_area(n: int) -> float:
    """H^(n-1) of the unit sphere, n * omega_n."""
    return n * unit_ball_volume(n)


def _check_dim(n):
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n}")
    return int(n)


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """A signed radial function on [0, 1]; ``func`` is vectorised in r."""

    n: int
    func: Callable
    breakpoints: tuple = ()
    singular_radii: tuple = ()

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.asarray(self.func(r), dtype=float)
        return np.broadcast_to(out, r.shape).copy() if out.shape != r.shape else out

    def cuts(self, a: float, b: float) -> dict:
        """Quadrature split points of this function inside (a, b)."""
        return {
            "breaks": tuple(p for p in self.breakpoints if a < p < b),
            "singular": tuple(p for p in self.singular_radii if a <= p <= b),
        }


@dataclass(frozen=True, eq=False)
class RadialDensity(RadialFunction):
    """A nonnegative radial datum with lower bound ``lower_bound``.

    ``mass`` is an optional closed form of r -> n * integral_0^r f s^(n-1) ds;
    when absent, quadrature is used.
    """

    lower_bound: float = 0.0
    kind: str = "closed_form"
    params: dict = field(default_factory=dict)
    mass: Callable | None = None

    def validate(self, samples: int = 2001) -> RadialDensity:
        r = np.linspace(0.0, 1.0, samples)[1:]
        if self.singular_radii:
            r = r[~np.isin(r, np.asarray(self.singular_radii, dtype=float))]
        vals = self(r)
        if np.any(np.isnan(vals)):
            raise InvalidDensity(f"density {self.kind} is NaN at sampled radii")
        if np.any(vals < 0):
            raise InvalidDensity(f"density is negative at r={r[np.argmax(vals < 0)]:.6g}")
        slack = 1e-12 * max(1.0, abs(self.lower_bound))
        if np.any(vals < self.lower_bound - slack):
            i = int(np.argmin(vals))
            raise InvalidDensity(
                f"density value {vals[i]:.6g} at r={r[i]:.6g} is below lower_bound {self.lower_bound:.6g}"
            )
        return self

    def cumulative(self, r, cfg: QuadratureConfig | None = None):
        """n * integral_0^r f(s) s^(n-1) ds, i.e. rho(r)^n of the radial solution."""
        if self.mass is not None:
            return np.asarray(self.mass(np.asarray(r, dtype=float)), dtype=float)
        return _tabulated_mass(self, cfg)(r)

    def mean(self, cfg: QuadratureConfig | None = None) -> float:
        """Average of f over the unit ball."""
        return float(self.cumulative(1.0, cfg))

    def to_json(self) -> dict:
        if self.kind == "sampled_table":
            return {"kind": self.kind, "n": self.n, "samples": [list(p) for p in self.params["samples"]]}
        out = {"kind": self.kind, "n": self.n}
        out.update({k: v for k, v in self.params.items()})
        return out


@dataclass(frozen=True, eq=False)
class CuspDensity(RadialDensity):
    """Density with one power singularity; ``offset(t)`` evaluates f(center + t) from t."""

    offset_fn: Callable | None = None

    @property
    def center(self) -> float:
        return self.params["center"]

    def offset(self, t):
        return self.offset_fn(t)


def difference(f: RadialFunction, g: RadialFunction) -> RadialFunction:
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    return RadialFunction(
        n=f.n,
        func=lambda r: f(r) - g(r),
        breakpoints=tuple(sorted(set(f.breakpoints) | set(g.breakpoints))),
        singular_radii=tuple(sorted(set(f.singular_radii) | set(g.singular_radii))),
    )


# --------------------------------------------------------------------------
# built-in densities
# --------------------------------------------------------------------------


def constant_density(n: int, value: float = 1.0, lower_bound: float | None = None) -> RadialDensity:
    n = _check_dim(n)
    value = float(value)
    if value < 0:
        raise InvalidDensity(f"constant density must be nonnegative, got {value}")
    lb = value if lower_bound is None else float(lower_bound)
    return RadialDensity(
        n=n,
        func=lambda r: np.full_like(r, value),
        lower_bound=lb,
        params={"family": "constant", "value": value, "lower_bound": lb},
        mass=lambda r: value * r**n,
    ).validate()


def power_density(n: int, coeff: float, exponent: float) -> RadialDensity:
    """f(r) = coeff * r^exponent."""
    n = _check_dim(n)
    coeff, exponent = float(coeff), float(exponent)
    if coeff < 0:
        raise InvalidDensity("power density needs coeff >= 0")
    if exponent <= -n:
        raise InvalidDensity(f"r^{exponent} is not integrable against r^{n - 1} at the origin")
    lb = 0.0 if exponent > 0 else coeff
    return RadialDensity(
        n=n,
        func=lambda r: coeff * r**exponent,
        singular_radii=(0.0,) if exponent < 0 else (),
        lower_bound=lb,
        params={"family": "power", "coeff": coeff, "exponent": exponent},
        mass=lambda r: n * coeff * r ** (n + exponent) / (n + exponent),
    ).validate()


def piecewise_constant_density(n: int, edges: Sequence[float], values: Sequence[float]) -> RadialDensity:
    n = _check_dim(n)
    edges = np.asarray(edges, dtype=float)
    values = np.asarray(values, dtype=float)
    if edges.ndim != 1 or len(edges) != len(values) + 1:
        raise InvalidDensity("need len(edges) == len(values) + 1")
    if edges[0] != 0.0 or edges[-1] != 1.0 or np.any(np.diff(edges) <= 0):
        raise InvalidDensity("edges must increase strictly from 0 to 1")
    if np.any(values < 0):
        raise InvalidDensity("piecewise values must be nonnegative")
    cum = np.concatenate([[0.0], np.cumsum(values * np.diff(edges**n))])

    def func(r):
        idx = np.clip(np.searchsorted(edges, r, side="right") - 1, 0, len(values) - 1)
        return values[idx]

    def mass(r):
        r = np.asarray(r, dtype=float)
        idx = np.clip(np.searchsorted(edges, r, side="right") - 1, 0, len(values) - 1)
        return cum[idx] + values[idx] * (r**n - edges[idx] ** n)

    return RadialDensity(
        n=n,
        func=func,
        breakpoints=tuple(float(e) for e in edges[1:-1]),
        lower_bound=float(values.min()),
        kind="piecewise",
        params={"edges": edges.tolist(), "values": values.tolist()},
        mass=mass,
    ).validate()


def sampled_density(n: int, radii: Sequence[float], values: Sequence[float]) -> RadialDensity:
    """Monotone piecewise-cubic (PCHIP) interpolation of (r, value) samples on [0, 1]."""
    n = _check_dim(n)
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.shape != values.shape or radii.ndim != 1 or len(radii) < 2:
        raise InvalidDensity("samples must be matching 1-D arrays with at least two points")
    if np.any(np.diff(radii) <= 0):
        raise InvalidDensity("sample radii must be strictly increasing")
    if radii[0] != 0.0 or radii[-1] != 1.0:
        raise InvalidDensity("sample radii must start at 0 and end at 1")
    if np.any(values < 0):
        raise InvalidDensity("sampled density values must be nonnegative")
    interp = PchipInterpolator(radii, values, extrapolate=True)
    return RadialDensity(
        n=n,
        func=lambda r: interp(np.clip(r, 0.0, 1.0)),
        breakpoints=tuple(float(x) for x in radii[1:-1]),
        lower_bound=float(values.min()),
        kind="sampled_table",
        params={"samples": [[float(a), float(b)] for a, b in zip(radii, values)]},
    ).validate()


def _cusp_antiderivative(t, center, exponent, n):
    """Antiderivative of |t|^-exponent (t + center)^(n-1) in t, vanishing at t = 0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    at = np.abs(t)
    sgn = np.sign(t)
    for k in range(n):
        e = k + 1.0 - exponent
        out += comb(n - 1, k) * center ** (n - 1 - k) * sgn ** (k + 1) * at**e / e
    return out


def cusp_density(
    n: int,
    base: float,
    kappa: float,
    center: float,
    exponent: float,
    support: tuple[float, float] = (0.0, 1.0),
) -> RadialDensity:
    """f(r) = base + kappa |r - center|^(-exponent) on ``support``, base elsewhere.

    With 0 < exponent = 1/q this lies in L^p for every p < q but not in L^q.
    """
    n = _check_dim(n)
    base, kappa, center, exponent = float(base), float(kappa), float(center), float(exponent)
    lo, hi = float(support[0]), float(support[1])
    if not 0.0 <= lo < hi <= 1.0:
        raise InvalidDensity("support must satisfy 0 <= lo < hi <= 1")
    if not 0.0 <= exponent < 1.0:
        raise InvalidDensity("cusp exponent must lie in [0, 1)")
    if base < 0 or kappa < 0:
        raise InvalidDensity("cusp density needs base >= 0 and kappa >= 0")
    if exponent > 0 and not lo <= center <= hi:
        raise InvalidDensity("cusp center must lie in the support")

    def offset(t):
        """f at r = center + t, computed from the offset so that |t| keeps full precision."""
        t = np.asarray(t, dtype=float)
        r = center + t
        inside = (r >= lo) & (r < hi) if hi < 1.0 else (r >= lo) & (r <= hi)
        with np.errstate(divide="ignore"):
            bump = kappa * np.abs(t) ** (-exponent) if exponent > 0 else np.full_like(t, kappa)
        return base + np.where(inside, bump, 0.0)

    def func(r):
        return offset(np.asarray(r, dtype=float) - center)

    def mass(r):
        r = np.asarray(r, dtype=float)
        a = np.clip(r, lo, hi)
        bump = _cusp_antiderivative(a - center, center, exponent, n) - _cusp_antiderivative(
            lo - center, center, exponent, n
        )
        return base * r**n + n * kappa * bump

    sing = (center,) if exponent > 0 else ()
    return CuspDensity(
        n=n,
        func=func,
        breakpoints=tuple(p for p in (lo, hi) if 0.0 < p < 1.0 and p not in sing),
        singular_radii=sing,
        lower_bound=base,
        params={
            "family": "cusp",
            "base": base,
            "kappa": kappa,
            "center": center,
            "exponent": exponent,
            "support": [lo, hi],
        },
        mass=mass,
        offset_fn=offset,
    ).validate()


def scaled_density(f: RadialDensity, factor: float) -> RadialDensity:
    factor = float(factor)
    if factor <= 0:
        raise InvalidDensity("scale factor must be positive")
    mass = None if f.mass is None else (lambda r: factor * f.mass(r))
    return RadialDensity(
        n=f.n,
        func=lambda r: factor * f(r),
        breakpoints=f.breakpoints,
        singular_radii=f.singular_radii,
        lower_bound=factor * f.lower_bound,
        params={"family": "scaled", "factor": factor, "base": f.to_json()},
        mass=mass,
    )


def renormalized(f: RadialDensity, cfg: QuadratureConfig | None = None) -> RadialDensity:
    """f divided by its mean over the unit ball (restores the unit-mean condition)."""
    return scaled_density(f, 1.0 / f.mean(cfg))


def random_piecewise_density(
    n: int, rng: np.random.Generator, pieces: int = 6, lower_bound: float = 0.5
) -> RadialDensity:
    """Piecewise-constant density with unit mean and min value ``lower_bound``."""
    if not 0 < lower_bound < 1:
        raise ValueError("lower_bound must lie in (0, 1) for a unit-mean density")
    inner = np.sort(rng.uniform(0.05, 0.95, size=pieces - 1))
    edges = np.concatenate([[0.0], inner, [1.0]])
    w = rng.uniform(0.0, 1.0, size=pieces)
    w[rng.integers(pieces)] = 0.0  # attain the lower bound on one piece
    shells = np.diff(edges**n)
    scale = (1.0 - lower_bound) / float(np.dot(w, shells))
    values = lower_bound + scale * w
    return piecewise_constant_density(n, edges, values)


_DECODERS: dict[str, Callable[[dict], RadialDensity]] = {}


def register_decoder(kind: str, decoder: Callable[[dict], RadialDensity]) -> None:
    _DECODERS[kind] = decoder


def density_from_json(data: dict) -> RadialDensity:
    """Inverse of ``RadialDensity.to_json``; unknown fields are rejected."""
    if not isinstance(data, dict):
        raise InvalidDensity("density spec must be a JSON object")
    kind = data.get("kind")
    if "n" not in data:
        raise InvalidDensity("density spec needs 'n'")
    n = data["n"]

    def expect(keys):
        unknown = set(data) - set(keys) - {"kind", "n"}
        if unknown:
            raise InvalidDensity(f"unknown density fields: {sorted(unknown)}")

    try:
        if kind == "piecewise":
            expect({"edges", "values"})
            return piecewise_constant_density(n, data["edges"], data["values"])
        if kind == "sampled_table":
            expect({"samples"})
            pts = np.asarray(data["samples"], dtype=float)
            if pts.ndim != 2 or pts.shape[1] != 2:
                raise InvalidDensity("samples must be a list of [r, value] pairs")
            return sampled_density(n, pts[:, 0], pts[:, 1])
        if kind == "closed_form":
            family = data.get("family")
            if family == "constant":
                expect({"family", "value", "lower_bound"})
                return constant_density(n, data.get("value", 1.0), data.get("lower_bound"))
            if family == "power":
                expect({"family", "coeff", "exponent"})
                return power_density(n, data["coeff"], data["exponent"])
            if family == "cusp":
                expect({"family", "base", "kappa", "center", "exponent", "support"})
                return cusp_density(
                    n, data["base"], data["kappa"], data["center"], data["exponent"],
                    tuple(data.get("support", (0.0, 1.0))),
                )
            if family == "scaled":
                expect({"family", "factor", "base"})
                return scaled_density(density_from_json(data["base"]), data["factor"])
            raise InvalidDensity(f"unknown closed-form family {family!r}")
        if kind in _DECODERS:
            return _DECODERS[kind](data)
    except KeyError as exc:
        raise InvalidDensity(f"density spec missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidDensity):
            raise
        raise InvalidDensity(f"malformed density spec: {exc}") from None
    raise InvalidDensity(f"unknown density kind {kind!r}")


def _tabulated_mass(f: RadialDensity, cfg):
    """Quadrature-backed cumulative mass: exact sums at nodes plus one partial integral."""
    cache = f.__dict__.setdefault("_mass_tables", {})
    key = cfg
    if key in cache:
        return cache[key]
    nodes = sorted({0.0, 1.0, *f.breakpoints, *f.singular_radii, *np.linspace(0, 1, 33).tolist()})
    nodes = np.array([x for x in nodes if 0.0 <= x <= 1.0])
    sing = set(f.singular_radii)
    seg = [
        integrate_weighted(f, lo, hi, f.n, cfg, singular=[p for p in (lo, hi) if p in sing]).value
        for lo, hi in zip(nodes[:-1], nodes[1:])
    ]
    cum = np.concatenate([[0.0], np.cumsum(seg)])

    def mass(r):
        r = np.asarray(r, dtype=float)
        flat = r.reshape(-1)
        out = np.empty_like(flat)
        for i, x in enumerate(flat):
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"radius {x} outside [0, 1]")
            k = min(int(np.searchsorted(nodes, x, side="right")) - 1, len(nodes) - 2)
            part = integrate_weighted(
                f, nodes[k], x, f.n, cfg, singular=[nodes[k]] if nodes[k] in sing else []
            ).value if x > nodes[k] else 0.0
            out[i] = cum[k] + part
        return f.n * out.reshape(r.shape)

    cache[key] = mass
    return mass


# --------------------------------------------------------------------------
# profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Profile rho of the stretching u(x) = rho(|x|) x/|x| on ``domain``."""

    n: int
    rho_fn: Callable
    rho_dot_fn: Callable
    kind: str
    params: dict = field(default_factory=dict)
    domain: tuple[float, float] = (0.0, 1.0)
    source: RadialDensity | None = None
    r_min: float = 1e-6

    def _check(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.domain
        tol = 1e-12
        if np.any(r < lo - tol) or np.any(r > hi + tol):
            raise ValueError(f"radius outside profile domain [{lo}, {hi}]")
        return r

    def rho(self, r):
        return np.asarray(self.rho_fn(self._check(r)), dtype=float)

    def rho_dot(self, r):
        r = self._check(r)
        if np.any(r == 0.0):
            raise UndefinedAtOrigin("rho' requested at the origin")
        return np.asarray(self.rho_dot_fn(r), dtype=float)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        if self.source is not None:
            out["density"] = self.source.to_json()
        else:
            out["params"] = dict(self.params)
        return out


def identity_profile(n: int) -> RadialProfile:
    n = _check_dim(n)
    return RadialProfile(n, lambda r: r, lambda r: np.ones_like(r), "identity")


def power_profile(n: int, coeff: float, exponent: float) -> RadialProfile:
    """rho(r) = coeff * r^exponent."""
    n = _check_dim(n)
    return RadialProfile(
        n,
        lambda r: coeff * r**exponent,
        lambda r: coeff * exponent * r ** (exponent - 1.0),
        "power",
        {"coeff": float(coeff), "exponent": float(exponent)},
    )


def affine_profile(n: int, R: float, start: float, slope: float) -> RadialProfile:
    """rho(r) = start + slope (r - R) on [R, 1]."""
    n = _check_dim(n)
    return RadialProfile(
        n,
        lambda r: start + slope * (r - R),
        lambda r: np.full_like(r, slope),
        "affine",
        {"R": float(R), "start": float(start), "slope": float(slope)},
        domain=(float(R), 1.0),
    )


def solve_radial(
    f: RadialDensity,
    cfg: QuadratureConfig | None = None,
    *,
    r_min: float = 1e-6,
    use_closed_form: bool = True,
) -> RadialProfile:
    """The radial stretching with Ju = f and u = id on the unit sphere (when f has unit mean).

    rho' is taken from the identity rho' = r^(n-1) f / rho^(n-1). With a
    positive lower bound c the denominator is floored at c^(1/n) r; with
    c = 0 radii below ``r_min`` are refused.
    """
    n = f.n
    if np.any(f(np.linspace(0.0, 1.0, 2001)[1:]) < 0):
        raise InvalidDensity("density is negative at a sampled radius")
    mass = f.mass if (use_closed_form and f.mass is not None) else _tabulated_mass(f, cfg)
    c = float(f.lower_bound)
    floor = c ** (1.0 / n) if c > 0 else 0.0

    def rho(r):
        m = np.asarray(mass(r), dtype=float)
        return np.maximum(m, 0.0) ** (1.0 / n)

    def rho_dot(r):
        r = np.asarray(r, dtype=float)
        if c <= 0 and np.any(r < r_min):
            raise UndefinedAtOrigin(
                f"density has no positive lower bound; radii below r_min={r_min} are refused"
            )
        den = np.maximum(rho(r), floor * r)
        return r ** (n - 1) * f(r) / den ** (n - 1)

    return RadialProfile(n, rho, rho_dot, "solved", domain=(0.0, 1.0), source=f, r_min=r_min)


# --------------------------------------------------------------------------
# pointwise and integral quantities
# --------------------------------------------------------------------------


def jacobian(p: RadialProfile, r):
    """Ju at |x| = r: rho' rho^(n-1) / r^(n-1)."""
    r = np.asarray(r, dtype=float)
    if np.any(r == 0.0):
        raise UndefinedAtOrigin("Jacobian of a radial stretching is undefined at the origin")
    return p.rho_dot(r) * (p.rho(r) / r) ** (p.n - 1)


def du_operator_norm(p: RadialProfile, r):
    """Operator norm of Du: max(|rho'|, rho/r)."""
    r = np.asarray(r, dtype=float)
    if np.any(r == 0.0):
        raise UndefinedAtOrigin("Du is undefined at the origin")
    return np.maximum(np.abs(p.rho_dot(r)), p.rho(r) / r)


def radial_derivative_norm(p: RadialProfile, r):
    """|d_r u| = |rho'|."""
    return np.abs(p.rho_dot(r))


def _profile_cuts(p: RadialProfile, a, b):
    if p.source is None:
        return {}
    return p.source.cuts(a, b)


def sobolev_energy(
    p: RadialProfile,
    exponent: float,
    interval: tuple[float, float] = (0.0, 1.0),
    cfg: QuadratureConfig | None = None,
) -> float:
    """integral_a^b (|rho'|^p + (rho/r)^p) r^(n-1) dr, or inf when it diverges."""
    if exponent < 1:
        raise ValueError("Sobolev exponent must be >= 1")
    a, b = float(interval[0]), float(interval[1])
    lo, hi = p.domain
    if not lo - 1e-12 <= a <= b <= hi + 1e-12:
        raise ValueError(f"interval [{a}, {b}] not inside profile domain [{lo}, {hi}]")
    n = p.n

    def integrand(r):
        rho = p.rho_fn(r)
        if p.source is not None:
            # interior evaluation: rho > 0 away from the origin, limit f(0)^(1/n) otherwise
            f = p.source(r)
            c = p.source.lower_bound
            den = np.maximum(rho, (c ** (1.0 / n) if c > 0 else 0.0) * r)
            with np.errstate(divide="ignore", invalid="ignore"):
                rd = np.where(den > 0, r ** (n - 1) * f / np.where(den > 0, den, 1.0) ** (n - 1),
                              f ** (1.0 / n))
        else:
            rd = p.rho_dot_fn(r)
        return (np.abs(rd) ** exponent + (rho / r) ** exponent) * r ** (n - 1)

    try:
        val = integrate(integrand, a, b, cfg, **_profile_cuts(p, a, b)).value
    except DivergentIntegral:
        return math.inf
    return math.inf if val > OVERFLOW_GUARD else val


def image_volume(p: RadialProfile, annulus: tuple[float, float]) -> float:
    """Lebesgue measure of u(A(a, b)) = omega_n (rho(b)^n - rho(a)^n)."""
    a, b = float(annulus[0]), float(annulus[1])
    if not 0.0 <= a < b <= 1.0:
        raise ValueError("annulus must satisfy 0 <= a < b <= 1")
    ra = 0.0 if a == 0.0 else float(p.rho(a))
    rb = float(p.rho(b))
    return unit_ball_volume(p.n) * (rb**p.n - ra**p.n)


def ball_integral(f: RadialFunction, a: float, b: float, cfg: QuadratureConfig | None = None) -> float:
    """integral over A(a, b) of f dx = n omega_n integral_a^b f r^(n-1) dr."""
    val = integrate_weighted(f, a, b, f.n, cfg, **f.cuts(a, b)).value
    return sphere_area(f.n) * val
