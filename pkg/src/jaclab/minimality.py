"""Quasiminimality diagnostics for competitors of f_{gamma,R} on A(R, 1).

A competitor v is sampled on a polar grid: directions theta_i on the unit
sphere times radii r_j uniform on [R, 1]. The checker compares the q-energy
of the radial derivative of the radial solution u (closed form) with the
discrete q-energy of d_r v, evaluates each link of the lower-bound chain

    mean-ray Hölder step, Markov step on Theta_2, first-moment inequality

and verifies the change-of-variables bookkeeping by binning image samples.
For n = 2 the twist maps rho(r) e(phi + h(r)) share the Jacobian of u, so
every inequality is tested against an exact solution of Jv = f_{gamma,R}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate as sint
from scipy.stats import norm as _normal
from scipy.stats import qmc

from .errors import BoundaryViolation, NoAdmissibleRays, ParameterDomainError
from .perturbation import PerturbationParams, annulus_energy, outer_branch
from .radial import sphere_area, unit_ball_volume

__all__ = [
    "AnnulusMap",
    "TwistProfile",
    "random_twist",
    "linear_twist",
    "radial_map",
    "twist_competitor",
    "damped_map",
    "sphere_directions",
    "radial_derivative",
    "discrete_jacobian",
    "jacobian_residual",
    "ray_variation",
    "ThetaPartition",
    "partition",
    "QuasiminReport",
    "quasimin_ratio",
    "ImageReport",
    "image_accounting",
    "quasimin_constant",
    "DEFAULT_GATE",
]

DEFAULT_GATE = 1e-2
MIN_RADII = 64
BOUNDARY_TOL = 1e-9
_MAX_CELLS = 2**24


def quasimin_constant(n: int, q: float) -> float:
    """C(n, q) = 2^(n-1) (4 n^2)^q from the Hölder and first-moment steps."""
    return 2.0 ** (n - 1) * (4.0 * n * n) ** q


def sphere_directions(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Equally weighted directions: uniform angles for n = 2, scrambled Sobol points otherwise."""
    if n == 2:
        phi = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(phi), np.sin(phi)])
    u = qmc.Sobol(d=n, scramble=True, seed=seed).random(count)
    x = _normal.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class AnnulusMap:
    """Values v(r_j theta_i) of a map on A(R, 1); ``values`` has shape (directions, radii, n)."""

    n: int
    R: float
    directions: np.ndarray
    radii: np.ndarray
    values: np.ndarray
    boundary: str = "identity"
    angles: np.ndarray | None = None
    label: str = "map"

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        r = np.asarray(self.radii, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", v)
        n = self.n
        if n < 2:
            raise ParameterDomainError("n must be >= 2")
        if self.boundary not in ("identity", "sphere"):
            raise ParameterDomainError(f"boundary must be 'identity' or 'sphere', got {self.boundary!r}")
        if d.ndim != 2 or d.shape[1] != n:
            raise ParameterDomainError(f"directions must have shape (k, {n})")
        if not np.allclose(np.linalg.norm(d, axis=1), 1.0, atol=1e-12):
            raise ParameterDomainError("directions must be unit vectors")
        if r.ndim != 1 or r.size < MIN_RADII:
            raise ParameterDomainError(f"need at least {MIN_RADII} radii per ray, got {r.size}")
        if abs(r[0] - self.R) > 1e-12 or abs(r[-1] - 1.0) > 1e-12:
            raise ParameterDomainError("radii must run from R to 1")
        if not np.allclose(np.diff(r), (1.0 - self.R) / (r.size - 1), rtol=1e-9, atol=0):
            raise ParameterDomainError("radii must be uniform on [R, 1]")
        if v.shape != (d.shape[0], r.size, n):
            raise ParameterDomainError(f"values must have shape {(d.shape[0], r.size, n)}, got {v.shape}")
        if self.angles is not None:
            a = np.asarray(self.angles, dtype=float)
            object.__setattr__(self, "angles", a)
            if n != 2 or a.shape != (d.shape[0],):
                raise ParameterDomainError("angles are only meaningful for n = 2, one per direction")
            if not np.allclose(np.column_stack([np.cos(a), np.sin(a)]), d, atol=1e-12):
                raise ParameterDomainError("angles disagree with directions")

    @property
    def shape(self) -> tuple[int, int]:
        return self.directions.shape[0], self.radii.size

    @property
    def finite_rays(self) -> np.ndarray:
        return np.all(np.isfinite(self.values), axis=(1, 2))

    @property
    def boundary_flag(self) -> np.ndarray:
        """Per direction: |v(theta)| = 1 on the outer sphere."""
        outer = self.values[:, -1, :]
        with np.errstate(invalid="ignore"):
            return np.abs(np.linalg.norm(outer, axis=1) - 1.0) <= BOUNDARY_TOL

    def boundary_error(self) -> float:
        outer = self.values[:, -1, :]
        ok = self.finite_rays
        if self.boundary == "identity":
            err = np.linalg.norm(outer[ok] - self.directions[ok], axis=1)
        else:
            err = np.abs(np.linalg.norm(outer[ok], axis=1) - 1.0)
        return float(err.max()) if err.size else math.inf

    @property
    def admissible(self) -> np.ndarray:
        """Rays with finite samples; under the sphere condition also |v(theta)| = 1."""
        ok = self.finite_rays
        if self.boundary == "sphere":
            ok = ok & self.boundary_flag
        return ok

    def check_boundary(self, tol: float = BOUNDARY_TOL) -> None:
        err = self.boundary_error()
        if not err <= tol:
            raise BoundaryViolation(f"{self.boundary} boundary condition violated by {err:.3g}")

    def to_json(self) -> dict:
        thetas = self.angles.tolist() if self.angles is not None else self.directions.tolist()
        return {
            "n": self.n,
            "R": self.R,
            "boundary": self.boundary,
            "label": self.label,
            "thetas": thetas,
            "radii": self.radii.tolist(),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> AnnulusMap:
        allowed = {"n", "R", "boundary", "label", "thetas", "radii", "values"}
        unknown = set(data) - allowed
        if unknown:
            raise ParameterDomainError(f"unknown map fields: {sorted(unknown)}")
        missing = {"n", "R", "thetas", "radii", "values"} - set(data)
        if missing:
            raise ParameterDomainError(f"missing map fields: {sorted(missing)}")
        n = int(data["n"])
        thetas = np.asarray(data["thetas"], dtype=float)
        if n == 2 and thetas.ndim == 1:
            angles = thetas
            dirs = np.column_stack([np.cos(angles), np.sin(angles)])
        else:
            angles, dirs = None, thetas
        return cls(
            n=n,
            R=float(data["R"]),
            directions=dirs,
            radii=np.asarray(data["radii"], dtype=float),
            values=np.asarray(data["values"], dtype=float),
            boundary=data.get("boundary", "identity"),
            angles=angles,
            label=data.get("label", "map"),
        )


# --------------------------------------------------------------------------
# builders
# --------------------------------------------------------------------------


def _grid(params: PerturbationParams, n_theta: int, n_r: int, seed: int = 0):
    if n_theta < 4:
        raise ParameterDomainError("need at least 4 directions")
    radii = np.linspace(params.R, 1.0, n_r)
    dirs = sphere_directions(params.n, n_theta, seed)
    angles = 2.0 * np.pi * np.arange(n_theta) / n_theta if params.n == 2 else None
    return dirs, radii, angles


def _rho(params: PerturbationParams, r):
    return params.gamma_R + params.M * (np.asarray(r) - params.R)


def radial_map(params: PerturbationParams, n_theta: int = 256, n_r: int = 256, *, seed: int = 0) -> AnnulusMap:
    """The radial solution u(r theta) = rho_{gamma,R}(r) theta."""
    dirs, radii, angles = _grid(params, n_theta, n_r, seed)
    values = _rho(params, radii)[None, :, None] * dirs[:, None, :]
    return AnnulusMap(params.n, params.R, dirs, radii, values, "identity", angles, "radial")


@dataclass(frozen=True)
class TwistProfile:
    """Rotation angle h(r) with derivative dh(r)."""

    h: Callable
    dh: Callable
    description: dict = field(default_factory=dict)

    def scaled(self, t: float) -> TwistProfile:
        return TwistProfile(lambda r: t * self.h(r), lambda r: t * self.dh(r), {**self.description, "scale": t})


def linear_twist(R: float, slope: float = 1.0) -> TwistProfile:
    """h(r) = slope (1 - r)."""
    return TwistProfile(
        lambda r: slope * (1.0 - np.asarray(r)),
        lambda r: np.full_like(np.asarray(r, dtype=float), -slope),
        {"family": "linear", "slope": slope},
    )


def random_twist(R: float, rng: np.random.Generator, modes: int = 3, amplitude: float = 0.1) -> TwistProfile:
    """h(r) = a (1 - r) + sum_k b_k sin(k pi (1 - r)/(1 - R)), so h(1) = 0."""
    a = rng.uniform(-1.0, 1.0)
    k = np.arange(1, modes + 1)
    b = rng.uniform(-amplitude, amplitude, modes) / k**2
    w = np.pi / (1.0 - R)

    def h(r):
        s = 1.0 - np.asarray(r, dtype=float)
        return a * s + np.sum(b[:, None] * np.sin(np.multiply.outer(k * w, s)), axis=0).reshape(np.shape(s))

    def dh(r):
        s = 1.0 - np.asarray(r, dtype=float)
        return -a - np.sum((b * k * w)[:, None] * np.cos(np.multiply.outer(k * w, s)), axis=0).reshape(np.shape(s))

    return TwistProfile(h, dh, {"family": "random", "a": a, "b": b.tolist()})


def twist_competitor(
    params: PerturbationParams,
    twist: TwistProfile,
    n_theta: int = 256,
    n_r: int = 256,
    *,
    boundary: str = "identity",
) -> AnnulusMap:
    """v(r, phi) = rho(r) e(phi + h(r)); its Jacobian is rho rho'/r, exactly the outer branch."""
    if params.n != 2:
        raise ParameterDomainError("twist competitors exist only for n = 2")
    h1 = float(twist.h(np.array([1.0]))[0])
    if boundary == "identity" and abs(h1) > 1e-12:
        raise BoundaryViolation(f"twist with h(1) = {h1:.3g} breaks identity boundary values")
    dirs, radii, angles = _grid(params, n_theta, n_r)
    phase = angles[:, None] + np.asarray(twist.h(radii))[None, :]
    rho = _rho(params, radii)[None, :]
    values = np.stack([rho * np.cos(phase), rho * np.sin(phase)], axis=-1)
    return AnnulusMap(2, params.R, dirs, radii, values, boundary, angles, "twist")


def damped_map(
    params: PerturbationParams,
    depth: float | None = None,
    n_theta: int = 256,
    n_r: int = 256,
    *,
    seed: int = 0,
) -> AnnulusMap:
    """Even-indexed rays v = (1 - depth (1 - r)/(1 - R)) theta, odd rays radial.

    Damped rays vary by exactly ``depth`` (default lambda/2) and stay in the
    shell A[1 - depth, 1]; the map is not a solution of Jv = f_{gamma,R}.
    """
    depth = params.threshold / 2 if depth is None else float(depth)
    dirs, radii, angles = _grid(params, n_theta, n_r, seed)
    values = _rho(params, radii)[None, :, None] * dirs[:, None, :]
    damped = 1.0 - depth * (1.0 - radii) / (1.0 - params.R)
    values[::2] = damped[None, :, None] * dirs[::2, None, :]
    return AnnulusMap(params.n, params.R, dirs, radii, values, "identity", angles, "damped")


# --------------------------------------------------------------------------
# discrete calculus
# --------------------------------------------------------------------------


def radial_derivative(v: AnnulusMap) -> np.ndarray:
    """d_r v per ray: centered differences inside, second-order one-sided at the ends."""
    return np.gradient(v.values, v.radii, axis=1, edge_order=2)


def discrete_jacobian(v: AnnulusMap) -> np.ndarray:
    """det[d_r v, (1/r) d_phi v] on a uniform periodic angle grid (n = 2 only)."""
    if v.n != 2 or v.angles is None:
        raise ParameterDomainError("discrete Jacobian needs an n = 2 map on uniform angles")
    dr = radial_derivative(v)
    dphi = 2.0 * np.pi / v.shape[0]
    dth = (np.roll(v.values, -1, axis=0) - np.roll(v.values, 1, axis=0)) / (2.0 * dphi)
    cross = dr[..., 0] * dth[..., 1] - dr[..., 1] * dth[..., 0]
    return cross / v.radii[None, :]


def jacobian_residual(v: AnnulusMap, params: PerturbationParams) -> float:
    """max |Jv - f_{gamma,R}| / f_{gamma,R} over admissible rays; inf when not computable."""
    if v.n != 2 or v.angles is None:
        return math.inf
    target = outer_branch(params, v.radii)[None, :]
    err = np.abs(discrete_jacobian(v) - target) / target
    ok = v.finite_rays
    # a ray next to a non-finite ray has a contaminated angular difference
    ok = ok & np.roll(ok, 1) & np.roll(ok, -1)
    return float(err[ok].max()) if ok.any() else math.inf


def ray_variation(v: AnnulusMap) -> np.ndarray:
    """Trapezoid values of integral_R^1 |d_r v(s theta)| ds; NaN on inadmissible rays."""
    adm = v.admissible
    if not adm.any():
        raise NoAdmissibleRays("no admissible rays in the competitor")
    speed = np.linalg.norm(radial_derivative(v), axis=-1)
    out = np.full(v.shape[0], np.nan)
    out[adm] = sint.trapezoid(speed[adm], v.radii, axis=1)
    return out


@dataclass(frozen=True)
class ThetaPartition:
    lam: float
    theta1: np.ndarray
    theta2: np.ndarray
    per_ray_variation: np.ndarray
    admissible: np.ndarray

    @property
    def fraction2(self) -> float:
        """H^(n-1)(Theta_2) / H^(n-1)(S^(n-1)) with equally weighted directions."""
        return self.theta2.size / self.per_ray_variation.size

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "theta1": self.theta1.tolist(),
            "theta2": self.theta2.tolist(),
            "per_ray_variation": [None if not math.isfinite(x) else x for x in self.per_ray_variation],
        }


def partition(v: AnnulusMap, params: PerturbationParams, lam: float | None = None) -> ThetaPartition:
    """Split admissible rays at lambda = (1 - gamma^n R^n)/(2n) (or the given threshold)."""
    lam = params.threshold if lam is None else float(lam)
    var = ray_variation(v)
    adm = v.admissible
    idx = np.arange(var.size)
    return ThetaPartition(lam, idx[adm & (var <= lam)], idx[adm & (var > lam)], var, adm)


# --------------------------------------------------------------------------
# the inequality chain
# --------------------------------------------------------------------------


@dataclass
class QuasiminReport:
    lhs: float
    rhs: float
    status: str
    residual: float
    chain: dict
    metadata: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.rhs / self.lhs

    @property
    def holds(self) -> bool:
        """LHS <= C(n, q) RHS, the statement being checked."""
        return self.chain["constant_bound"]["margin"] >= 0

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "status": self.status,
            "residual": self.residual,
            "chain": self.chain,
            "metadata": dict(self.metadata),
        }


def _side(left: float, right: float) -> dict:
    """An inequality left >= right with its margin."""
    return {"left": left, "right": right, "margin": left - right}


def _ray_weights(v: AnnulusMap) -> np.ndarray:
    adm = v.admissible
    return adm / adm.sum()


def quasimin_ratio(
    v: AnnulusMap, params: PerturbationParams, q: float | None = None, *, gate: float = DEFAULT_GATE
) -> QuasiminReport:
    """Both sides of the quasiminimality inequality and every link of its proof.

    Averages over the sphere use equal weights on admissible rays; integrals
    over A(R, 1) are n omega_n times those averages. Radial integrals of the
    q-energy use Simpson's rule, ray variations the trapezoid rule.
    """
    if v.n != params.n or abs(v.R - params.R) > 1e-12:
        raise ParameterDomainError("map and parameters describe different annuli")
    q = params.q if q is None else float(q)
    v.check_boundary()
    n, R, M = params.n, params.R, params.M
    area = sphere_area(n)
    w = _ray_weights(v)
    r = v.radii
    adm = v.admissible
    speed = np.where(adm[:, None], np.linalg.norm(radial_derivative(v), axis=-1), 0.0)

    def mean(per_ray):
        return float(np.sum(w * np.where(adm, per_ray, 0.0)))

    length = 1.0 - R
    mean_q_weighted = mean(sint.simpson(speed**q * r ** (n - 1), x=r, axis=1)) / length
    mean_q = mean(sint.simpson(speed**q, x=r, axis=1)) / length
    var = np.where(adm, sint.trapezoid(speed, r, axis=1), 0.0)
    mean_1 = mean(var) / length
    rhs = area * length * mean_q_weighted
    lhs = annulus_energy(params if q == params.q else _with_q(params, q)).exact

    first_v = area * mean(var)
    first_u = area * (1.0 - params.gamma_R)
    part = partition(v, params)
    lam = part.lam
    mass = (1.0 - params.gamma_R**n) / n
    h2 = area * part.fraction2
    c = quasimin_constant(n, q)
    chain = {
        "holder_weight": _side(2.0 ** (n - 1) * mean_q_weighted, mean_q),
        "holder_jensen": _side(mean_q, mean_1**q),
        "radial_side": _side(M**q, M**q * (1.0 - R**n) / (n * length)),
        "markov": _side(mass / lam * first_v, h2 * mass),
        "image_lower_bound": {"value": unit_ball_volume(n) * (1.0 - n * lam - params.gamma_R**n)},
        "first_moment": _side(first_v, first_u / (4.0 * n * n)),
        "first_moment_quarter": _side(first_v, first_u / 4.0),
        "constant_bound": _side(c * rhs, lhs),
        "lambda": lam,
        "constant": c,
    }
    residual = jacobian_residual(v, params)
    status = "exact" if residual <= gate else "inexact competitor"
    meta = {
        "label": v.label,
        "grid": list(v.shape),
        "gate": gate,
        "admissible_rays": int(adm.sum()),
        "scope": "annulus only; interior admissibility of the competitor is not checked",
    }
    if not math.isfinite(residual):
        meta["residual_note"] = "Jacobian residual not computable on this grid"
    return QuasiminReport(lhs, rhs, status, residual, chain, meta)


def _with_q(params: PerturbationParams, q: float) -> PerturbationParams:
    return PerturbationParams(params.n, params.p, q, params.alpha, params.R)


# --------------------------------------------------------------------------
# change of variables
# --------------------------------------------------------------------------


@dataclass
class ImageReport:
    shell_deviation: float
    shell_tolerance: float
    tubes: dict
    markov: dict
    bins_per_axis: int
    max_multiplicity: float
    median_multiplicity: float
    resolution_warning: bool
    metadata: dict = field(default_factory=dict)

    @property
    def shell_ok(self) -> bool:
        return self.shell_deviation <= self.shell_tolerance

    def to_json(self) -> dict:
        return {
            "shell_deviation": self.shell_deviation,
            "shell_tolerance": self.shell_tolerance,
            "shell_ok": self.shell_ok,
            "tubes": self.tubes,
            "markov": self.markov,
            "bins_per_axis": self.bins_per_axis,
            "max_multiplicity": self.max_multiplicity,
            "median_multiplicity": self.median_multiplicity,
            "resolution_warning": self.resolution_warning,
            "metadata": dict(self.metadata),
        }


def _densify(v: AnnulusMap, rays: np.ndarray, spacing: float, limit: int = 2**23):
    """Image samples of the tube over ``rays`` and the source radius of each sample.

    Samples are refined until neighbours are about ``spacing`` apart. For
    n = 2 neighbouring angles are interpolated linearly (periodically);
    scattered directions for n >= 3 are refined along rays only.
    """
    vals = v.values[rays]
    k_r = int(np.ceil(np.nanmax(np.linalg.norm(np.diff(vals, axis=1), axis=-1)) / spacing))
    k_r = max(k_r, 1)
    t = np.arange(k_r) / k_r
    fine = vals[:, :-1, None, :] * (1 - t)[None, None, :, None] + vals[:, 1:, None, :] * t[None, None, :, None]
    fine = np.concatenate([fine.reshape(vals.shape[0], -1, v.n), vals[:, -1:, :]], axis=1)
    r = v.radii
    rf = np.concatenate([(r[:-1, None] * (1 - t) + r[1:, None] * t).ravel(), r[-1:]])
    if v.n == 2 and v.angles is not None:
        nxt = np.roll(v.values, -1, axis=0)[rays]
        nxt = np.concatenate(
            [(nxt[:, :-1, None, :] * (1 - t)[None, None, :, None] + nxt[:, 1:, None, :] * t[None, None, :, None])
             .reshape(vals.shape[0], -1, v.n), nxt[:, -1:, :]],
            axis=1,
        )
        gap = np.nanmax(np.linalg.norm(nxt - fine, axis=-1))
        k_t = max(int(np.ceil(gap / spacing)), 1)
        k_t = min(k_t, max(1, limit // max(1, fine.shape[0] * fine.shape[1])))
        s = np.arange(k_t) / k_t
        pts = fine[:, None] * (1 - s)[None, :, None, None] + nxt[:, None] * s[None, :, None, None]
        radii = np.broadcast_to(rf, pts.shape[:-1])
        return pts.reshape(-1, v.n), radii.ravel()
    return fine.reshape(-1, v.n), np.broadcast_to(rf, fine.shape[:-1]).ravel()


def _occupied(points: np.ndarray, n: int, bins: int, lo: float, hi: float, weights=None):
    """Occupied cell volume, and the summed weight of each occupied cell."""
    ok = np.all(np.isfinite(points), axis=1)
    points = points[ok]
    width = (hi - lo) / bins
    idx = np.clip(np.floor((points - lo) / width).astype(np.int64), 0, bins - 1)
    flat = np.ravel_multi_index(idx.T, (bins,) * n)
    cells, inverse = np.unique(flat, return_inverse=True)
    w = np.ones(points.shape[0]) if weights is None else np.asarray(weights)[ok]
    return cells.size * width**n, np.bincount(inverse, weights=w), width


def image_accounting(
    v: AnnulusMap,
    part: ThetaPartition,
    params: PerturbationParams,
    *,
    bins: int | None = None,
) -> ImageReport:
    """Shell containment of Theta_1, tube masses by binning, and the Markov bound."""
    n = v.n
    if bins is None:
        bins = min(4 * v.shape[0], 2**12)
    bins = int(min(bins, int(round(_MAX_CELLS ** (1.0 / n)))))
    lam = part.lam
    norms = np.linalg.norm(v.values, axis=-1)
    chord = float(np.nanmax(np.linalg.norm(np.diff(v.values, axis=1), axis=-1)))
    if part.theta1.size:
        t1 = norms[part.theta1]
        shell_dev = float(np.max(np.maximum((1.0 - lam) - t1, t1 - 1.0)).clip(min=0.0))
    else:
        shell_dev = 0.0

    extent = max(1.0, float(np.nanmax(norms))) * (1.0 + 1e-9)
    mass = (1.0 - params.gamma_R**n) / n
    area = sphere_area(n)
    n_rays = part.per_ray_variation.size
    tubes = {}
    multiplicity = []
    warn = False
    for name, rays in (("theta1", part.theta1), ("theta2", part.theta2), ("all", np.flatnonzero(part.admissible))):
        source = area * rays.size / n_rays * mass
        if rays.size == 0:
            tubes[name] = {"rays": 0, "source_mass": 0.0, "image_volume": 0.0, "relative_error": 0.0}
            continue
        width = 2 * extent / bins
        pts, src_r = _densify(v, rays, width / 2)
        # each sample carries the image volume f r^(n-1) dr dtheta of its source cell
        wts = outer_branch(params, src_r) * src_r ** (n - 1)
        wts = wts * (source / wts.sum())
        vol, cell_mass, width = _occupied(pts, n, bins, -extent, extent, wts)
        coarse, _, _ = _occupied(pts, n, max(bins // 2, 1), -extent, extent)
        if vol > 0 and abs(coarse - vol) > 0.1 * vol:
            warn = True
        multiplicity.append(cell_mass / width**n)
        tubes[name] = {
            "rays": int(rays.size),
            "source_mass": source,
            "image_volume": vol,
            "coarse_image_volume": coarse,
            "relative_error": abs(vol - source) / source if source else math.inf,
        }
    mult = np.concatenate(multiplicity) if multiplicity else np.zeros(1)
    first_v = area * float(np.nanmean(np.where(part.admissible, part.per_ray_variation, np.nan))) * (
        part.admissible.sum() / n_rays
    )
    h2 = area * part.fraction2
    markov = _side(mass / lam * first_v, h2 * mass)
    return ImageReport(
        shell_deviation=shell_dev,
        shell_tolerance=chord,
        tubes=tubes,
        markov=markov,
        bins_per_axis=bins,
        max_multiplicity=float(mult.max()),
        median_multiplicity=float(np.median(mult)),
        resolution_warning=warn,
        metadata={"extent": extent, "lambda": lam, "label": v.label},
    )
