"""The boundary-layer family f_{gamma,R} and its exact annulus solution.

Given a datum f, the perturbed density is

    f_{gamma,R}(r) = gamma^n f(r) / mean_{B_R}(f)                    r < R
    f_{gamma,R}(r) = M (gamma R + M (r - R))^(n-1) / r^(n-1)        R <= r < 1

with M = (1 - gamma R)/(1 - R) and gamma tied to R through
1 - gamma R = (1 - R)^(1 + alpha/q). On the annulus the radial solution is
rho(r) = gamma R + M (r - R), whose radial derivative is the constant M.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import EnergyOverflow, InvalidDensity, ParameterDomainError
from .quadrature import QuadratureConfig, integrate_weighted
from .radial import (
    RadialDensity,
    RadialProfile,
    affine_profile,
    density_from_json,
    register_decoder,
    sphere_area,
    unit_ball_volume,
)

__all__ = [
    "gamma_of_R",
    "PerturbationParams",
    "PerturbedDensity",
    "build",
    "outer_branch",
    "annulus_mass",
    "annulus_profile",
    "annulus_energy",
    "AnnulusEnergy",
    "lp_tail",
    "TailReport",
]


def gamma_of_R(R: float, alpha: float, q: float) -> tuple[float, float]:
    """(gamma, M) solving 1 - gamma R = (1 - R)^(1 + alpha/q)."""
    R, alpha, q = float(R), float(alpha), float(q)
    if not q >= 1:
        raise ParameterDomainError(f"q must be >= 1, got {q}")
    if not 0.75 < R < 1.0:
        raise ParameterDomainError(f"R must lie in (3/4, 1), got {R}")
    if not -q < alpha < -1.0:
        raise ParameterDomainError(f"alpha must lie in (-q, -1) = ({-q}, -1), got {alpha}")
    gap = (1.0 - R) ** (1.0 + alpha / q)
    return (1.0 - gap) / R, gap / (1.0 - R)


@dataclass(frozen=True)
class PerturbationParams:
    n: int
    p: float
    q: float
    alpha: float
    R: float
    gamma: float = field(init=False)
    M: float = field(init=False)

    def __post_init__(self):
        n, p, q, alpha = self.n, float(self.p), float(self.q), float(self.alpha)
        if int(n) != n or n < 2:
            raise ParameterDomainError(f"n must be an integer >= 2, got {n}")
        if not p >= 1:
            raise ParameterDomainError(f"p must be >= 1, got {p}")
        if not q > p:
            raise ParameterDomainError(f"q must exceed p (q={q}, p={p})")
        if not q >= n:
            raise ParameterDomainError(f"q must be >= n (q={q}, n={n})")
        if not -q / p < alpha < -1.0:
            raise ParameterDomainError(f"alpha must lie in (-q/p, -1) = ({-q / p:g}, -1), got {alpha}")
        gamma, M = gamma_of_R(self.R, alpha, q)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "M", M)

    @property
    def gap(self) -> float:
        """1 - gamma R."""
        return (1.0 - self.R) ** (1.0 + self.alpha / self.q)

    @property
    def gamma_R(self) -> float:
        return 1.0 - self.gap

    @property
    def gamma_in_range(self) -> bool:
        """Whether gamma also lies in (3/4, 1); reported, never enforced."""
        return 0.75 < self.gamma < 1.0

    @property
    def threshold(self) -> float:
        """lambda = (1 - gamma^n R^n) / (2n)."""
        return (1.0 - self.gamma_R**self.n) / (2 * self.n)

    def with_R(self, R: float) -> PerturbationParams:
        return PerturbationParams(self.n, self.p, self.q, self.alpha, R)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "alpha": self.alpha,
            "R": self.R,
            "gamma": self.gamma,
            "M": self.M,
        }

    @classmethod
    def from_json(cls, data: dict) -> PerturbationParams:
        allowed = {"n", "p", "q", "alpha", "R", "gamma", "M"}
        unknown = set(data) - allowed
        if unknown:
            raise ParameterDomainError(f"unknown parameter fields: {sorted(unknown)}")
        try:
            out = cls(data["n"], data["p"], data["q"], data["alpha"], data["R"])
        except KeyError as exc:
            raise ParameterDomainError(f"missing parameter {exc}") from None
        for key in ("gamma", "M"):
            if key in data:
                stored, fresh = float(data[key]), getattr(out, key)
                if abs(stored - fresh) > 1e-12 * max(1.0, abs(fresh)):
                    raise ParameterDomainError(
                        f"stored {key}={stored!r} disagrees with recomputed {fresh!r}"
                    )
        return out


def _annulus_rho(params: PerturbationParams, r):
    # gamma R + M (r - R) written as 1 - M (1 - r), which is exactly 1 at r = 1
    return 1.0 - params.M * (1.0 - np.asarray(r, dtype=float))


def outer_branch(params: PerturbationParams, r):
    """M (gamma R + M (r - R))^(n-1) / r^(n-1) on [R, 1]."""
    r = np.asarray(r, dtype=float)
    return params.M * (_annulus_rho(params, r) / r) ** (params.n - 1)


@dataclass(frozen=True, eq=False)
class PerturbedDensity(RadialDensity):
    perturbation: PerturbationParams | None = None
    base: RadialDensity | None = None
    base_mean_R: float = 1.0


def build(
    f: RadialDensity, params: PerturbationParams, cfg: QuadratureConfig | None = None
) -> PerturbedDensity:
    """The density f_{gamma,R}; unit mean over B_1 is checked against the annulus mass."""
    if f.n != params.n:
        raise ParameterDomainError(f"density dimension {f.n} != params.n {params.n}")
    n, R = params.n, params.R
    mass_R = float(f.cumulative(R, cfg))  # = mean_{B_R}(f) * R^n
    if not mass_R > 0:
        raise InvalidDensity("base density has nonpositive mass on B_R")
    mean_R = mass_R / R**n
    scale = params.gamma**n / mean_R

    def func(r):
        r = np.asarray(r, dtype=float)
        inner = r < R
        out = np.empty_like(r)
        out[inner] = scale * f(r[inner])
        out[~inner] = outer_branch(params, r[~inner])
        return out

    def mass(r):
        # n integral_0^r f_{gamma,R} s^(n-1) ds; on the annulus it is rho(r)^n
        r = np.asarray(r, dtype=float)
        rc = np.minimum(r, R)
        inner = scale * np.asarray(f.cumulative(rc, cfg), dtype=float)
        outer = _annulus_rho(params, r) ** n
        return np.where(r < R, inner, outer)

    lb = min(scale * f.lower_bound, params.M * params.gamma ** (n - 1))
    out = PerturbedDensity(
        n=n,
        func=func,
        breakpoints=tuple(sorted({R, *(b for b in f.breakpoints if b < R)})),
        singular_radii=tuple(s for s in f.singular_radii if s < R),
        lower_bound=lb,
        kind="perturbed",
        params={"params": params.to_json(), "base": f.to_json()},
        mass=mass,
        perturbation=params,
        base=f,
        base_mean_R=mean_R,
    )
    quad_mass = integrate_weighted(lambda r: outer_branch(params, r), R, 1.0, n, cfg).value
    if abs(quad_mass - annulus_mass(params)) > 1e-9:
        raise InvalidDensity(
            f"annulus mass by quadrature {quad_mass!r} disagrees with {annulus_mass(params)!r}"
        )
    return out


def _decode_perturbed(data: dict) -> PerturbedDensity:
    unknown = set(data) - {"kind", "n", "params", "base"}
    if unknown:
        raise InvalidDensity(f"unknown density fields: {sorted(unknown)}")
    params = PerturbationParams.from_json(data["params"])
    if data["n"] != params.n:
        raise InvalidDensity("perturbed density n disagrees with its params")
    return build(density_from_json(data["base"]), params)


register_decoder("perturbed", _decode_perturbed)


def annulus_mass(params: PerturbationParams, cfg: QuadratureConfig | None = None, *, check: bool = False) -> float:
    """integral_R^1 f_{gamma,R} r^(n-1) dr = (1 - (gamma R)^n) / n."""
    n = params.n
    exact = (1.0 - params.gamma_R**n) / n
    if check:
        quad = integrate_weighted(lambda r: outer_branch(params, r), params.R, 1.0, n, cfg).value
        if abs(quad - exact) > 1e-9:
            raise InvalidDensity(f"annulus mass {exact!r} does not match quadrature {quad!r}")
    return exact


def annulus_profile(params: PerturbationParams) -> RadialProfile:
    """rho(r) = gamma R + M (r - R) on [R, 1]; rho(1) = 1 by construction."""
    prof = affine_profile(params.n, params.R, params.gamma_R, params.M)
    return dataclasses.replace(prof, rho_fn=lambda r: _annulus_rho(params, r))


class AnnulusEnergy(NamedTuple):
    exact: float
    surrogate: float


def annulus_energy(params: PerturbationParams) -> AnnulusEnergy:
    """Exact q-energy of the radial derivative on A(R, 1), and M^q (1 - R).

    exact = omega_n M^q (1 - R^n); the unweighted surrogate equals
    (1 - R)^(1 + alpha).
    """
    n, q, M, R = params.n, params.q, params.M, params.R
    log_mq = q * math.log(M)
    log_exact = log_mq + math.log(unit_ball_volume(n) * (1.0 - R**n))
    if log_exact > 700.0:
        raise EnergyOverflow(f"annulus energy overflows (log value {log_exact:.3f})", log_exact)
    mq = math.exp(log_mq)
    return AnnulusEnergy(unit_ball_volume(n) * mq * (1.0 - R**n), mq * (1.0 - R))


class TailReport(NamedTuple):
    value: float
    predicted_scale: float
    pointwise_bound: float


def lp_tail(
    params: PerturbationParams,
    f: RadialDensity | None = None,
    p: float | None = None,
    cfg: QuadratureConfig | None = None,
) -> TailReport:
    """integral over A(R, 1) of |f_{gamma,R}|^p dx by quadrature.

    The annulus branch does not depend on the base datum ``f``; it is accepted
    for symmetry with ``build``. ``predicted_scale`` is (1 - R)^(alpha p/q + 1).
    """
    p = params.p if p is None else float(p)
    n, R = params.n, params.R
    val = integrate_weighted(lambda r: outer_branch(params, r) ** p, R, 1.0, n, cfg).value
    return TailReport(
        sphere_area(n) * val,
        (1.0 - R) ** (params.alpha * p / params.q + 1.0),
        2.0 ** (n - 1) * params.gap / (1.0 - R),
    )
