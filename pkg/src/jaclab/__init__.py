"""Numerical laboratory for the prescribed Jacobian equation det Du = f on the unit ball."""

from .blowup import SweepTemplate, estimate_check, scan, sharpness_family
from .errors import JaclabError
from .minimality import AnnulusMap, partition, quasimin_ratio, radial_map, twist_competitor
from .norms import dist, llogl_norm, lp_norm
from .perturbation import PerturbationParams, annulus_energy, build
from .quadrature import QuadratureConfig, integrate
from .radial import RadialDensity, RadialProfile, constant_density, jacobian, solve_radial, sobolev_energy

__version__ = "0.1.0"

__all__ = [
    "AnnulusMap",
    "JaclabError",
    "PerturbationParams",
    "QuadratureConfig",
    "RadialDensity",
    "RadialProfile",
    "SweepTemplate",
    "annulus_energy",
    "build",
    "constant_density",
    "dist",
    "estimate_check",
    "integrate",
    "jacobian",
    "llogl_norm",
    "lp_norm",
    "partition",
    "quasimin_ratio",
    "radial_map",
    "scan",
    "sharpness_family",
    "solve_radial",
    "sobolev_energy",
    "twist_competitor",
]
