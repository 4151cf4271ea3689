"""Adaptive Gauss-Legendre integration of one-dimensional radial integrands.

Panels carry a 15-point Gauss-Legendre rule; the error of a panel is the
difference between the rule on the whole panel and the sum of the rule on
its two halves. Panels whose error exceeds their length-proportional share
of the tolerance are bisected, all at once, until the total error meets
``max(abs_tol, rel_tol * |I|)``.

Endpoints flagged as singular are approached by a graded sequence of panels
whose distance to the endpoint halves at every level. When floating-point
resolution near the endpoint is exhausted, the remaining tail is
extrapolated from the partial sums with Wynn's epsilon algorithm, which is
exact for sums of geometric sequences (the panel masses of a power
singularity).

Integrands must accept a numpy array of abscissae and return an array of
the same shape (scalars are broadcast).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DivergentIntegral, InvalidIntegrand, ToleranceNotMet

__all__ = [
    "QuadratureConfig",
    "QuadResult",
    "integrate",
    "integrate_weighted",
    "GL_DEGREE",
]

_ORDER = 15
_X, _W = np.polynomial.legendre.leggauss(_ORDER)
#: highest polynomial degree integrated exactly by one panel
GL_DEGREE = 2 * _ORDER - 1

_EPS = np.finfo(float).eps
# graded refinement stops once the panel is this close (relative) to a nonzero endpoint
_GRADED_REL_FLOOR = 2.0**-30
_GRADED_MAX_DEPTH = 200


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 2**16
    singular_endpoints: tuple[bool, bool] = (False, False)

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be >= 1")
        left, right = self.singular_endpoints
        object.__setattr__(self, "singular_endpoints", (bool(left), bool(right)))

    def replace(self, **changes) -> QuadratureConfig:
        return dataclasses.replace(self, **changes)

    def to_json(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_subdivisions": int(self.max_subdivisions),
            "singular_endpoints": list(self.singular_endpoints),
        }

    @classmethod
    def from_json(cls, data: dict) -> QuadratureConfig:
        allowed = {"rel_tol", "abs_tol", "max_subdivisions", "singular_endpoints"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown quadrature fields: {sorted(unknown)}")
        kw = dict(data)
        if "singular_endpoints" in kw:
            kw["singular_endpoints"] = tuple(kw["singular_endpoints"])
        return cls(**kw)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class QuadResult:
    """Integral value with its error estimate."""

    value: float
    error: float
    evaluations: int = 0

    def __float__(self) -> float:
        return self.value


class _Counter:
    __slots__ = ("n",)

    def __init__(self):
        self.n = 0


def _sample(g, x, counter):
    y = np.asarray(g(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    counter.n += x.size
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)]
        raise InvalidIntegrand(f"integrand is not finite at interior point r={bad.flat[0]!r}")
    return y


def _gauss(g, lo, hi, counter):
    """15-point rule on every panel [lo[i], hi[i]]; returns (values, abs values)."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _X[None, :]
    y = _sample(g, x, counter)
    return half * (y @ _W), half * (np.abs(y) @ _W)


def _adaptive(g, a, b, rel_tol, abs_tol, max_sub, counter):
    length = b - a
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    whole, _ = _gauss(g, lo, hi, counter)
    # panels that met their share of the tolerance are frozen
    done_val = done_err = done_abs = 0.0
    splits = 0
    while True:
        mid = 0.5 * (lo + hi)
        left, left_abs = _gauss(g, lo, mid, counter)
        right, right_abs = _gauss(g, mid, hi, counter)
        value = left + right
        err = np.abs(whole - value)
        total = done_val + float(value.sum())
        total_err = done_err + float(err.sum())
        resabs = done_abs + float((left_abs + right_abs).sum())
        tol = max(abs_tol, rel_tol * abs(total))
        if total_err <= tol or total_err <= 50.0 * _EPS * resabs:
            return total, total_err
        width = hi - lo
        refine = err > tol * width / length
        if not refine.any():
            return total, total_err
        # panels at floating-point resolution cannot be bisected further
        if np.any(refine & (width <= 8.0 * _EPS * np.maximum(np.abs(lo), np.abs(hi)))):
            raise ToleranceNotMet(
                f"tolerance not met on [{a}, {b}]: panels at resolution limit", total, total_err
            )
        splits += int(refine.sum())
        if splits > max_sub:
            raise ToleranceNotMet(
                f"tolerance not met on [{a}, {b}] after {max_sub} subdivisions "
                f"(estimate {total!r}, error {total_err:.3e})",
                total,
                total_err,
            )
        keep = ~refine
        done_val += float(value[keep].sum())
        done_err += float(err[keep].sum())
        done_abs += float((left_abs + right_abs)[keep].sum())
        lo, hi = np.concatenate([lo[refine], mid[refine]]), np.concatenate([mid[refine], hi[refine]])
        whole = np.concatenate([left[refine], right[refine]])


def _wynn_epsilon(partial_sums):
    """Extrapolated limit of a sequence and an error estimate (Wynn's epsilon table)."""
    s = [float(v) for v in partial_sums]
    best, best_err = s[-1], abs(s[-1] - s[-2]) if len(s) > 1 else math.inf
    prev = [0.0] * (len(s) + 1)
    cur = s
    col = 0
    while len(cur) > 2:
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0.0:
                return cur[i + 1], abs(best_err) if col else 0.0
            nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and len(cur) >= 2:
            err = abs(cur[-1] - cur[-2])
            if err < best_err:
                best, best_err = cur[-1], err
    return best, best_err


def _graded(g, a, b, toward_left, rel_tol, abs_tol, max_sub, counter):
    length = b - a
    endpoint = a if toward_left else b
    floor = _GRADED_REL_FLOOR * abs(endpoint)
    sums = []
    total = 0.0
    total_err = 0.0
    prev_c = None
    ratios = []
    for k in range(_GRADED_MAX_DEPTH):
        d_hi = length * 2.0**-k
        d_lo = 0.5 * d_hi
        pa, pb = (a + d_lo, a + d_hi) if toward_left else (b - d_hi, b - d_lo)
        # abscissae near a nonzero endpoint carry rounding error eps*|endpoint|/distance
        panel_rel = max(rel_tol, 16.0 * _EPS * abs(endpoint) / d_lo)
        c, e = _adaptive(g, pa, pb, panel_rel, max(abs_tol * 2.0 ** -(k + 1), 1e-300), max_sub, counter)
        total += c
        total_err += e
        sums.append(total)
        tol = max(abs_tol, rel_tol * abs(total))
        if prev_c is not None and prev_c != 0.0:
            ratios.append(c / prev_c)
        prev_c = c
        if k >= 3:
            if c == 0.0 and sums[-2] == total:
                return total, total_err
            t = ratios[-1] if ratios else 0.0
            if 0.0 <= t < 1.0:
                tail = abs(c) * t / (1.0 - t)
                if tail <= 0.1 * tol and abs(c) <= tol:
                    return total, total_err + tail
            if k >= 8 and len(ratios) >= 5 and min(ratios[-5:]) >= 0.999:
                raise DivergentIntegral(
                    f"integral diverges toward r={endpoint!r} (panel mass ratio {ratios[-1]:.4f})",
                    total,
                    math.inf,
                )
        if d_lo < floor:
            break
    t = ratios[-1] if ratios else 0.0
    if len(ratios) >= 5 and min(ratios[-5:]) >= 0.999:
        raise DivergentIntegral(f"integral diverges toward r={endpoint!r}", total, math.inf)
    value, extrap_err = _wynn_epsilon(sums[-min(len(sums), 24):])
    err = total_err + extrap_err
    if not 0.0 <= abs(t) < 1.0 or err > max(abs_tol, rel_tol * abs(value)) * 1e3:
        raise ToleranceNotMet(
            f"graded refinement toward r={endpoint!r} did not converge "
            f"(estimate {value!r}, error {err:.3e})",
            value,
            err,
        )
    return value, err


def _segment(g, a, b, left_sing, right_sing, rel_tol, abs_tol, max_sub, counter):
    if left_sing and right_sing:
        m = 0.5 * (a + b)
        v1, e1 = _graded(g, a, m, True, rel_tol, 0.5 * abs_tol, max_sub, counter)
        v2, e2 = _graded(g, m, b, False, rel_tol, 0.5 * abs_tol, max_sub, counter)
        return v1 + v2, e1 + e2
    if left_sing or right_sing:
        return _graded(g, a, b, left_sing, rel_tol, abs_tol, max_sub, counter)
    return _adaptive(g, a, b, rel_tol, abs_tol, max_sub, counter)


def integrate(
    g: Callable,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    *,
    breaks: Iterable[float] = (),
    singular: Iterable[float] = (),
) -> QuadResult:
    """Integrate ``g`` over ``[a, b]``.

    ``breaks`` are interior points where ``g`` may be discontinuous; the
    interval is split there. ``singular`` points are split on as well and
    approached from both sides by graded refinement. The endpoint flags of
    ``cfg.singular_endpoints`` apply to ``a`` and ``b``.

    Raises ``ToleranceNotMet`` (carrying the best estimate) when the
    subdivision budget is exhausted, ``DivergentIntegral`` when graded
    refinement shows a non-integrable endpoint, and ``InvalidIntegrand`` on
    a non-finite sample.
    """
    cfg = cfg or DEFAULT_CONFIG
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integration limits must be finite")
    if a > b:
        raise ValueError(f"need a <= b, got [{a}, {b}]")
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    sing = {float(s) for s in singular}
    cuts = sorted({float(p) for p in breaks} | sing)
    cuts = [p for p in cuts if a < p < b]
    nodes = [a, *cuts, b]
    nseg = len(nodes) - 1
    counter = _Counter()
    value = 0.0
    err = 0.0
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        left_sing = lo in sing or (lo == a and cfg.singular_endpoints[0])
        right_sing = hi in sing or (hi == b and cfg.singular_endpoints[1])
        v, e = _segment(
            g, lo, hi, left_sing, right_sing, cfg.rel_tol, cfg.abs_tol / nseg,
            int(cfg.max_subdivisions), counter,
        )
        value += v
        err += e
    return QuadResult(value, err, counter.n)


def integrate_weighted(
    g: Callable,
    a: float,
    b: float,
    n: int,
    cfg: QuadratureConfig | None = None,
    *,
    breaks: Iterable[float] = (),
    singular: Iterable[float] = (),
) -> QuadResult:
    """``integral_a^b g(r) r^(n-1) dr``, the radial part of a ball integral in R^n."""
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n}")
    n = int(n)
    return integrate(lambda r: np.asarray(g(r), dtype=float) * r ** (n - 1), a, b, cfg,
                     breaks=breaks, singular=singular)
