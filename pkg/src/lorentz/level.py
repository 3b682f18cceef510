"""Level functions: the least weighted concave majorant construction.

For a non-increasing step function f and weight t**(-alpha), the level
function is the unique non-increasing envelope lam_k * t**(-alpha) whose
running integral is the upper concave hull of the running integral of f
in the time change u = Phi(t) = t**(1-alpha) / (1-alpha).  Between knots
the graph of u -> F(t(u)) is convex (the exponent 1/(1-alpha) is >= 1),
so the hull touches it only at knots and a single monotone-stack scan
over the knot points finds every hull segment in O(n).

The hull-segment slopes lam_k are the per-interval averages of f against
the weight; equal consecutive slopes merge into one interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import (
    MonomialFunction,
    StepFunction,
    integral,
    is_nonincreasing,
    precedes,
)
from .norms import Exponents, lorentz_norm

__all__ = ["LevelResult", "LevelReport", "level_function", "verify_level", "d7_bracket",
           "weight_times_nonincreasing"]


@dataclass(frozen=True, eq=False)
class LevelResult:
    """Level function of ``source`` with the hull intervals and slopes."""

    alpha: float
    intervals: np.ndarray  # (K, 2) interval endpoints
    slopes: np.ndarray     # (K,) strictly decreasing
    level: MonomialFunction
    source: StepFunction

    def as_json(self) -> dict:
        from .functions import function_to_json

        return {
            "alpha": self.alpha,
            "intervals": [[float(a), float(b)] for a, b in self.intervals],
            "slopes": [float(x) for x in self.slopes],
            "level": function_to_json(self.level),
        }


def _phi_antiderivative(t: np.ndarray, alpha: float) -> np.ndarray:
    """Integral of u**(-alpha) from 0 to t."""
    if alpha == 0.0:
        return t
    return t ** (1.0 - alpha) / (1.0 - alpha)


def level_function(f: StepFunction, alpha: float) -> LevelResult:
    """Level function of a non-increasing step f for the weight t**(-alpha).

    ``alpha`` must lie in [0, 1); alpha = 0 gives the ordinary least
    concave majorant of the running integral.
    """
    if not (0.0 <= alpha < 1.0):
        raise ValueError("alpha must lie in [0, 1)")
    if not is_nonincreasing(f):
        raise ValueError("level_function requires a non-increasing input")
    empty = np.empty((0, 2))
    if f.is_zero:
        return LevelResult(alpha, empty, np.empty(0), MonomialFunction.zero(), f)

    t = np.concatenate([[0.0], f.ends])
    F = np.concatenate([[0.0], np.cumsum(f.values * f.widths)])
    u = _phi_antiderivative(t, alpha)

    # Upper concave hull over the knot points (u_i, F_i); popping on
    # slope(prev) <= slope(next) keeps slopes strictly decreasing and
    # merges collinear runs into a single segment.
    hull = [0]
    for i in range(1, len(t)):
        while len(hull) >= 2:
            i2, i1 = hull[-2], hull[-1]
            s_prev = (F[i1] - F[i2]) / (u[i1] - u[i2])
            s_next = (F[i] - F[i1]) / (u[i] - u[i1])
            if s_prev <= s_next:
                hull.pop()
            else:
                break
        hull.append(i)

    hull = np.asarray(hull)
    a = t[hull[:-1]]
    b = t[hull[1:]]
    slopes = (F[hull[1:]] - F[hull[:-1]]) / (u[hull[1:]] - u[hull[:-1]])
    level = MonomialFunction.make(a, b, slopes, np.full(len(slopes), alpha))
    return LevelResult(alpha, np.column_stack([a, b]), slopes, level, f)


def weight_times_nonincreasing(f: StepFunction, alpha: float) -> bool:
    """Whether t -> f(t) * t**alpha is non-increasing on the half line.

    For alpha > 0 this fails on any piece of positive length, so a
    nonzero canonical step satisfies it only when alpha == 0 (where it
    reduces to monotonicity of f itself).
    """
    if f.is_zero:
        return True
    if alpha == 0.0:
        return is_nonincreasing(f)
    return bool(np.all(f.widths <= 0))


@dataclass(frozen=True)
class LevelReport:
    slopes_strictly_decreasing: bool
    ratio_nonincreasing: bool
    mass_equalities: bool
    source_precedes_level: bool
    expects_norm_equality: bool
    max_mass_mismatch: float

    @property
    def passed(self) -> bool:
        return (
            self.slopes_strictly_decreasing
            and self.ratio_nonincreasing
            and self.mass_equalities
            and self.source_precedes_level
        )


def verify_level(lr: LevelResult, rel_tol: float = 1e-12) -> LevelReport:
    """Re-check every structural property of a level construction.

    The equality diagnosis records whether the quasi-norms of source and
    level are expected to agree: true exactly when f * t**alpha is
    non-increasing, which for a nonzero step needs alpha == 0.
    """
    if lr.source.is_zero:
        return LevelReport(True, True, True, True, True, 0.0)
    diffs = np.diff(lr.slopes)
    strict = bool(np.all(diffs < 0))
    # level / weight equals the slope on each interval, so the ratio is
    # non-increasing exactly when the slopes are.
    ratio = strict
    worst = 0.0
    ok_mass = True
    for (a, b), lam in zip(lr.intervals, lr.slopes):
        mass_f = integral(lr.source, a, b)
        mass_w = lam * (_phi_antiderivative(np.asarray(b), lr.alpha)
                        - _phi_antiderivative(np.asarray(a), lr.alpha))
        mism = abs(mass_f - mass_w) / max(1.0, abs(mass_f))
        worst = max(worst, float(mism))
        ok_mass &= mism <= rel_tol
    prec = bool(precedes(lr.source, lr.level))
    return LevelReport(
        slopes_strictly_decreasing=strict,
        ratio_nonincreasing=ratio,
        mass_equalities=bool(ok_mass),
        source_precedes_level=prec,
        expects_norm_equality=weight_times_nonincreasing(lr.source, lr.alpha),
        max_mass_mismatch=worst,
    )


def d7_bracket(f: StepFunction, e: Exponents) -> tuple[float, float, float]:
    """The two-sided comparison of the quasi-norm with the level's norm:
    returns (low, mid, high) = (||level||, ||f||, c_ps * ||level||)."""
    if not e.p < e.s:
        raise ValueError("the level-function bracket requires p < s")
    lr = level_function(f, e.alpha)
    low = lorentz_norm(lr.level, e).value
    mid = lorentz_norm(f, e).value
    return low, mid, e.c_ps * low
