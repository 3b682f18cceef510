"""The dual (associate) norm and its optimizing witnesses.

The supremum defining the dual norm is never optimized numerically in
the trusted path: it collapses to the quasi-norm for s <= p and to the
quasi-norm of the level function for p < s, with an explicit witness
g = psi / ||.||**(s-1), psi(t) = h(t)**(s-1) * t**(s/p-1), built from
h = f* or h = level of f*.  A randomized admissible-function oracle
provides an independent lower bound for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import (
    MonomialFunction,
    PiecewiseFunction,
    RunningIntegral,
    StepFunction,
    function_to_json,
    is_nonincreasing,
    pairing_integral,
    rearrange,
)
from .level import level_function
from .norms import Exponents, lorentz_norm

__all__ = ["DualResult", "dual_norm", "dual_oracle", "equality_diagnosis"]


@dataclass(frozen=True, eq=False)
class DualResult:
    value: float
    branch: str  # s_le_p_identity | level_function | sup_s_infinity
    witness: PiecewiseFunction | None

    def as_json(self) -> dict:
        return {
            "value": self.value,
            "branch": self.branch,
            "witness": None if self.witness is None else function_to_json(self.witness),
        }


def _identity_witness(fr: StepFunction, e: Exponents, value: float) -> MonomialFunction:
    # psi = (f*)**(s-1) * t**(s/p-1), normalized by value**(s-1); computed
    # as (v/value)**(s-1) per piece to keep large s in range.
    coeffs = (fr.values / value) ** (e.s - 1.0)
    betas = np.full(fr.npieces, 1.0 - e.s / e.p)
    return MonomialFunction.make(fr.starts, fr.ends, coeffs, betas)


def _level_witness(intervals, slopes, e: Exponents, value: float) -> StepFunction:
    # On each hull interval psi is the constant lam_k**(s-1).
    vals = (slopes / value) ** (e.s - 1.0)
    return StepFunction.make(intervals[:, 0], intervals[:, 1], vals)


def dual_norm(f: StepFunction, e: Exponents) -> DualResult:
    """The dual norm of f, with the optimizing witness when s < inf.

    The input is rearranged internally (the dual norm only sees f*).
    """
    fr = rearrange(f)
    if e.s <= e.p:
        value = lorentz_norm(fr, e).value
        witness = None if fr.is_zero else _identity_witness(fr, e, value)
        return DualResult(value, "s_le_p_identity", witness)
    if fr.is_zero:
        branch = "sup_s_infinity" if e.s_is_inf else "level_function"
        return DualResult(0.0, branch, None)
    lr = level_function(fr, e.alpha)
    value = lorentz_norm(lr.level, e).value
    if e.s_is_inf:
        return DualResult(value, "sup_s_infinity", None)
    witness = _level_witness(lr.intervals, lr.slopes, e, value)
    return DualResult(value, "level_function", witness)


def _random_admissible(rng: np.random.Generator, span: float, ec: Exponents):
    """Random non-increasing step with unit conjugate norm, or None."""
    n = int(rng.integers(1, 7))
    knots = np.sort(rng.uniform(0.0, span, size=n))
    vals = np.sort(rng.uniform(0.0, 1.0, size=n))[::-1]
    starts = np.concatenate([[0.0], knots[:-1]])
    g = StepFunction.make(starts, knots, vals)
    if g.is_zero:
        return None
    nrm = lorentz_norm(g, ec).value
    if nrm <= 0.0:
        return None
    return StepFunction.make(g.starts, g.ends, g.values / nrm)


def dual_oracle(f: StepFunction, e: Exponents, trials: int, seed: int) -> float:
    """Best pairing found over random admissible g (plus known candidates).

    Always includes the analytic witness when one exists; for s = inf it
    also tries the scaled-indicator family chi_(0,xi) / (p' xi**(1/p'))
    at knots of f* and at a dyadic sweep toward 0, which approaches the
    dual norm when no exact optimizer exists.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    fr = rearrange(f)
    if fr.is_zero:
        return 0.0
    ec = e.conjugate()
    best = 0.0
    res = dual_norm(fr, e)
    if res.witness is not None:
        best = max(best, pairing_integral(fr, res.witness))
    if e.s_is_inf:
        run = RunningIntegral.from_function(fr)
        xis = list(fr.ends) + [fr.ends[0] * 0.5**j for j in range(1, 24)]
        for xi in xis:
            best = max(best, float(run(xi)) / (e.p_conj * xi ** (1.0 / e.p_conj)))
    rng = np.random.default_rng(seed)
    span = 1.5 * fr.support_end
    for _ in range(trials):
        g = _random_admissible(rng, span, ec)
        if g is not None:
            best = max(best, pairing_integral(fr, g))
    return best


def equality_diagnosis(f: StepFunction, e: Exponents, tol: float = 1e-10) -> bool:
    """Whether the dual norm agrees with the quasi-norm within tolerance.

    Requires p < s and a non-increasing input.  Agreement characterizes
    inputs with f(t) * t**alpha non-increasing, which a nonzero step can
    only approach through discretizations of the weight itself.
    """
    if not e.p < e.s:
        raise ValueError("equality_diagnosis requires p < s")
    if not is_nonincreasing(f):
        raise ValueError("equality_diagnosis requires a non-increasing input")
    dn = dual_norm(f, e).value
    qn = lorentz_norm(f, e).value
    return abs(dn - qn) <= tol * max(1.0, qn)
