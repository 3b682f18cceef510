"""Exponent arithmetic and the norm functionals.

The quasi-norm of a piecewise monomial is a closed-form power sum,
evaluated in log space so that large second indices (s in the hundreds
or thousands) neither overflow nor lose the leading digits.  The maximal
norm integrates the running average A + B/t with adaptive Gauss-Kronrod
quadrature after factoring out its supremum; everything else is exact.

``s = inf`` is a first-class value throughout: conjugation maps it to 1,
the (p/s)**(1/s) factor degenerates to 1, and norms become suprema.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._quadrature import adaptive_gk
from .functions import (
    MonomialFunction,
    PiecewiseFunction,
    StepFunction,
    is_nonincreasing,
    maximal_function,
    pairing_integral,
    rearrange,
)

__all__ = [
    "Exponents",
    "NormValue",
    "NotInLorentzSpace",
    "lorentz_norm",
    "maximal_norm",
    "holder_pairing",
    "cross_index_check",
    "norm_limit_check",
]

_EXP_TOL = 1e-12


class NotInLorentzSpace(ValueError):
    """The requested norm diverges for this function."""


def _conj(x: float) -> float:
    if x == 1.0:
        return math.inf
    if math.isinf(x):
        return 1.0
    return x / (x - 1.0)


def _pw(base: float, expo: float) -> float:
    """base**expo with the convention x**0 == 1 (covers s = inf limits)."""
    if expo == 0.0:
        return 1.0
    return base**expo


@dataclass(frozen=True)
class Exponents:
    """The parameter bundle (p, s) with conjugates and derived constants.

    ``alpha`` is the weight exponent 1 - s'/p' (the level-function weight
    is t**(-alpha)) and ``c_ps = (p/s)**(1/s) * (p'/s')**(1/s')`` is the
    sharp comparison constant; both take their limiting forms at s = inf
    (alpha = 1/p, c_ps = p') and at s = 1 (alpha = -inf, c_ps = p).
    """

    p: float
    s: float
    p_conj: float = field(init=False)
    s_conj: float = field(init=False)
    alpha: float = field(init=False)
    c_ps: float = field(init=False)

    def __post_init__(self):
        p, s = float(self.p), float(self.s)
        if not (1.0 < p < math.inf):
            raise ValueError("p must lie in (1, inf)")
        if not (1.0 <= s):
            raise ValueError("s must lie in [1, inf]")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "s", s)
        pc = _conj(p)
        sc = _conj(s)
        object.__setattr__(self, "p_conj", pc)
        object.__setattr__(self, "s_conj", sc)
        object.__setattr__(self, "alpha", 1.0 - sc / pc)
        c = _pw(p / s if math.isfinite(s) else 0.0, 0.0 if math.isinf(s) else 1.0 / s)
        c *= _pw(pc / sc if math.isfinite(sc) else 0.0, 0.0 if math.isinf(sc) else 1.0 / sc)
        object.__setattr__(self, "c_ps", c)

    @property
    def s_is_inf(self) -> bool:
        return math.isinf(self.s)

    def conjugate(self) -> "Exponents":
        return Exponents(self.p_conj, self.s_conj)


@dataclass(frozen=True)
class NormValue:
    value: float
    method: str  # closed_form | quadrature | supremum
    est_abs_error: float = 0.0

    def as_json(self) -> dict:
        return {"value": self.value, "method": self.method, "err": self.est_abs_error}


def _logsumexp(terms: np.ndarray) -> float:
    m = np.max(terms)
    if m == -math.inf:
        return -math.inf
    return float(m + math.log(np.sum(np.exp(terms - m))))


def _norm_finite_s(a, b, c, beta, e: Exponents) -> float:
    """Closed-form quasi-norm for monomial pieces, computed in log space.

    Each piece contributes c**s * (b**g - a**g) / g with g = s*(1/p - beta),
    or c**s * log(b/a) when g vanishes; a = 0 with g <= 0 diverges.
    """
    s = e.s
    g = s * (1.0 / e.p - beta)
    logbr = np.abs(g) < _EXP_TOL
    neg = g < 0
    if np.any((logbr | neg) & (a <= 0.0)):
        raise NotInLorentzSpace(f"not in L^({e.p},{e.s})")
    log_terms = s * np.log(c)
    with np.errstate(divide="ignore"):
        loga = np.where(a > 0.0, np.log(a), -math.inf)
    logb = np.log(b)
    if np.any(logbr):
        log_terms[logbr] += np.log(np.log(b[logbr] / a[logbr]))
    pos = ~logbr & ~neg
    if np.any(pos):
        gp = g[pos]
        ratio = np.exp(gp * (loga[pos] - logb[pos]))
        log_terms[pos] += gp * logb[pos] + np.log1p(-ratio) - np.log(gp)
    if np.any(neg):
        gn = g[neg]
        ratio = np.exp(-gn * (logb[neg] - loga[neg]))
        log_terms[neg] += gn * loga[neg] + np.log1p(-ratio) - np.log(-gn)
    return math.exp(_logsumexp(log_terms) / s)


def _norm_sup(a, b, c, beta, e: Exponents) -> float:
    """sup of t**(1/p) * c * t**(-beta) over the pieces."""
    expo = 1.0 / e.p - beta
    flat = np.abs(expo) < _EXP_TOL
    neg = expo < 0
    if np.any(~flat & neg & (a <= 0.0)):
        raise NotInLorentzSpace(f"not in L^({e.p},inf)")
    at = np.where(~flat & neg, a, b)
    with np.errstate(divide="ignore"):
        vals = np.where(flat, c, c * at ** np.where(flat, 0.0, expo))
    return float(np.max(vals))


def lorentz_norm(f: PiecewiseFunction, e: Exponents) -> NormValue:
    """The quasi-norm built from the decreasing rearrangement.

    Step inputs are rearranged internally; monomial inputs must already
    be non-increasing (the package never needs the rearrangement of a
    general monomial).
    """
    if isinstance(f, StepFunction):
        fr = rearrange(f)
        a, b = fr.starts, fr.ends
        c, beta = fr.values, np.zeros(fr.npieces)
    else:
        if not is_nonincreasing(f):
            raise ValueError("monomial input to lorentz_norm must be non-increasing")
        a, b, c, beta = f.starts, f.ends, f.coeffs, f.betas
    if len(a) == 0:
        return NormValue(0.0, "supremum" if e.s_is_inf else "closed_form")
    if e.s_is_inf:
        return NormValue(_norm_sup(a, b, c, beta, e), "supremum")
    return NormValue(_norm_finite_s(a, b, c, beta, e), "closed_form")


def maximal_norm(f: StepFunction, e: Exponents) -> NormValue:
    """Norm of t**(1/p) * f**(t) in L^s(dt/t), f** the running average of f*.

    The supremum C of t**(1/p) f**(t) is closed form (the weighted average
    is monotone between knots), and for finite s the integrand is scaled
    by C before quadrature so that large s cannot overflow.  Pieces with
    B = 0 and the infinite tail integrate in closed form.
    """
    fr = rearrange(f)
    if fr.is_zero:
        return NormValue(0.0, "supremum" if e.s_is_inf else "closed_form")
    mf = maximal_function(fr)
    p, s = e.p, e.s
    # t**(1/p) * (A + B/t) is monotone on each piece: its derivative has the
    # sign of A*t/p - B/p', a single crossing that is a minimum; so the
    # supremum over each piece sits at an endpoint (knots; the tail at its
    # left end).
    knots = mf.starts[1:]
    cands = knots ** (1.0 / p) * mf(knots)
    C = float(np.max(cands))
    if e.s_is_inf:
        return NormValue(C, "supremum")

    total = 0.0
    err = 0.0
    quad_a, quad_b, quad_ab = [], [], []
    for a, b, A, B in zip(mf.starts, mf.ends, mf.A, mf.B):
        if math.isinf(b):  # tail: A == 0, B is the total mass
            x = (B / C) * a ** (1.0 / p - 1.0)
            total += x**s * e.p_conj / s
        elif B == 0.0:
            x = (A / C) * b ** (1.0 / p)
            ratio = (a / b) ** (s / p) if a > 0.0 else 0.0
            total += x**s * (1.0 - ratio) * p / s
        else:
            quad_a.append(a)
            quad_b.append(b)
            quad_ab.append((A, B))
    method = "closed_form"
    if quad_a:
        method = "quadrature"

        def integrand(t, params):
            w = t ** (1.0 / p) * (params[:, :1] + params[:, 1:] / t) / C
            return w**s / t

        val, qerr = adaptive_gk(integrand, quad_a, quad_b, params=np.asarray(quad_ab))
        total += val
        err += qerr
    value = C * total ** (1.0 / s)
    if total > 0.0:
        err_value = C * total ** (1.0 / s) * err / (s * total)
    else:
        err_value = 0.0
    return NormValue(value, method, err_value)


def holder_pairing(
    f: StepFunction, g: StepFunction, e: Exponents, rearranged: bool = False
) -> tuple[float, float]:
    """(integral of f*g, norm bound); the pairing never exceeds the bound.

    With ``rearranged`` the pairing is taken between f* and g*, which can
    only increase it and still respects the bound.
    """
    if rearranged:
        f, g = rearrange(f), rearrange(g)
    pairing = pairing_integral(f, g)
    if f.is_zero or g.is_zero:
        return 0.0, 0.0
    bound = lorentz_norm(f, e).value * lorentz_norm(g, e.conjugate()).value
    return pairing, bound


def cross_index_check(
    f: PiecewiseFunction, e_r: Exponents, e_s: Exponents
) -> tuple[float, float]:
    """Both sides of the sharp cross-index comparison for r < s at fixed p:
    (p/s)**(1/s) ||f||_{p,s} <= (p/r)**(1/r) ||f||_{p,r}."""
    if abs(e_r.p - e_s.p) > _EXP_TOL:
        raise ValueError("cross-index comparison requires equal first indices")
    if not e_r.s < e_s.s:
        raise ValueError("requires r < s")
    lhs = _pw(e_s.p / e_s.s if not e_s.s_is_inf else 0.0, 0.0 if e_s.s_is_inf else 1.0 / e_s.s)
    lhs *= lorentz_norm(f, e_s).value
    rhs = _pw(e_r.p / e_r.s, 1.0 / e_r.s) * lorentz_norm(f, e_r).value
    return lhs, rhs


def norm_limit_check(
    f: StepFunction, p: float, s_sequence: Sequence[float]
) -> tuple[list[float], float]:
    """Quasi-norms along an s-sequence together with the s = inf value."""
    vals = [lorentz_norm(f, Exponents(p, s)).value for s in s_sequence]
    return vals, lorentz_norm(f, Exponents(p, math.inf)).value
