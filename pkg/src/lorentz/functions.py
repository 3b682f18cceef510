"""Exact algebra of nonnegative piecewise functions on the half line.

Two computable function classes cover everything the rest of the package
needs: step functions (piecewise constant) and piecewise monomials
``c * t**(-beta)``.  Both have bounded support, and every operation here
-- integration, decreasing rearrangement, running integrals, the maximal
function, the Hardy-Littlewood-Polya precedence check -- is closed form,
so downstream norm computations stay exact.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "VALUE_TOL",
    "FunctionFormatError",
    "StepFunction",
    "MonomialFunction",
    "RunningIntegral",
    "MaximalFunction",
    "PrecedenceCheck",
    "PiecewiseFunction",
    "rearrange",
    "integral",
    "maximal_function",
    "precedes",
    "discretize",
    "is_nonincreasing",
    "equal_functions",
    "distribution_length",
    "step_sum",
    "step_abs_diff",
    "step_mul",
    "pairing_integral",
    "dilate",
    "function_to_json",
    "function_from_json",
]

# Tolerance for value comparisons between canonical piece lists.
VALUE_TOL = 1e-12

# |exponent| below this selects the logarithmic antiderivative branch,
# avoiding cancellation in (b**g - a**g) / g.
_EXP_TOL = 1e-12


class FunctionFormatError(ValueError):
    """Malformed function JSON; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def _asarray(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _canonical_intervals(starts, ends, payload):
    """Sort pieces, drop empty ones, verify disjointness, snap shared knots.

    ``payload`` is a tuple of per-piece arrays carried along (values, or
    coeffs and betas).  Returns the filtered, sorted arrays.
    """
    a, b = _asarray(starts), _asarray(ends)
    payload = tuple(_asarray(p) for p in payload)
    if not (a.ndim == b.ndim == 1 and all(p.ndim == 1 for p in payload)):
        raise ValueError("piece arrays must be one-dimensional")
    if not (len(a) == len(b) and all(len(p) == len(a) for p in payload)):
        raise ValueError("piece arrays must have equal length")
    if len(a) and not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("piece endpoints must be finite")
    if np.any(a < 0):
        raise ValueError("piece endpoints must be >= 0")

    keep = b > a
    a, b = a[keep], b[keep]
    payload = tuple(p[keep] for p in payload)
    order = np.argsort(a, kind="stable")
    a, b = a[order], b[order]
    payload = tuple(p[order] for p in payload)

    if len(a) > 1:
        gap = a[1:] - b[:-1]
        snap = _EXP_TOL * np.maximum(1.0, b[:-1])
        bad = gap < -snap
        if np.any(bad):
            raise ValueError("pieces overlap")
        close = np.abs(gap) <= snap
        a[1:][close] = b[:-1][close]
    return a, b, payload


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Nonnegative piecewise-constant function with bounded support.

    Pieces are disjoint intervals ``(a, b)`` carrying a positive value;
    the function is 0 elsewhere.  Construction canonicalizes: pieces are
    sorted, zero-value and empty pieces dropped, and adjacent pieces with
    equal values merged.
    """

    starts: np.ndarray
    ends: np.ndarray
    values: np.ndarray

    @classmethod
    def from_pieces(cls, pieces: Iterable[Sequence[float]]) -> "StepFunction":
        """Build from an iterable of ``(a, b, value)`` triples."""
        rows = list(pieces)
        if not rows:
            return cls.zero()
        arr = _asarray(rows).reshape(len(rows), -1)
        if arr.shape[1] != 3:
            raise ValueError("step pieces must be (a, b, value) triples")
        return cls.make(arr[:, 0], arr[:, 1], arr[:, 2])

    @classmethod
    def make(cls, starts, ends, values) -> "StepFunction":
        a, b, (v,) = _canonical_intervals(starts, ends, (values,))
        if len(v) and not np.all(np.isfinite(v)):
            raise ValueError("piece values must be finite")
        if np.any(v < 0):
            raise ValueError("piece values must be >= 0")
        keep = v > 0
        a, b, v = a[keep], b[keep], v[keep]
        if len(a) > 1:
            # merge adjacent pieces with identical values
            brk = np.nonzero((a[1:] != b[:-1]) | (v[1:] != v[:-1]))[0]
            first = np.concatenate([[0], brk + 1])
            last = np.concatenate([brk, [len(a) - 1]])
            a, b, v = a[first], b[last], v[first]
        f = cls(starts=a, ends=b, values=v)
        a.setflags(write=False), b.setflags(write=False), v.setflags(write=False)
        return f

    @classmethod
    def zero(cls) -> "StepFunction":
        z = np.empty(0, dtype=float)
        return cls(starts=z, ends=z, values=z)

    @property
    def npieces(self) -> int:
        return len(self.values)

    @property
    def is_zero(self) -> bool:
        return len(self.values) == 0

    @property
    def widths(self) -> np.ndarray:
        return self.ends - self.starts

    @property
    def support_end(self) -> float:
        return float(self.ends[-1]) if len(self.ends) else 0.0

    def total_mass(self) -> float:
        return float(np.dot(self.values, self.widths))

    def lq_mass(self, q: float) -> float:
        """Exact integral of f**q over the half line."""
        return float(np.dot(self.values**q, self.widths))

    def pieces(self):
        return list(zip(self.starts, self.ends, self.values))

    def __call__(self, t) -> np.ndarray:
        t = _asarray(t)
        if self.is_zero:
            return np.zeros_like(t)
        idx = np.searchsorted(self.starts, t, side="right") - 1
        safe = np.clip(idx, 0, len(self.starts) - 1)
        inside = (idx >= 0) & (t < self.ends[safe])
        return np.where(inside, self.values[safe], 0.0)


@dataclass(frozen=True, eq=False)
class MonomialFunction:
    """Finitely many pieces ``coeff * t**(-beta)`` on disjoint intervals.

    The step class embeds as the ``beta == 0`` case.  A piece touching
    ``a == 0`` must have ``beta < 1`` so that the function is integrable
    near the origin.
    """

    starts: np.ndarray
    ends: np.ndarray
    coeffs: np.ndarray
    betas: np.ndarray

    @classmethod
    def from_pieces(cls, pieces: Iterable[Sequence[float]]) -> "MonomialFunction":
        rows = list(pieces)
        if not rows:
            return cls.zero()
        arr = _asarray(rows).reshape(len(rows), -1)
        if arr.shape[1] != 4:
            raise ValueError("monomial pieces must be (a, b, coeff, beta) quadruples")
        return cls.make(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])

    @classmethod
    def make(cls, starts, ends, coeffs, betas) -> "MonomialFunction":
        a, b, (c, beta) = _canonical_intervals(starts, ends, (coeffs, betas))
        if len(c) and not (np.all(np.isfinite(c)) and np.all(np.isfinite(beta))):
            raise ValueError("piece coefficients must be finite")
        if np.any(c < 0):
            raise ValueError("piece coefficients must be >= 0")
        keep = c > 0
        a, b, c, beta = a[keep], b[keep], c[keep], beta[keep]
        if np.any((a == 0) & (beta >= 1)):
            raise ValueError("a piece touching a = 0 requires beta < 1")
        if len(a) > 1:
            brk = np.nonzero((a[1:] != b[:-1]) | (c[1:] != c[:-1]) | (beta[1:] != beta[:-1]))[0]
            first = np.concatenate([[0], brk + 1])
            last = np.concatenate([brk, [len(a) - 1]])
            a, b, c, beta = a[first], b[last], c[first], beta[first]
        for arr in (a, b, c, beta):
            arr.setflags(write=False)
        return cls(starts=a, ends=b, coeffs=c, betas=beta)

    @classmethod
    def zero(cls) -> "MonomialFunction":
        z = np.empty(0, dtype=float)
        return cls(starts=z, ends=z, coeffs=z, betas=z)

    @classmethod
    def from_step(cls, f: StepFunction) -> "MonomialFunction":
        return cls.make(f.starts, f.ends, f.values, np.zeros_like(f.values))

    @property
    def npieces(self) -> int:
        return len(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def support_end(self) -> float:
        return float(self.ends[-1]) if len(self.ends) else 0.0

    def total_mass(self) -> float:
        return sum(
            _power_mass(c, bt, a, b)
            for a, b, c, bt in zip(self.starts, self.ends, self.coeffs, self.betas)
        )

    def lq_mass(self, q: float) -> float:
        return sum(
            _power_mass(c**q, q * bt, a, b)
            for a, b, c, bt in zip(self.starts, self.ends, self.coeffs, self.betas)
        )

    def pieces(self):
        return list(zip(self.starts, self.ends, self.coeffs, self.betas))

    def __call__(self, t) -> np.ndarray:
        t = _asarray(t)
        if self.is_zero:
            return np.zeros_like(t)
        idx = np.searchsorted(self.starts, t, side="right") - 1
        safe = np.clip(idx, 0, len(self.starts) - 1)
        inside = (idx >= 0) & (t < self.ends[safe])
        with np.errstate(divide="ignore", over="ignore"):
            vals = self.coeffs[safe] * t ** (-self.betas[safe])
        return np.where(inside, vals, 0.0)


PiecewiseFunction = Union[StepFunction, MonomialFunction]


def _power_mass(c: float, beta: float, lo: float, hi: float) -> float:
    """Exact integral of c * t**(-beta) over (lo, hi), 0 <= lo <= hi."""
    if c == 0.0 or hi <= lo:
        return 0.0
    if abs(beta - 1.0) < _EXP_TOL:
        if lo <= 0.0:
            raise ValueError("divergent integral: beta >= 1 piece touching a = 0")
        return c * math.log(hi / lo)
    g = 1.0 - beta
    if lo == 0.0:
        if g < 0.0:
            raise ValueError("divergent integral: beta >= 1 piece touching a = 0")
        return c * hi**g / g
    return c * (hi**g - lo**g) / g


def _power_mass_vec(c, beta, lo, hi):
    """Vectorized ``_power_mass`` for lo > 0 or beta < 1 inputs."""
    c, beta, lo, hi = np.broadcast_arrays(*map(_asarray, (c, beta, lo, hi)))
    out = np.zeros_like(c)
    live = (c > 0.0) & (hi > lo)
    if not np.any(live):
        return out
    g = 1.0 - beta[live]
    lo_, hi_, c_ = lo[live], hi[live], c[live]
    logbr = np.abs(g) < _EXP_TOL
    vals = np.empty_like(c_)
    if np.any(logbr):
        vals[logbr] = c_[logbr] * np.log(hi_[logbr] / lo_[logbr])
    gen = ~logbr
    if np.any(gen):
        gg = g[gen]
        with np.errstate(divide="ignore"):
            loin = np.where(lo_[gen] > 0, lo_[gen] ** gg, 0.0)
        vals[gen] = c_[gen] * (hi_[gen] ** gg - loin) / gg
    out[live] = vals
    return out


def rearrange(f: StepFunction) -> StepFunction:
    """Decreasing rearrangement: an equimeasurable non-increasing step.

    Sorts piece values in descending order and concatenates their lengths
    starting at 0, so the result has the same distribution function.
    """
    if f.is_zero:
        return f
    order = np.argsort(-f.values, kind="stable")
    v = f.values[order]
    w = f.widths[order]
    ends = np.cumsum(w)
    starts = np.concatenate([[0.0], ends[:-1]])
    return StepFunction.make(starts, ends, v)


def distribution_length(f: PiecewiseFunction, level: float) -> float:
    """Measure of the set {f > level} (level > 0)."""
    if isinstance(f, StepFunction):
        sel = f.values > level
        return float(np.sum(f.widths[sel]))
    total = 0.0
    for a, b, c, beta in f.pieces():
        if beta == 0.0:
            total += (b - a) if c > level else 0.0
            continue
        # c * t**(-beta) > level on (a, t_cross) for beta > 0
        t = (c / level) ** (1.0 / beta)
        if beta > 0:
            total += max(0.0, min(b, t) - a)
        else:
            total += max(0.0, b - max(a, t))
    return total


def is_nonincreasing(f: PiecewiseFunction, tol: float = VALUE_TOL) -> bool:
    """True if f is non-increasing on the whole half line.

    Requires contiguous support starting at 0 (a gap followed by a
    positive piece would make f increase across it).
    """
    if f.is_zero:
        return True
    if f.starts[0] != 0.0 and f.starts[0] > tol:
        return False
    if np.any(f.starts[1:] != f.ends[:-1]):
        return False
    if isinstance(f, StepFunction):
        return bool(np.all(np.diff(f.values) <= tol * np.maximum(1.0, f.values[:-1])))
    if np.any(f.betas < 0):
        return False
    # boundary values across consecutive pieces
    left = f.coeffs[:-1] * f.ends[:-1] ** (-f.betas[:-1])
    right = f.coeffs[1:] * f.starts[1:] ** (-f.betas[1:])
    return bool(np.all(right <= left + tol * np.maximum(1.0, left)))


def integral(f: PiecewiseFunction, a: float, b: float) -> float:
    """Exact integral of f over (a, b); requires 0 <= a <= b."""
    if not (0.0 <= a <= b):
        raise ValueError("integration bounds must satisfy 0 <= a <= b")
    if isinstance(f, StepFunction):
        lo = np.maximum(f.starts, a)
        hi = np.minimum(f.ends, b)
        return float(np.dot(f.values, np.maximum(0.0, hi - lo)))
    total = 0.0
    for pa, pb, c, beta in f.pieces():
        lo, hi = max(pa, a), min(pb, b)
        if hi > lo:
            total += _power_mass(c, beta, lo, hi)
    return total


@dataclass(frozen=True, eq=False)
class RunningIntegral:
    """t -> integral of f over (0, t), exact between knots.

    Between consecutive knots the integrand is a single monomial piece
    (possibly zero), so F is evaluated in closed form everywhere.
    """

    knots: np.ndarray  # segment boundaries, knots[0] == 0
    cum: np.ndarray    # F at the knots
    coeffs: np.ndarray  # per-segment integrand coeff (len(knots) - 1)
    betas: np.ndarray

    @classmethod
    def from_function(cls, f: PiecewiseFunction) -> "RunningIntegral":
        if isinstance(f, StepFunction):
            pieces = [(a, b, v, 0.0) for a, b, v in f.pieces()]
        else:
            pieces = f.pieces()
        knots = [0.0]
        coeffs, betas = [], []
        for a, b, c, beta in pieces:
            if a > knots[-1]:
                coeffs.append(0.0)
                betas.append(0.0)
                knots.append(a)
            coeffs.append(c)
            betas.append(beta)
            knots.append(b)
        knots = np.asarray(knots)
        coeffs = np.asarray(coeffs)
        betas = np.asarray(betas)
        seg = _power_mass_vec(coeffs, betas, knots[:-1], knots[1:]) if len(coeffs) else np.empty(0)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        return cls(knots=knots, cum=cum, coeffs=coeffs, betas=betas)

    @property
    def total(self) -> float:
        return float(self.cum[-1])

    def __call__(self, t) -> np.ndarray:
        t = np.maximum(_asarray(t), 0.0)
        if len(self.coeffs) == 0:
            return np.zeros_like(t)
        idx = np.clip(np.searchsorted(self.knots, t, side="right") - 1, 0, len(self.coeffs) - 1)
        tt = np.minimum(t, self.knots[idx + 1])
        part = _power_mass_vec(self.coeffs[idx], self.betas[idx], self.knots[idx], tt)
        return self.cum[idx] + part


@dataclass(frozen=True, eq=False)
class MaximalFunction:
    """Runnning average (1/t) * integral of a non-increasing step over (0, t).

    Stored as pieces A + B/t on (a, b); the final piece extends to
    infinity with A = 0 and B equal to the total mass.
    """

    starts: np.ndarray
    ends: np.ndarray
    A: np.ndarray
    B: np.ndarray

    @property
    def is_zero(self) -> bool:
        return len(self.A) == 0

    def __call__(self, t) -> np.ndarray:
        t = _asarray(t)
        if self.is_zero:
            return np.zeros_like(t)
        idx = np.clip(np.searchsorted(self.starts, t, side="right") - 1, 0, len(self.A) - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(t > 0, self.B[idx] / np.where(t > 0, t, 1.0), 0.0)
        return self.A[idx] + ratio


def maximal_function(f: StepFunction, require_nonincreasing: bool = True) -> MaximalFunction:
    """Exact A + B/t representation of the running average of f*.

    With ``require_nonincreasing`` set, a non-monotone input is rejected;
    otherwise it is rearranged first.
    """
    if not is_nonincreasing(f):
        if require_nonincreasing:
            raise ValueError("input is not non-increasing; rearrange first")
        f = rearrange(f)
    z = np.empty(0, dtype=float)
    if f.is_zero:
        return MaximalFunction(starts=z, ends=z, A=z, B=z)
    t = np.concatenate([[0.0], f.ends])
    cum = np.concatenate([[0.0], np.cumsum(f.values * f.widths)])
    A = np.concatenate([f.values, [0.0]])
    B = np.concatenate([cum[:-1] - f.values * t[:-1], [cum[-1]]])
    starts = np.concatenate([t[:-1], [t[-1]]])
    ends = np.concatenate([t[1:], [np.inf]])
    return MaximalFunction(starts=starts, ends=ends, A=A, B=B)


@dataclass(frozen=True)
class PrecedenceCheck:
    """Outcome of a running-integral comparison; ``exact`` is False when
    interior sample points were needed (monomial operands)."""

    holds: bool
    exact: bool

    def __bool__(self) -> bool:
        return self.holds


def _cheb_points(a: float, b: float, n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    theta = (2 * k - 1) * math.pi / (2 * n)
    return 0.5 * (a + b) + 0.5 * (b - a) * np.cos(theta)


def precedes(
    f: PiecewiseFunction, g: PiecewiseFunction, samples_per_piece: int = 64
) -> PrecedenceCheck:
    """Hardy-Littlewood-Polya precedence: integral of f* over (0,t) never
    exceeds that of g*.

    Step inputs are rearranged internally; monomial inputs must already be
    non-increasing.  For step-step pairs the knot comparison is exact
    (both running integrals are piecewise linear); monomial operands add
    Chebyshev-spaced interior samples and the result is flagged inexact.
    """
    fs = rearrange(f) if isinstance(f, StepFunction) else f
    gs = rearrange(g) if isinstance(g, StepFunction) else g
    for h in (fs, gs):
        if isinstance(h, MonomialFunction) and not is_nonincreasing(h):
            raise ValueError("monomial operands of precedes must be non-increasing")
    Ff = RunningIntegral.from_function(fs)
    Fg = RunningIntegral.from_function(gs)
    exact = isinstance(fs, StepFunction) and isinstance(gs, StepFunction)
    ts = [Ff.knots, Fg.knots]
    if not exact:
        for h in (fs, gs):
            for a, b, *_ in h.pieces():
                ts.append(_cheb_points(a, b, samples_per_piece))
    ts = np.unique(np.concatenate(ts))
    tol = VALUE_TOL * max(1.0, Fg.total)
    holds = bool(np.all(Ff(ts) <= Fg(ts) + tol))
    return PrecedenceCheck(holds=holds, exact=exact)


def discretize(f: MonomialFunction, cells: int) -> StepFunction:
    """Mass-preserving cell averages, ``cells`` equal cells per piece."""
    if cells < 1:
        raise ValueError("cells must be >= 1")
    starts, ends, vals = [], [], []
    for a, b, c, beta in f.pieces():
        bnd = np.linspace(a, b, cells + 1)
        mass = _power_mass_vec(np.full(cells, c), np.full(cells, beta), bnd[:-1], bnd[1:])
        starts.append(bnd[:-1])
        ends.append(bnd[1:])
        vals.append(mass / np.diff(bnd))
    if not starts:
        return StepFunction.zero()
    return StepFunction.make(np.concatenate(starts), np.concatenate(ends), np.concatenate(vals))


def _union_grid(fs: Sequence[StepFunction]) -> tuple[np.ndarray, np.ndarray]:
    """Common refinement grid and per-function values on each cell."""
    bounds = np.unique(np.concatenate([np.concatenate([f.starts, f.ends]) for f in fs if not f.is_zero] or [np.zeros(1)]))
    if len(bounds) < 2:
        return np.zeros(2), np.zeros((len(fs), 1))
    mids = 0.5 * (bounds[:-1] + bounds[1:])
    vals = np.vstack([f(mids) for f in fs])
    return bounds, vals


def step_sum(fs: Sequence[StepFunction], weights: Sequence[float] | None = None) -> StepFunction:
    """Pointwise (weighted) sum of step functions."""
    fs = list(fs)
    if not fs:
        return StepFunction.zero()
    w = np.ones(len(fs)) if weights is None else _asarray(weights)
    bounds, vals = _union_grid(fs)
    return StepFunction.make(bounds[:-1], bounds[1:], w @ vals)


def step_abs_diff(f: StepFunction, g: StepFunction) -> StepFunction:
    """|f - g| as a step function."""
    bounds, vals = _union_grid([f, g])
    return StepFunction.make(bounds[:-1], bounds[1:], np.abs(vals[0] - vals[1]))


def step_mul(f: StepFunction, g: StepFunction) -> StepFunction:
    """Pointwise product of step functions."""
    bounds, vals = _union_grid([f, g])
    return StepFunction.make(bounds[:-1], bounds[1:], vals[0] * vals[1])


def pairing_integral(f: StepFunction, g: PiecewiseFunction) -> float:
    """Exact integral of f * g (f step, g step or monomial)."""
    if f.is_zero or g.is_zero:
        return 0.0
    if isinstance(g, StepFunction):
        bounds, vals = _union_grid([f, g])
        return float(np.dot(vals[0] * vals[1], np.diff(bounds)))
    total = 0.0
    for a, b, c, beta in g.pieces():
        lo = np.maximum(f.starts, a)
        hi = np.minimum(f.ends, b)
        live = hi > lo
        if np.any(live):
            masses = _power_mass_vec(
                np.full(live.sum(), c), np.full(live.sum(), beta), lo[live], hi[live]
            )
            total += float(np.dot(f.values[live], masses))
    return total


def dilate(f: StepFunction, c: float) -> StepFunction:
    """The function t -> f(t / c) for c > 0."""
    if c <= 0:
        raise ValueError("dilation factor must be positive")
    return StepFunction.make(c * f.starts, c * f.ends, f.values)


def equal_functions(f: PiecewiseFunction, g: PiecewiseFunction, tol: float = VALUE_TOL) -> bool:
    """Equality of canonical piece lists with value tolerance."""
    if type(f) is not type(g) or f.npieces != g.npieces:
        return False
    if f.npieces == 0:
        return True
    scale = max(1.0, f.support_end)
    if np.any(np.abs(f.starts - g.starts) > tol * scale):
        return False
    if np.any(np.abs(f.ends - g.ends) > tol * scale):
        return False
    if isinstance(f, StepFunction):
        vs = np.maximum(1.0, np.abs(f.values))
        return bool(np.all(np.abs(f.values - g.values) <= tol * vs))
    cs = np.maximum(1.0, np.abs(f.coeffs))
    return bool(
        np.all(np.abs(f.coeffs - g.coeffs) <= tol * cs)
        and np.all(np.abs(f.betas - g.betas) <= tol)
    )


# ---------------------------------------------------------------------------
# JSON wire format


def function_to_json(f: PiecewiseFunction) -> dict:
    if isinstance(f, StepFunction):
        return {
            "kind": "step",
            "pieces": [
                {"a": float(a), "b": float(b), "value": float(v)} for a, b, v in f.pieces()
            ],
        }
    return {
        "kind": "monomial",
        "pieces": [
            {"a": float(a), "b": float(b), "coeff": float(c), "beta": float(bt)}
            for a, b, c, bt in f.pieces()
        ],
    }


def _json_number(obj: dict, piece_idx: int, key: str) -> float:
    if key not in obj:
        raise FunctionFormatError(f"pieces[{piece_idx}].{key}", "missing field")
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise FunctionFormatError(f"pieces[{piece_idx}].{key}", "must be a number")
    return float(val)


def function_from_json(obj) -> PiecewiseFunction:
    """Parse the shared function format, canonicalizing on load."""
    if not isinstance(obj, dict):
        raise FunctionFormatError("<root>", "expected a JSON object")
    kind = obj.get("kind")
    if kind not in ("step", "monomial"):
        raise FunctionFormatError("kind", "must be 'step' or 'monomial'")
    pieces = obj.get("pieces")
    if not isinstance(pieces, list):
        raise FunctionFormatError("pieces", "must be a list")
    rows = []
    for i, piece in enumerate(pieces):
        if not isinstance(piece, dict):
            raise FunctionFormatError(f"pieces[{i}]", "must be an object")
        a = _json_number(piece, i, "a")
        b = _json_number(piece, i, "b")
        if kind == "step":
            rows.append((a, b, _json_number(piece, i, "value")))
        else:
            rows.append((a, b, _json_number(piece, i, "coeff"), _json_number(piece, i, "beta")))
    try:
        if kind == "step":
            return StepFunction.from_pieces(rows)
        return MonomialFunction.from_pieces(rows)
    except ValueError as exc:
        raise FunctionFormatError("pieces", str(exc)) from exc
