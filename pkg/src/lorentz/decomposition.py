"""Constructive decomposition certificates and the permutation lemma.

A certificate brackets the decomposition norm of f between the dual norm
(lower bound, exact) and the total quasi-norm of an explicit finite
family f_1, ..., f_N that covers a discretization of f up to a slack
delta (upper bound).  The gap closes linearly in the requested epsilon.

The builder follows the grid construction: subdivide each level interval
into nu equal cells, average f on the cells, average the level function
to get the part profile, and permute the profile's cells row by row
(``matrix_shuffle``) so that the column sums dominate the averages of f.
Row permutations keep every part equimeasurable with profile/N, so all
parts share one quasi-norm, and the permutation lemma guarantees the
pointwise cover with slack below delta.

For s = inf the averaged profile does not converge in the weak norm (the
first cell's average of t**(-1/p) inflates the supremum by the factor
p'), so the profile is clipped to the envelope (lam_1 + eps/2) *
t**(-1/p) and the clipped mass is redeposited inside each interval
proportionally to the remaining envelope headroom.  Prefix domination is
re-checked numerically and the grid doubles until it holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import (
    StepFunction,
    function_to_json,
    integral,
    rearrange,
    step_abs_diff,
    step_sum,
)
from .level import level_function
from .norms import Exponents, NotInLorentzSpace, lorentz_norm

__all__ = [
    "ShuffleInstance",
    "ShuffleResult",
    "DecompositionCertificate",
    "matrix_shuffle",
    "epsilon_decomposition",
    "char_decomposition",
    "triangle_check",
    "minkowski_check",
]


@dataclass(frozen=True, eq=False)
class ShuffleInstance:
    """Targets alpha_1 >= ... >= alpha_nu > 0 and an N x nu positive matrix
    whose column-sum prefixes dominate the alpha prefixes."""

    alphas: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        m = np.asarray(self.eta, dtype=float)
        if a.ndim != 1 or m.ndim != 2 or m.shape[1] != len(a):
            raise ValueError("eta must be an N x len(alphas) matrix")
        if np.any(a <= 0) or np.any(np.diff(a) > 0):
            raise ValueError("alphas must be positive and non-increasing")
        if np.any(m <= 0):
            raise ValueError("matrix entries must be positive")
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "eta", m)

    @property
    def eta_max(self) -> float:
        return float(self.eta.max())


@dataclass(frozen=True, eq=False)
class ShuffleResult:
    """Per-row permutations and resulting column sums.

    ``perms[j, k]`` is the original column whose entry row j now carries
    in column k, so the permuted matrix is ``eta[j, perms[j, k]]``.
    """

    perms: np.ndarray
    beta_tilde: np.ndarray

    def permuted(self, inst: ShuffleInstance) -> np.ndarray:
        return np.take_along_axis(inst.eta, self.perms, axis=1)


def matrix_shuffle(inst: ShuffleInstance, prefix_tol: float = 1e-9) -> ShuffleResult:
    """Permute each row so every column sum reaches its target up to the
    largest matrix entry.

    Walks the inductive exchange argument: while some later column sum
    falls below the current target, swap the current column's entries
    with that column's row by row until the running sum first drops below
    the target, fix the current column, and move right.  Terminates after
    at most nu passes with O(N * nu) swaps.
    """
    alphas = inst.alphas
    eta = inst.eta.copy()
    N, nu = eta.shape
    beta = eta.sum(axis=0)
    scale = max(1.0, float(np.max(np.cumsum(beta))))
    if np.any(np.cumsum(beta) < np.cumsum(alphas) - prefix_tol * scale):
        raise ValueError("prefix domination violated: no admissible shuffle exists")
    perms = np.tile(np.arange(nu), (N, 1))
    for c in range(nu):
        a_c = alphas[c]
        behind = np.nonzero(beta[c + 1 :] < a_c)[0]
        if beta[c] >= a_c and len(behind) == 0:
            break  # identity works for every remaining column
        s = c + 1 + int(behind[0])
        # gamma[m-1] = sum of the first m entries of column s plus the
        # remaining entries of column c; strictly below a_c by row N.
        gamma = beta[c] + np.cumsum(eta[:, s] - eta[:, c])
        m0 = int(np.nonzero(gamma < a_c)[0][0]) + 1
        eta[:m0, [c, s]] = eta[:m0, [s, c]]
        perms[:m0, [c, s]] = perms[:m0, [s, c]]
        new_c = float(gamma[m0 - 1])
        beta[s] = beta[c] + beta[s] - new_c
        beta[c] = new_c
    return ShuffleResult(perms=perms, beta_tilde=eta.sum(axis=0))


@dataclass(frozen=True, eq=False)
class DecompositionCertificate:
    """Two-sided bracket on the decomposition norm with explicit parts.

    ``upper_bound = sum of part norms + delta * ||indicator of (0, b)|| +
    eps_approx`` where ``eps_approx`` is the exact norm of f minus its
    grid discretization; ``lower_bound`` is the dual norm.
    """

    parts: list[StepFunction]
    epsilon: float
    delta: float
    nu: int
    N: int
    eps_approx: float
    lower_bound: float
    upper_bound: float

    def as_json(self) -> dict:
        return {
            "lower": self.lower_bound,
            "upper": self.upper_bound,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "N": self.N,
            "nu": self.nu,
            "parts": [function_to_json(p) for p in self.parts],
        }


def _interval_profile(lam, a, b, nu, e: Exponents, lam_top, epsilon):
    """Cell averages of f (alpha row) and of the level profile (beta row)
    on nu equal cells of (a, b); the s = inf profile is envelope-clipped."""
    bnd = np.linspace(a, b, nu + 1)
    h = (b - a) / nu
    alpha = e.alpha
    if alpha == 0.0:
        prim = bnd
    else:
        prim = bnd ** (1.0 - alpha) / (1.0 - alpha)
    avg = lam * np.diff(prim) / h
    if not e.s_is_inf:
        return bnd, avg
    cap = (lam_top + 0.5 * epsilon) * bnd[1:] ** (-1.0 / e.p)
    base = np.minimum(avg, cap)
    clipped = float(np.sum(avg - base) * h)
    if clipped > 0.0:
        headroom = cap - base
        capacity = float(np.sum(headroom) * h)
        if capacity < clipped:
            return bnd, None  # cannot fit under the envelope at this nu
        base = base + headroom * (clipped / capacity)
    return bnd, base


def epsilon_decomposition(
    f: StepFunction,
    e: Exponents,
    epsilon: float,
    max_cells: int = 2**18,
    max_part_cells: int = 2**23,
) -> DecompositionCertificate:
    """Build a decomposition certificate with gap at most 4 * epsilon.

    Accepts any nonnegative step function; the construction runs on its
    rearrangement (both bounds are rearrangement invariant).  Rejects
    s <= p, where the decomposition norm equals the quasi-norm and the
    certificate would be degenerate.  Raises when the grid refinement
    needed for this epsilon exceeds ``max_cells`` total cells or the
    parts would exceed ``max_part_cells`` values.
    """
    if not e.p < e.s:
        raise ValueError("epsilon_decomposition requires p < s")
    if not epsilon > 0.0:
        raise ValueError("epsilon must be positive")
    fr = rearrange(f)
    if fr.is_zero:
        return DecompositionCertificate([], epsilon, 0.0, 0, 0, 0.0, 0.0, 0.0)

    lr = level_function(fr, e.alpha)
    lower = lorentz_norm(lr.level, e).value
    b_end = fr.support_end
    s_factor = 1.0 if e.s_is_inf else (e.s / e.p) ** (1.0 / e.s)
    delta = 0.99 * epsilon * b_end ** (-1.0 / e.p) * s_factor
    lam_top = float(lr.slopes[0])
    K = len(lr.slopes)

    nu = 4
    while True:
        if nu * K > max_cells:
            raise ValueError(
                "grid refinement exceeds max_cells; increase epsilon or max_cells"
            )
        grids, betas, alphas_cells = [], [], []
        feasible = True
        for (a, b), lam in zip(lr.intervals, lr.slopes):
            bnd, beta_row = _interval_profile(lam, a, b, nu, e, lam_top, epsilon)
            if beta_row is None:
                feasible = False
                break
            grids.append(bnd)
            betas.append(beta_row)
            h = (b - a) / nu
            masses = np.array([integral(fr, lo, hi) for lo, hi in zip(bnd[:-1], bnd[1:])])
            # true cell averages of a non-increasing f are non-increasing;
            # remove the one-ulp wobble of the overlap arithmetic
            alphas_cells.append(np.minimum.accumulate(masses / h))
        if feasible:
            # prefix domination per interval (exact for cell averages of the
            # level profile; the clipped s = inf profile needs the check)
            for al, be in zip(alphas_cells, betas):
                tol = 1e-9 * max(1.0, float(np.sum(be)))
                if np.any(np.cumsum(al) > np.cumsum(be) + tol):
                    feasible = False
                    break
        if feasible:
            g_nu = StepFunction.make(
                np.concatenate([g[:-1] for g in grids]),
                np.concatenate([g[1:] for g in grids]),
                np.concatenate(alphas_cells),
            )
            psi_nu = StepFunction.make(
                np.concatenate([g[:-1] for g in grids]),
                np.concatenate([g[1:] for g in grids]),
                np.concatenate(betas),
            )
            eps_approx = lorentz_norm(step_abs_diff(fr, g_nu), e).value
            psi_norm = lorentz_norm(psi_nu, e).value
            if eps_approx < epsilon and psi_norm <= lower + epsilon:
                break
        nu *= 2

    beta_max = max(float(np.max(be)) for be in betas)
    N = int(math.floor(beta_max / delta)) + 1
    if N * nu * K > max_part_cells:
        raise ValueError(
            "certificate would exceed max_part_cells; increase epsilon or the cap"
        )

    # Shuffle each interval's constant-row matrix and collect part values.
    part_vals = []
    for al, be in zip(alphas_cells, betas):
        inst = ShuffleInstance(alphas=al, eta=np.tile(be / N, (N, 1)))
        res = matrix_shuffle(inst)
        part_vals.append((be / N)[res.perms])
    part_vals = np.concatenate(part_vals, axis=1)  # N x (K * nu)
    starts = np.concatenate([g[:-1] for g in grids])
    ends = np.concatenate([g[1:] for g in grids])

    parts = [StepFunction.make(starts, ends, part_vals[j]) for j in range(N)]
    part_norm_sum = sum(lorentz_norm(pj, e).value for pj in parts)
    chi_norm = (1.0 if e.s_is_inf else (e.p / e.s) ** (1.0 / e.s)) * b_end ** (1.0 / e.p)
    upper = part_norm_sum + delta * chi_norm + eps_approx
    return DecompositionCertificate(
        parts=parts,
        epsilon=epsilon,
        delta=delta,
        nu=nu,
        N=N,
        eps_approx=eps_approx,
        lower_bound=lower,
        upper_bound=upper,
    )


def _periodized_weight_integral(x: np.ndarray, alpha: float) -> np.ndarray:
    """Integral from 0 to x of the 1-periodized t**(1-alpha) primitive.

    The weight (1-alpha) * t**(-alpha) on (0, 1], repeated with period 1,
    has primitive floor(t) + frac(t)**(1-alpha); this returns the second
    primitive needed for exact window-average cell values.
    """
    n = np.floor(x)
    r = x - n
    return n * (n - 1) / 2 + n / (2.0 - alpha) + n * r + r ** (2.0 - alpha) / (2.0 - alpha)


def char_decomposition(e: Exponents, N: int, cells: int):
    """Equimeasurable windowed-average split of the unit indicator.

    Averages the periodized weight (1-alpha) * t**(-alpha) over N sliding
    windows; the N restrictions to [0, 1] sum to the indicator exactly
    and are pairwise equimeasurable.  Each part is materialized as exact
    cell averages on a uniform grid (``cells`` must be a multiple of N so
    the parts stay exactly equimeasurable after discretization).  Returns
    ``(parts, sum_of_norms)``; the sum approaches the dual norm of the
    indicator as N and cells grow.
    """
    if not (e.p < e.s and not e.s_is_inf):
        raise ValueError("char_decomposition requires p < s < inf")
    if N < 1:
        raise ValueError("N must be >= 1")
    if cells < N or cells % N != 0:
        raise ValueError("cells must be a positive multiple of N")
    alpha = e.alpha
    grid = np.linspace(0.0, 1.0, cells + 1)
    parts = []
    total = 0.0
    for k in range(1, N + 1):
        hi = _periodized_weight_integral(grid + k / N, alpha)
        lo = _periodized_weight_integral(grid + (k - 1) / N, alpha)
        window = hi - lo
        vals = np.diff(window) * cells
        part = StepFunction.make(grid[:-1], grid[1:], vals)
        parts.append(part)
        total += lorentz_norm(part, e).value
    return parts, total


def triangle_check(fs, e: Exponents) -> tuple[float, float, float]:
    """lhs = norm of the sum, rhs = c_ps * sum of norms, plus their ratio."""
    if not e.p < e.s:
        raise ValueError("triangle_check requires p < s")
    fs = list(fs)
    lhs = lorentz_norm(step_sum(fs), e).value
    rhs = e.c_ps * sum(lorentz_norm(g, e).value for g in fs)
    ratio = lhs / rhs if rhs > 0 else 0.0
    return lhs, rhs, ratio


def minkowski_check(fs, weights, e: Exponents) -> tuple[float, float]:
    """Discrete weighted mixture against c_ps times the weighted norms."""
    fs = list(fs)
    w = np.asarray(weights, dtype=float)
    if len(w) != len(fs) or np.any(w <= 0):
        raise ValueError("weights must be positive, one per function")
    F = step_sum(fs, weights=w)
    lhs = lorentz_norm(F, e).value
    rhs = e.c_ps * float(sum(wy * lorentz_norm(g, e).value for wy, g in zip(w, fs)))
    return lhs, rhs
