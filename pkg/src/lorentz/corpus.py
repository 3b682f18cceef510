"""Seeded random function generators for property trials.

Everything takes an explicit ``numpy.random.Generator`` so trial suites
are reproducible; derive per-trial generators with ``default_rng((seed,
index))`` when running cells independently.
"""

from __future__ import annotations

import numpy as np

from .functions import StepFunction

__all__ = [
    "random_step",
    "random_nonincreasing_step",
    "random_hull_aligned_step",
    "scramble_pieces",
]


def random_step(
    rng: np.random.Generator,
    max_pieces: int = 6,
    support: float = 4.0,
    max_value: float = 2.0,
) -> StepFunction:
    """Random nonnegative step with up to ``max_pieces`` disjoint pieces."""
    n = int(rng.integers(1, max_pieces + 1))
    knots = np.sort(rng.uniform(0.0, support, size=2 * n))
    vals = rng.uniform(0.0, max_value, size=n)
    return StepFunction.make(knots[0::2], knots[1::2], vals)


def random_nonincreasing_step(
    rng: np.random.Generator,
    max_pieces: int = 6,
    support: float = 4.0,
    max_value: float = 2.0,
) -> StepFunction:
    """Random non-increasing step: contiguous from 0, descending values."""
    n = int(rng.integers(1, max_pieces + 1))
    knots = np.sort(rng.uniform(0.0, support, size=n))
    starts = np.concatenate([[0.0], knots[:-1]])
    vals = np.sort(rng.uniform(0.0, max_value, size=n))[::-1]
    return StepFunction.make(starts, knots, vals)


def random_hull_aligned_step(
    rng: np.random.Generator,
    alpha: float,
    max_pieces: int = 4,
    support: float = 4.0,
    top_slope: float = 1.0,
) -> StepFunction:
    """Non-increasing step whose weighted concave hull touches every knot.

    Values are chosen as strictly decreasing hull slopes times the cell
    averages of t**(-alpha), so the level intervals coincide with the
    pieces and the grid discretization of the function is exact at any
    resolution.  Used where certificate budgets matter.
    """
    n = int(rng.integers(2, max_pieces + 1))
    knots = np.sort(rng.uniform(0.15 * support, support, size=n))
    t = np.concatenate([[0.0], knots])
    if alpha == 0.0:
        u = t
    else:
        u = t ** (1.0 - alpha) / (1.0 - alpha)
    # strictly decreasing positive slopes
    factors = rng.uniform(0.4, 0.9, size=n - 1)
    slopes = top_slope * np.concatenate([[1.0], np.cumprod(factors)])
    vals = slopes * np.diff(u) / np.diff(t)
    return StepFunction.make(t[:-1], t[1:], vals)


def scramble_pieces(rng: np.random.Generator, f: StepFunction) -> StepFunction:
    """Equimeasurable scramble: the same (width, value) pairs at shuffled
    disjoint positions with random gaps."""
    if f.is_zero:
        return f
    order = rng.permutation(f.npieces)
    widths = f.widths[order]
    vals = f.values[order]
    gaps = rng.uniform(0.0, 0.5, size=f.npieces)
    starts = np.cumsum(gaps) + np.concatenate([[0.0], np.cumsum(widths)[:-1]])
    return StepFunction.make(starts, starts + widths, vals)
