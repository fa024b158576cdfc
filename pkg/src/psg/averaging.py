"""Weighted iterate averaging with O(1) memory, plus best-iterate tracking.

The weight put on iterate s is controlled by a single exponent k >= -1:

    w_s = eta_s^(-k)   for -1 <= k <= 0,
    w_s = s^(k/2)      for k > 0.

k = 0 gives the plain running mean, k = -1 the step-size-weighted mean, and
growing k shifts weight toward recent iterates (approaching last-iterate
behaviour as k grows). Averages are maintained as streaming convex
combinations, so no iterate history is stored and the accumulated weight
never overflows the totals that a direct sum of s^(k/2) terms would reach.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import InvalidParameterError, NumericError


def weight(k: float, s: int, eta_s: float) -> float:
    """Averaging weight for iterate `s` with step `eta_s` under exponent `k`."""
    if k < -1:
        raise InvalidParameterError(f"k must be >= -1, got {k!r}")
    if not s >= 1:
        raise InvalidParameterError(f"s must be >= 1, got {s!r}")
    if not eta_s > 0:
        raise InvalidParameterError(f"eta_s must be positive, got {eta_s!r}")
    if k <= 0:
        return eta_s ** (-k)
    return s ** (0.5 * k)


@dataclass(frozen=True)
class WeightRule:
    """Validated weight exponent; callable as rule(s, eta_s)."""

    k: float

    def __post_init__(self):
        if self.k < -1:
            raise InvalidParameterError(f"k must be >= -1, got {self.k!r}")

    def __call__(self, s: int, eta_s: float) -> float:
        return weight(self.k, s, eta_s)


class StreamingAverage:
    """Weighted mean of a stream of points, updated in place.

    The mean is maintained as mean <- mean + (w / W')(x - mean) with
    W' = W + w, which equals the direct quotient sum(w_s x_s) / sum(w_s)
    and keeps the mean a convex combination of the points fed so far.
    """

    __slots__ = ("mean", "total_weight", "count")

    def __init__(self):
        self.mean: Optional[np.ndarray] = None
        self.total_weight = 0.0
        self.count = 0

    def update(self, w: float, x: np.ndarray) -> "StreamingAverage":
        if not (np.isfinite(w) and w > 0):
            raise NumericError(f"weight must be positive and finite, got {w!r}")
        if not np.all(np.isfinite(x)):
            raise NumericError("point contains nonfinite entries")
        self.count += 1
        if self.mean is None:
            self.mean = np.array(x, dtype=np.float64)
            self.total_weight = float(w)
        else:
            self.total_weight += w
            self.mean += (w / self.total_weight) * (x - self.mean)
        return self


class BestIterate:
    """Smallest objective value seen so far; ties keep the earliest index."""

    __slots__ = ("best_value", "best_point", "best_index")

    def __init__(self):
        self.best_value = float("inf")
        self.best_point: Optional[np.ndarray] = None
        self.best_index = 0

    def update(self, s: int, f_x: float, x: np.ndarray) -> "BestIterate":
        if f_x < self.best_value:
            self.best_value = float(f_x)
            self.best_point = np.array(x, dtype=np.float64)
            self.best_index = int(s)
        return self


def update_average(acc: StreamingAverage, w: float, x: np.ndarray) -> StreamingAverage:
    """Feed one weighted point into `acc` (mutates and returns it)."""
    return acc.update(w, x)


def update_best(acc: BestIterate, s: int, f_x: float, x: np.ndarray) -> BestIterate:
    """Offer iterate `s` to the best-iterate tracker (mutates and returns it)."""
    return acc.update(s, f_x, x)
