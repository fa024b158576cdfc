"""Convergence-rate expressions used as runtime certificates.

Each evaluator returns the right-hand side of a provable bound on the
optimality gap of an averaged (or best) iterate after t iterations:

* ``constant_bound``:  R L / sqrt(t), uniform mean, constant step tuned to t;
* ``classic_bound``:   3 R L / (2 sqrt(t)), uniform mean, classic step;
* ``nesterov_bound``:  (2 R L + R L ln t) / (4 (sqrt(t+1) - 1)),
  step-weighted mean, norm-normalized step (sub-optimal rate);
* ``family_bound``:    (3 R / (2 sqrt(t))) * max_{s<=t} ||g_s||, uniform mean,
  norm-adaptive family step (no Lipschitz constant involved);
* ``weak_ergodic_bound``: the k-weighted-mean generalization
  (t^((k+1)/2) + sum_{s<=t} s^((k-1)/2)) / (2 sum_{s<=t} s^(k/2))
  * R * max_{s<=t} ||g_s||, valid for the family step and any k >= -1.

A certificate passes when the observed gap does not exceed the bound up to
the package tolerance.
"""

from __future__ import annotations

import math

from .core import ABS_TOL, REL_TOL, InvalidParameterError

# Ascending accumulation keeps relative error acceptable for moderate t;
# above this many terms the sums switch to compensated (Kahan) accumulation.
_KAHAN_THRESHOLD = 100_000


def constant_bound(R: float, L: float, t: int) -> float:
    """Gap bound R*L/sqrt(t) for the uniform mean under the constant step."""
    return R * L / t ** 0.5

def classic_bound(R: float, L: float, t: int) -> float:
    """Gap bound 1.5*R*L/sqrt(t) for the uniform mean under the classic step."""
    return 1.5 * R * L / t ** 0.5

def nesterov_bound(R: float, L: float, t: int) -> float:
    """Gap bound (2RL + RL*ln t) / (4(sqrt(t+1)-1)) for the step-weighted mean."""
    return (2.0 * R * L + R * L * math.log(t)) / (4.0 * ((t + 1.0) ** 0.5 - 1.0))

def family_bound(R: float, t: int, max_g_norm: float) -> float:
    """Gap bound 1.5*R*max||g||/sqrt(t) for the uniform mean under the family step.

    Coincides with :func:`classic_bound` when ``max_g_norm`` equals the
    Lipschitz constant.
    """
    return 1.5 * R * max_g_norm / t ** 0.5


def _power_sum(t: int, exponent: float) -> float:
    """sum_{s=1..t} s**exponent, accumulated in ascending order."""
    if t <= _KAHAN_THRESHOLD:
        total = 0.0
        for s in range(1, t + 1):
            total += s ** exponent
        return total
    total = 0.0
    comp = 0.0
    for s in range(1, t + 1):
        y = s ** exponent - comp
        full = total + y
        comp = (full - total) - y
        total = full
    return total


def weak_ergodic_bound(R: float, t: int, k: float, max_g_norm: float) -> float:
    """Gap bound for the k-weighted mean under the norm-adaptive family step."""
    if k < -1:
        raise InvalidParameterError(f"k must be >= -1, got {k!r}")
    if not t >= 1:
        raise InvalidParameterError(f"t must be >= 1, got {t!r}")
    numerator = t ** (0.5 * (k + 1.0)) + _power_sum(t, 0.5 * (k - 1.0))
    denominator = 2.0 * _power_sum(t, 0.5 * k)
    return numerator / denominator * R * max_g_norm


class WeakBoundSums:
    """Streaming evaluation of :func:`weak_ergodic_bound` along a run.

    Maintains the two power sums incrementally; for t within the plain
    accumulation regime the result is bit-identical to the direct evaluation.
    """

    __slots__ = ("k", "t", "_sum_low", "_sum_mid")

    def __init__(self, k: float):
        if k < -1:
            raise InvalidParameterError(f"k must be >= -1, got {k!r}")
        self.k = float(k)
        self.t = 0
        self._sum_low = 0.0   # sum of s^((k-1)/2)
        self._sum_mid = 0.0   # sum of s^(k/2)

    def push(self) -> None:
        self.t += 1
        self._sum_low += self.t ** (0.5 * (self.k - 1.0))
        self._sum_mid += self.t ** (0.5 * self.k)

    def bound(self, R: float, max_g_norm: float) -> float:
        if self.t == 0:
            raise InvalidParameterError("no iterations pushed yet")
        numerator = self.t ** (0.5 * (self.k + 1.0)) + self._sum_low
        return numerator / (2.0 * self._sum_mid) * R * max_g_norm

    def reset(self) -> None:
        self.t = 0
        self._sum_low = 0.0
        self._sum_mid = 0.0


def check_certificate(gap: float, bound: float) -> bool:
    """Pass iff gap <= bound * (1 + 1e-9) + 1e-12 (both finite)."""
    if not (math.isfinite(gap) and math.isfinite(bound)):
        return False
    return gap <= bound * (1.0 + REL_TOL) + ABS_TOL


def weak_label(k: float) -> str:
    """Canonical bound label for the k-weighted-mean certificate."""
    if k < -1:
        raise InvalidParameterError(f"k must be >= -1, got {k!r}")
    return f"weak_k{k:g}"


# Fixed labels for the remaining bounds/certificates.
CONSTANT = "constant"
CLASSIC = "classic"
NESTEROV = "nesterov"
FAMILY = "family"
PER_STEP = "per_step"


def monotone_label(k: float) -> str:
    """Label for the weight/step monotonicity invariant at exponent `k`."""
    return f"monotone_k{k:g}"
