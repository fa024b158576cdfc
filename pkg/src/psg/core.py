"""Shared domain types: oracles, problem instances, traces, and tolerances."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np

# Single tolerance pair used by every inequality certificate in the package.
# Relative part absorbs double-precision rounding in sums over t terms; the
# absolute part handles comparisons near zero.
REL_TOL = 1e-9
ABS_TOL = 1e-12


class InvalidParameterError(ValueError):
    """A numeric parameter is outside its admissible range."""


class ShapeError(ValueError):
    """Vector dimensions do not match."""


class NumericError(ArithmeticError):
    """A computation produced a nonfinite value."""


class ZeroSubgradientError(RuntimeError):
    """A step size was requested for a zero subgradient (caller must stop first)."""


class EmptySubdifferentialError(RuntimeError):
    """The oracle has no subgradient at the queried point."""


def ensure_vector(x, dim: Optional[int] = None, name: str = "x") -> np.ndarray:
    """Coerce `x` to a finite 1-D float64 array, checking dimension if given."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ShapeError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{name} contains nonfinite entries")
    return arr


def leq_with_tol(lhs: float, rhs: float, rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    """One-sided comparison lhs <= rhs up to the package tolerance."""
    return lhs <= rhs + rel * max(abs(lhs), abs(rhs)) + abs_


@dataclass(frozen=True)
class SubgradientResult:
    """Objective value and one subgradient at a point.

    `subgradient is None` marks an empty subdifferential: the objective value
    is still valid but no descent direction exists at the point.
    """

    value: float
    subgradient: Optional[np.ndarray]

    @property
    def is_empty(self) -> bool:
        return self.subgradient is None


Oracle = Callable[[np.ndarray], SubgradientResult]


@dataclass(frozen=True)
class ProblemInstance:
    """A constrained nonsmooth convex problem exposed through a first-order oracle.

    Parameters
    ----------
    name : str
        Identifier used in reports and file names.
    dimension : int
        Length of the decision vector.
    oracle : callable
        Maps a point to a :class:`SubgradientResult`.
    projector : object
        Euclidean projection operator onto the feasible set (see
        :mod:`psg.projection`).
    radius_R : float
        Radius of a Euclidean ball, centred at an optimum, containing the
        feasible set. Used by every step-size rule and convergence bound.
        When only a diameter D of the feasible set is known, R = D is a safe
        over-estimate.
    lipschitz_L : float, optional
        Uniform bound on subgradient norms over the feasible set, when one
        exists. Required by the constant and classic step-size rules.
    known_optimum_value, known_optimum_point : optional
        Exact optimum, when analytically available. Certificates that need a
        gap use the value; the per-step descent certificate needs the point.
    optimum_is_reference : bool
        True when `known_optimum_value` is an upper estimate from a long
        reference run rather than the exact optimum. Gap certificates checked
        against such a value are implied by (weaker than) the exact ones.
    """

    name: str
    dimension: int
    oracle: Oracle
    projector: object
    radius_R: float
    lipschitz_L: Optional[float] = None
    known_optimum_value: Optional[float] = None
    known_optimum_point: Optional[np.ndarray] = None
    optimum_is_reference: bool = False

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidParameterError("dimension must be >= 1")
        if not self.radius_R > 0:
            raise InvalidParameterError("radius_R must be positive")
        if self.lipschitz_L is not None and not self.lipschitz_L > 0:
            raise InvalidParameterError("lipschitz_L must be positive when given")

    def value(self, x: np.ndarray) -> float:
        """Objective value at `x` (valid even where the subdifferential is empty)."""
        return float(self.oracle(x).value)


def with_reference_optimum(problem: ProblemInstance, value: float) -> ProblemInstance:
    """Copy of `problem` carrying a reference optimum estimate for certificates."""
    return replace(problem, known_optimum_value=float(value),
                   known_optimum_point=None, optimum_is_reference=True)


class StopReason(str, Enum):
    BUDGET_EXHAUSTED = "budget-exhausted"
    ZERO_SUBGRADIENT = "zero-subgradient"
    EMPTY_SUBDIFFERENTIAL = "empty-subdifferential"


@dataclass(slots=True)
class IterationRecord:
    """One row of a solver trace.

    `big_G` is the running maximum of step-scaled subgradient norms maintained
    by the norm-adaptive step-size family; it is None for policies that do not
    track it. `averaged_values` maps averaging-scheme labels (``"k0"``,
    ``"k-0.5"``, ...) to the objective value at the current weighted mean;
    `bounds` maps bound labels (``"family"``, ``"weak_k0"``, ...) to the bound
    value at this iteration.
    """

    s: int
    eta: float
    g_norm: float
    big_G: Optional[float]
    f_x: float
    f_best: float
    averaged_values: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)


@dataclass
class RunReport:
    """Final summary of a solver run."""

    problem: str
    policy: str
    iterations_run: int
    stop_reason: StopReason
    best_value: float
    best_index: int
    best_point: Optional[np.ndarray]
    averaged_points: dict
    averaged_values: dict
    max_g_norm: float
    bounds: dict
    certificates: dict
    optimum_is_reference: bool = False


def subgradient_inequality_check(oracle: Oracle, x: np.ndarray, z: np.ndarray,
                                 rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    """Check the defining inequality of a subgradient at `x` against a probe `z`.

    For g in the subdifferential at x, convexity requires
    f(z) >= f(x) + g.(z - x). Returns True when the inequality holds up to
    the package tolerance.

    Raises
    ------
    EmptySubdifferentialError
        If the oracle reports an empty subdifferential at `x`.
    """
    res_x = oracle(x)
    if res_x.is_empty:
        raise EmptySubdifferentialError("subdifferential is empty at x")
    lower = res_x.value + float(np.dot(res_x.subgradient, np.asarray(z) - np.asarray(x)))
    f_z = oracle(z).value
    return leq_with_tol(lower, f_z, rel, abs_)


def scheme_label(k: float) -> str:
    """Canonical label for the averaging scheme with weight exponent `k`."""
    return f"k{k:g}"
