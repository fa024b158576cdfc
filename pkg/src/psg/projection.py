"""Euclidean projection operators onto ball and box feasible sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidParameterError, ShapeError, ensure_vector


@dataclass(frozen=True)
class Ball:
    """Euclidean ball {x : ||x - center|| <= radius}."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", ensure_vector(self.center, name="center"))
        if self.radius < 0:
            raise InvalidParameterError("radius must be nonnegative")

    @property
    def dimension(self) -> int:
        return self.center.shape[0]

    def project(self, y: np.ndarray) -> np.ndarray:
        d = y - self.center
        norm = float(np.linalg.norm(d))
        if norm <= self.radius:
            return np.array(y, dtype=np.float64)
        # norm > 0 here (radius >= 0), so the nearest point is unique
        return self.center + d * (self.radius / norm)

    def contains(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        return float(np.linalg.norm(x - self.center)) <= self.radius * (1 + tol) + tol


@dataclass(frozen=True)
class Box:
    """Axis-aligned box {x : lower <= x <= upper} (componentwise)."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = ensure_vector(self.lower, name="lower")
        hi = ensure_vector(self.upper, dim=lo.shape[0], name="upper")
        if np.any(lo > hi):
            raise InvalidParameterError("lower must be <= upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    def project(self, y: np.ndarray) -> np.ndarray:
        return np.clip(y, self.lower, self.upper)

    def contains(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))


def project(op, y) -> np.ndarray:
    """Project `y` onto the feasible set described by `op`.

    Returns the unique Euclidean-nearest feasible point. The operation is
    idempotent and nonexpansive toward every feasible point:
    ||project(y) - x|| <= ||y - x|| whenever x is feasible.
    """
    y = ensure_vector(y, name="y")
    if y.shape[0] != op.dimension:
        raise ShapeError(f"point has dimension {y.shape[0]}, operator expects {op.dimension}")
    return op.project(y)


def feasibility_residual(op, x) -> float:
    """Distance from `x` to the feasible set (0 for feasible points)."""
    return float(np.linalg.norm(project(op, x) - np.asarray(x, dtype=np.float64)))
