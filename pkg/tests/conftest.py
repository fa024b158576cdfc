import numpy as np
import pytest

from psg import Ball, Box, ProblemInstance, SubgradientResult


def sample_feasible(projector, rng, count=1):
    """Random feasible points for a Ball or Box operator, shape (count, dim)."""
    if isinstance(projector, Box):
        return rng.uniform(projector.lower, projector.upper, size=(count, projector.dimension))
    dim = projector.dimension
    directions = rng.standard_normal((count, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = projector.radius * rng.uniform(size=(count, 1)) ** (1.0 / dim)
    return projector.center + directions * radii


def assert_trace_invariants(trace):
    """Invariants every non-restarted trace must satisfy."""
    s = np.array([r.s for r in trace])
    assert np.all(np.diff(s) > 0), "iteration index must be strictly increasing"
    f_best = np.array([r.f_best for r in trace])
    f_x = np.array([r.f_x for r in trace])
    assert np.array_equal(f_best, np.minimum.accumulate(f_x))
    assert all(r.eta > 0 for r in trace)
    big_g = [r.big_G for r in trace if r.big_G is not None]
    assert all(a <= b for a, b in zip(big_g, big_g[1:])), "G must be nondecreasing"


def make_two_slope_problem():
    """f(x) = max(|x| - 1/2, 2|x| - 1) on [-1, 1]: slope 1 near 0, slope 2 outside.

    The subgradient norm grows when an iterate overshoots past |x| = 1/2,
    which makes this the smallest problem whose running norm maximum can
    grow mid-run (useful for exercising the restart trigger). Optimum at 0
    with value -1/2.
    """

    def oracle(x):
        v = abs(float(x[0]))
        value = max(v - 0.5, 2.0 * v - 1.0)
        slope = (1.0 if v <= 0.5 else 2.0) * np.sign(x[0])
        return SubgradientResult(value=value, subgradient=np.array([slope]))

    return ProblemInstance(
        name="two-slope",
        dimension=1,
        oracle=oracle,
        projector=Box(lower=-np.ones(1), upper=np.ones(1)),
        radius_R=1.0,
        lipschitz_L=2.0,
        known_optimum_value=-0.5,
        known_optimum_point=np.zeros(1),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
