import numpy as np
import pytest
from numpy.testing import assert_allclose

from psg import Ball, Box, InvalidParameterError, ShapeError, project
from psg.projection import feasibility_residual

from conftest import sample_feasible


class TestBall:
    def test_outside_point_scales_to_boundary(self):
        ball = Ball(center=np.zeros(2), radius=1.0)
        assert_allclose(project(ball, np.array([3.0, 4.0])), [0.6, 0.8])

    def test_inside_point_unchanged(self):
        ball = Ball(center=np.zeros(3), radius=50.0)
        y = np.array([1.0, -2.0, 3.0])
        assert np.array_equal(project(ball, y), y)

    def test_zero_radius_returns_center(self):
        ball = Ball(center=np.array([2.0, -1.0]), radius=0.0)
        assert_allclose(project(ball, np.array([2.0, -1.0])), [2.0, -1.0])
        assert_allclose(project(ball, np.array([5.0, -1.0])), [2.0, -1.0])


class TestBox:
    def test_clamp(self):
        box = Box(lower=np.zeros(1), upper=np.ones(1))
        assert_allclose(project(box, np.array([-0.3])), [0.0])
        assert_allclose(project(box, np.array([1.7])), [1.0])
        assert_allclose(project(box, np.array([0.4])), [0.4])

    def test_invalid_bounds(self):
        with pytest.raises(InvalidParameterError):
            Box(lower=np.ones(2), upper=np.zeros(2))


def test_dimension_mismatch():
    with pytest.raises(ShapeError):
        project(Ball(center=np.zeros(2), radius=1.0), np.array([1.0, 2.0, 3.0]))


@pytest.mark.parametrize("op", [
    Ball(center=np.array([0.5, -1.0, 2.0]), radius=2.5),
    Box(lower=-np.ones(3), upper=np.array([0.5, 2.0, 1.0])),
], ids=["ball", "box"])
class TestProjectionProperties:
    def test_idempotent(self, op, rng):
        for _ in range(200):
            y = 10 * rng.standard_normal(3)
            once = project(op, y)
            assert_allclose(project(op, once), once, rtol=0, atol=1e-12)

    def test_distance_optimal_vs_sampling(self, op, rng):
        feasible = sample_feasible(op, rng, 1000)
        for _ in range(20):
            y = 10 * rng.standard_normal(3)
            p = project(op, y)
            dist = np.linalg.norm(p - y)
            assert np.all(np.linalg.norm(feasible - y, axis=1) >= dist - 1e-12)

    def test_nonexpansive_toward_feasible_points(self, op, rng):
        # the inequality behind the per-step descent certificate
        feasible = sample_feasible(op, rng, 200)
        for _ in range(50):
            y = 10 * rng.standard_normal(3)
            p = project(op, y)
            for x in feasible[:20]:
                assert np.linalg.norm(p - x) <= np.linalg.norm(y - x) + 1e-12

    def test_residual_zero_on_feasible(self, op, rng):
        for x in sample_feasible(op, rng, 100):
            assert feasibility_residual(op, x) <= 1e-12
