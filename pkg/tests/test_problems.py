import numpy as np
import pytest
from numpy.testing import assert_allclose

from psg import (
    InvalidParameterError,
    LassoInstance,
    generate_lasso,
    load_lasso_csv,
    make_abs_problem,
    make_lasso,
    make_sqrt_example,
    reference_optimum_value,
    save_lasso_csv,
)

from conftest import sample_feasible


class TestSqrtExample:
    def test_interior_oracle(self):
        oracle = make_sqrt_example().oracle
        res = oracle(np.array([0.25]))
        assert res.value == -0.5
        assert_allclose(res.subgradient, [-1.0])

    def test_at_optimum(self):
        res = make_sqrt_example().oracle(np.array([1.0]))
        assert res.value == -1.0
        assert_allclose(res.subgradient, [-0.5])

    def test_empty_subdifferential_at_zero(self):
        res = make_sqrt_example().oracle(np.array([0.0]))
        assert res.is_empty
        assert res.value == 0.0

    def test_declares_no_lipschitz_bound(self):
        problem = make_sqrt_example()
        assert problem.lipschitz_L is None
        assert problem.known_optimum_value == -1.0

    def test_subgradient_norm_grows_without_bound(self):
        # |g(10^-2k)| = 10^k / 2: no uniform norm bound exists on (0, 1]
        oracle = make_sqrt_example().oracle
        for k in range(1, 7):
            g = oracle(np.array([10.0 ** (-2 * k)])).subgradient
            assert abs(g[0]) == pytest.approx(10.0 ** k / 2.0, rel=1e-12)


class TestAbsProblem:
    def test_oracle_values(self):
        problem = make_abs_problem(1)
        res = problem.oracle(np.array([0.5]))
        assert res.value == 0.5
        assert_allclose(res.subgradient, [1.0])

    def test_minimal_norm_choice_at_zero(self):
        res = make_abs_problem(1).oracle(np.array([0.0]))
        assert res.value == 0.0
        assert_allclose(res.subgradient, [0.0])

    def test_corner(self):
        res = make_abs_problem(2).oracle(np.array([-1.0, 1.0]))
        assert res.value == 2.0
        assert_allclose(res.subgradient, [-1.0, 1.0])

    def test_metadata(self):
        problem = make_abs_problem(9)
        assert problem.lipschitz_L == 3.0
        assert problem.radius_R == 3.0
        assert problem.known_optimum_value == 0.0

    def test_rejects_bad_dim(self):
        with pytest.raises(InvalidParameterError):
            make_abs_problem(0)


class TestLasso:
    def test_oracle_at_origin(self):
        instance = generate_lasso(seed=3, n=10, m=6)
        problem = instance.to_problem()
        res = problem.oracle(np.zeros(10))
        assert res.value == pytest.approx(float(instance.y @ instance.y), rel=1e-15)
        assert_allclose(res.subgradient, -2.0 * instance.phi.T @ instance.y,
                        rtol=1e-15, atol=0)

    def test_scalar_least_squares_hand_value(self):
        # lam -> 0 limit checked with the smallest admissible lam: with
        # phi = (1), y = (2), x = 1 the residual part gives value 1, g = -2
        instance = LassoInstance(phi=np.array([[1.0]]), y=np.array([2.0]),
                                 lam=1e-12, radius=50.0, seed=0)
        res = instance.to_problem().oracle(np.array([1.0]))
        assert res.value == pytest.approx(1.0, abs=1e-11)
        assert res.subgradient[0] == pytest.approx(-2.0, abs=1e-11)

    def test_same_seed_bit_identical(self):
        a = generate_lasso(seed=11, n=20, m=12)
        b = generate_lasso(seed=11, n=20, m=12)
        assert np.array_equal(a.phi, b.phi)
        assert np.array_equal(a.y, b.y)

    def test_different_seeds_differ(self):
        a = generate_lasso(seed=1, n=20, m=12)
        b = generate_lasso(seed=2, n=20, m=12)
        assert not np.array_equal(a.phi, b.phi)

    def test_objective_midpoint_convexity(self, rng):
        problem = make_lasso(seed=5, n=16, m=10)
        points = sample_feasible(problem.projector, rng, 400)
        for i in range(200):
            x, z = points[2 * i], points[2 * i + 1]
            mid = problem.value((x + z) / 2.0)
            avg = 0.5 * (problem.value(x) + problem.value(z))
            assert mid <= avg * (1 + 1e-9) + 1e-12

    def test_no_lipschitz_or_optimum_declared(self):
        problem = make_lasso(seed=1, n=8, m=6)
        assert problem.lipschitz_L is None
        assert problem.known_optimum_value is None

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            generate_lasso(seed=1, n=0, m=4)
        with pytest.raises(InvalidParameterError):
            LassoInstance(phi=np.ones((2, 2)), y=np.ones(3), lam=1.0, radius=1.0, seed=0)
        with pytest.raises(InvalidParameterError):
            LassoInstance(phi=np.ones((2, 2)), y=np.ones(2), lam=0.0, radius=1.0, seed=0)

    def test_sparse_ground_truth_size(self):
        instance = generate_lasso(seed=7, n=64, m=10)
        # ceil(64 / 16) = 4 nonzero +-1 entries in the planted signal feed y
        assert instance.phi.shape == (10, 64)
        assert instance.y.shape == (10,)


class TestLassoCsvRoundTrip:
    def test_round_trip_is_exact(self, tmp_path):
        instance = generate_lasso(seed=42, n=9, m=7, radius=12.5, lam=3.25)
        path = tmp_path / "instance.csv"
        save_lasso_csv(instance, path)
        loaded = load_lasso_csv(path)
        assert np.array_equal(loaded.phi, instance.phi)
        assert np.array_equal(loaded.y, instance.y)
        assert loaded.lam == instance.lam
        assert loaded.radius == instance.radius
        assert loaded.seed == instance.seed

    def test_rejects_foreign_files(self, tmp_path):
        path = tmp_path / "not_lasso.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(InvalidParameterError):
            load_lasso_csv(path)


class TestReferenceOptimum:
    def test_returns_upper_estimate_that_improves_with_budget(self):
        problem = make_lasso(seed=2, n=12, m=8, radius=10.0, lam=1.0)
        short = reference_optimum_value(problem, 200)
        long = reference_optimum_value(problem, 2000)
        assert np.isfinite(short) and np.isfinite(long)
        assert long <= short
        assert long <= problem.value(np.zeros(12))

    def test_exact_on_a_solved_problem(self):
        # the origin is optimal, so the reference run stops immediately
        assert reference_optimum_value(make_abs_problem(3), 50) == 0.0
