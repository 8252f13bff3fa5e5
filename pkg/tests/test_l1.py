"""Solver tests: spec examples, the vertex-enumeration oracle, invariants."""

import numpy as np
import pytest

from helpers import lad_breakpoint_median, lad_oracle_objective, random_lad_instance

from arlad.exceptions import NonFiniteError, RankDeficientError
from arlad.l1 import (
    L1Problem,
    STATUS_DEGENERATE_TIE,
    STATUS_OPTIMAL,
    solve_weighted_lad,
    weighted_median,
)


class TestWeightedMedian:
    def test_plain_median(self):
        assert weighted_median([1, 2, 10], [1, 1, 1]) == 2.0

    def test_heavy_weight_wins(self):
        # breakpoint enumeration oracle gives 4 for weights (1, 1, 10)
        assert weighted_median([0, 1, 4], [1, 1, 10]) == 4.0
        assert lad_breakpoint_median([0, 1, 4], [1, 1, 10]) == 4.0

    def test_single_point(self):
        assert weighted_median([5], [3]) == 5.0

    def test_lower_median_on_even_tie(self):
        assert weighted_median([1.0, 2.0], [1.0, 1.0]) == 1.0

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            weighted_median([], [])

    def test_nonpositive_weight_raises(self):
        with pytest.raises(ValueError):
            weighted_median([1.0, 2.0], [1.0, 0.0])

    def test_random_against_breakpoint_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            n = int(rng.integers(1, 25))
            v = rng.standard_normal(n)
            w = rng.uniform(0.1, 5.0, n)
            assert weighted_median(v, w) == lad_breakpoint_median(v, w)


class TestSolveExamples:
    def test_intercept_only_is_median(self):
        sol = solve_weighted_lad(L1Problem(np.ones((3, 1)), [1.0, 2.0, 3.0]))
        assert sol.theta[0] == 2.0
        assert sol.objective == 2.0
        assert sol.status == STATUS_OPTIMAL

    def test_weighted_intercept_only(self):
        sol = solve_weighted_lad(
            L1Problem(np.ones((3, 1)), [0.0, 1.0, 4.0], inv_weights=[1, 1, 10])
        )
        assert sol.theta[0] == 4.0
        assert sol.objective == 7.0

    def test_objective_matches_reported_theta(self):
        rng = np.random.default_rng(3)
        X = np.column_stack([np.ones(40), rng.standard_normal(40)])
        y = rng.standard_normal(40)
        prob = L1Problem(X, y, inv_weights=rng.uniform(0.5, 2, 40),
                         multipliers=rng.standard_exponential(40))
        sol = solve_weighted_lad(prob)
        assert sol.objective == pytest.approx(prob.objective_at(sol.theta), rel=1e-12)


class TestOracleEquivalence:
    def test_random_instances_match_vertex_enumeration(self):
        rng = np.random.default_rng(42)
        for trial in range(250):
            X, y, v, m = random_lad_instance(rng, trial)
            sol = solve_weighted_lad(L1Problem(X, y, inv_weights=v, multipliers=m))
            oracle = lad_oracle_objective(X, y, v * m)
            assert sol.objective == pytest.approx(oracle, rel=1e-9, abs=1e-9)


class TestInvariants:
    def test_scale_equivariance_intercept_only(self):
        y = np.array([0.3, -1.2, 2.5, 0.9])
        base = solve_weighted_lad(L1Problem(np.ones((4, 1)), y))
        for c in (2.0, -3.5, 0.25):
            scaled = solve_weighted_lad(L1Problem(np.ones((4, 1)), c * y))
            assert scaled.theta[0] == pytest.approx(c * base.theta[0], rel=1e-14)

    def test_weight_scaling_leaves_argmin_unchanged(self):
        rng = np.random.default_rng(11)
        for trial in range(50):
            X, y, v, m = random_lad_instance(rng, trial + 1)  # avoid zero-mult slice
            base = solve_weighted_lad(L1Problem(X, y, inv_weights=v))
            for c in (2.0, 0.5, 3.7):
                scaled = solve_weighted_lad(L1Problem(X, y, inv_weights=c * v))
                assert np.array_equal(scaled.theta, base.theta)
                assert scaled.objective == pytest.approx(c * base.objective,
                                                         rel=1e-12)

    def test_zero_residual_recovery(self):
        rng = np.random.default_rng(5)
        X = np.column_stack([np.ones(30), rng.standard_normal(30),
                             rng.standard_normal(30)])
        theta0 = np.array([1.5, -0.7, 0.3])
        sol = solve_weighted_lad(L1Problem(X, X @ theta0))
        assert np.allclose(sol.theta, theta0, atol=1e-12)
        assert sol.objective <= 1e-10

    def test_warm_start_agrees_with_cold(self):
        rng = np.random.default_rng(13)
        X = np.column_stack([np.ones(60), rng.standard_normal(60)])
        y = X @ [0.2, 0.7] + rng.laplace(size=60)
        base = solve_weighted_lad(L1Problem(X, y))
        m = rng.standard_exponential(60)
        cold = solve_weighted_lad(L1Problem(X, y, multipliers=m))
        warm = solve_weighted_lad(L1Problem(X, y, multipliers=m),
                                  initial_basis=base.basis)
        assert warm.objective == pytest.approx(cold.objective, rel=1e-12)


class TestErrors:
    def test_rank_deficient_raises(self):
        X = np.column_stack([np.ones(10), np.ones(10)])
        with pytest.raises(RankDeficientError):
            solve_weighted_lad(L1Problem(X, np.arange(10.0)))

    def test_constant_series_design_rank_deficient(self):
        # lagging a constant series duplicates the intercept column
        X = np.column_stack([np.ones(8), np.full(8, 3.0)])
        with pytest.raises(RankDeficientError):
            solve_weighted_lad(L1Problem(X, np.full(8, 3.0)))

    def test_non_finite_raises(self):
        with pytest.raises(NonFiniteError):
            L1Problem(np.ones((3, 1)), [1.0, np.nan, 2.0])
        with pytest.raises(NonFiniteError):
            L1Problem(np.ones((3, 1)), [1.0, 2.0, 3.0], inv_weights=[1, np.inf, 1])

    def test_nonpositive_inv_weights_rejected(self):
        with pytest.raises(ValueError):
            L1Problem(np.ones((3, 1)), [1.0, 2.0, 3.0], inv_weights=[1.0, 0.0, 1.0])

    def test_negative_multipliers_rejected(self):
        with pytest.raises(ValueError):
            L1Problem(np.ones((3, 1)), [1.0, 2.0, 3.0], multipliers=[1.0, -1.0, 1.0])

    def test_too_few_rows_rejected(self):
        with pytest.raises(ValueError):
            L1Problem(np.ones((1, 2)), [1.0])


class TestDegenerate:
    def test_single_active_row_flags_tie(self):
        rng = np.random.default_rng(21)
        X = np.column_stack([np.ones(12), rng.standard_normal(12)])
        y = rng.standard_normal(12)
        m = np.zeros(12)
        m[5] = 1.0
        sol = solve_weighted_lad(L1Problem(X, y, multipliers=m))
        assert sol.status == STATUS_DEGENERATE_TIE
        assert sol.objective == pytest.approx(0.0, abs=1e-12)

    def test_flat_face_flagged(self):
        # even total weight split: minimizers form an interval
        sol = solve_weighted_lad(L1Problem(np.ones((2, 1)), [0.0, 1.0]))
        assert sol.status == STATUS_DEGENERATE_TIE
        assert sol.objective == pytest.approx(1.0)
