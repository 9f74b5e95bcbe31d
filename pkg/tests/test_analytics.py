"""Tests for run-set summaries and the Friedman/Nemenyi ranking.

Oracles:
- hand-computed 4x3 and tied 2x3 Friedman examples (worked out by hand:
  mean ranks, chi-squared from the rank formula directly);
- scipy.stats.friedmanchisquare on tie-free data (the classic statistic
  coincides with the rank-mean formula when no ties occur);
- rank-sum conservation, which must hold for any score matrix.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from pwrga.analytics import (
    NEMENYI_Q_05,
    RankSummary,
    friedman_nemenyi,
    overhead_report,
    summarize,
)
from pwrga.errors import (
    ConfigurationError,
    IncompleteDesignError,
    InsufficientDataError,
)


class TestSummarize:
    def test_worked_example(self):
        median, mean, std, iqr = summarize([1, 2, 3, 4])
        assert median == 2.5
        assert mean == 2.5
        assert std == pytest.approx(1.2909944487358056, abs=1e-15)
        assert iqr == pytest.approx(1.5, abs=1e-15)

    def test_constant_values(self):
        median, mean, std, iqr = summarize([7.0] * 9)
        assert (median, mean, std, iqr) == (7.0, 7.0, 0.0, 0.0)

    def test_order_invariance(self):
        rng = np.random.default_rng(0)
        values = rng.normal(size=21)
        assert summarize(values) == summarize(values[::-1])
        assert summarize(values) == summarize(rng.permutation(values))

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            summarize([1.0])
        with pytest.raises(InsufficientDataError):
            summarize([])


class TestFriedman:
    def test_hand_example_no_ties(self):
        matrix = [[1, 2, 3], [2, 1, 3], [1.5, 2.5, 3.5], [3, 2, 1]]
        out = friedman_nemenyi(matrix)
        assert out.mean_ranks == pytest.approx([1.75, 1.75, 2.5], abs=0)
        assert out.friedman_statistic == pytest.approx(1.5, abs=1e-10)
        assert out.nemenyi_cd == pytest.approx(2.343 * math.sqrt(0.5), abs=1e-12)
        assert out.n_tasks == 4

    def test_hand_example_with_ties(self):
        out = friedman_nemenyi([[1, 1, 2], [1, 2, 2]])
        assert out.mean_ranks == pytest.approx([1.25, 2.0, 2.75], abs=0)
        assert out.friedman_statistic == pytest.approx(2.25, abs=1e-10)

    def test_dominant_method_gets_rank_one(self):
        matrix = np.array([[0.1, 5, 9], [0.2, 7, 3], [0.3, 4, 4]])
        out = friedman_nemenyi(matrix)
        assert out.mean_ranks[0] == 1.0

    def test_all_tied_gives_zero_statistic(self):
        out = friedman_nemenyi(np.ones((5, 4)))
        assert out.friedman_statistic == pytest.approx(0.0, abs=1e-12)

    def test_max_direction_flips_ranks(self):
        matrix = [[1, 2, 3], [1, 2, 3]]
        low = friedman_nemenyi(matrix, directions=["min", "min"])
        high = friedman_nemenyi(matrix, directions=["max", "max"])
        assert np.array_equal(low.mean_ranks, [1, 2, 3])
        assert np.array_equal(high.mean_ranks, [3, 2, 1])

    def test_monotone_rescale_invariance(self):
        rng = np.random.default_rng(1)
        matrix = rng.normal(size=(6, 5))
        base = friedman_nemenyi(matrix)
        rescaled = friedman_nemenyi(np.exp(matrix) * 3 + 1)
        assert base.mean_ranks == pytest.approx(rescaled.mean_ranks, abs=0)
        assert base.friedman_statistic == pytest.approx(
            rescaled.friedman_statistic, abs=1e-12
        )

    def test_scipy_oracle_on_tie_free_data(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            matrix = rng.normal(size=(8, 4))
            ours = friedman_nemenyi(matrix).friedman_statistic
            scipy_stat, _ = stats.friedmanchisquare(*matrix.T)
            assert ours == pytest.approx(scipy_stat, rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(2, 8),
        k=st.integers(2, 8),
        seed=st.integers(0, 10_000),
        quantize=st.booleans(),
    )
    def test_rank_sums_conserved(self, n, k, seed, quantize):
        rng = np.random.default_rng(seed)
        matrix = rng.normal(size=(n, k))
        if quantize:  # force ties
            matrix = np.round(matrix)
        out = friedman_nemenyi(matrix)
        assert float(out.mean_ranks.sum()) == pytest.approx(
            k * (k + 1) / 2, abs=1e-9
        )
        assert np.all(out.mean_ranks >= 1.0)
        assert np.all(out.mean_ranks <= k)

    def test_missing_cells_listed(self):
        matrix = np.ones((3, 3))
        matrix[1, 2] = np.nan
        with pytest.raises(IncompleteDesignError, match=r"task 1, method 2"):
            friedman_nemenyi(matrix)

    def test_too_small_designs(self):
        with pytest.raises(InsufficientDataError):
            friedman_nemenyi([[1, 2, 3]])
        with pytest.raises(InsufficientDataError):
            friedman_nemenyi([[1], [2]])

    def test_quantiles_cover_k_2_to_10(self):
        assert sorted(NEMENYI_Q_05) == list(range(2, 11))
        values = [NEMENYI_Q_05[k] for k in range(2, 11)]
        assert values == sorted(values)
        with pytest.raises(ConfigurationError):
            friedman_nemenyi(np.random.default_rng(3).normal(size=(4, 11)))

    def test_rank_summary_validation(self):
        with pytest.raises(ConfigurationError):
            RankSummary(["a", "b"], [1.0, 1.0], 0.0, 0.0, 2)  # sum != 3
        with pytest.raises(ConfigurationError):
            RankSummary(["a", "b"], [0.5, 2.5], 0.0, 0.0, 2)  # below 1


class TestOverhead:
    def test_baseline_against_itself(self):
        out = overhead_report({"arith": [2.0, 2.0, 2.0]}, baseline="arith")
        assert out == {"arith": 1.0}

    def test_doubled_cost_reports_two(self):
        wall = {"arith": [1.0, 1.1, 0.9, 1.0], "slow": [2.0, 2.2, 1.8, 2.0]}
        out = overhead_report(wall, baseline="arith")
        assert out["slow"] == pytest.approx(2.0, abs=1e-12)

    def test_ratios_positive(self):
        rng = np.random.default_rng(4)
        wall = {name: rng.uniform(0.5, 3.0, 50) for name in ("arith", "a", "b")}
        out = overhead_report(wall, baseline="arith")
        assert all(v > 0 for v in out.values())

    def test_missing_baseline(self):
        with pytest.raises(ConfigurationError):
            overhead_report({"pwr3": [1.0]}, baseline="arith")
