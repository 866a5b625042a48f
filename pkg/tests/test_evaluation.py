import numpy as np
import pytest

from dpkm import (
    ConfigError,
    DataError,
    DpParams,
    SurvivalCurve,
    percentile_ci,
    rmse,
    run_trials,
    sweep,
)

from .conftest import rec

RECORDS = [rec(t, t % 3 != 0) for t in range(1, 30)]


class TestRmse:
    def test_identical_curves(self):
        c = SurvivalCurve(np.array([1.0, 2.0]), np.array([0.5, 0.25]))
        assert rmse(c, c) == 0.0

    def test_opposite_unit_probs(self):
        a = SurvivalCurve(np.array([1.0, 2.0]), np.array([1.0, 0.0]))
        b = SurvivalCurve(np.array([1.0, 2.0]), np.array([0.0, 1.0]))
        assert rmse(a, b) == 1.0

    def test_mismatched_grid_rejected(self):
        a = SurvivalCurve(np.array([1.0, 2.0]), np.array([1.0, 0.0]))
        b = SurvivalCurve(np.array([1.0, 3.0]), np.array([1.0, 0.0]))
        with pytest.raises(DataError, match="time grid"):
            rmse(a, b)

    def test_empty_curves(self):
        empty = SurvivalCurve(np.array([]), np.array([]))
        assert rmse(empty, empty) == 0.0

    def test_positive_when_different(self):
        a = SurvivalCurve(np.array([1.0]), np.array([0.5]))
        b = SurvivalCurve(np.array([1.0]), np.array([0.75]))
        assert rmse(a, b) == pytest.approx(0.25)


class TestRunTrials:
    def test_deterministic_given_seed(self):
        params = DpParams(epsilon=1.0, seed=5)
        a = run_trials(RECORDS, params, 1)
        b = run_trials(RECORDS, params, 1)
        assert a.rmse_samples == b.rmse_samples
        assert a.trials == 1

    def test_samples_are_nonnegative(self):
        batch = run_trials(RECORDS, DpParams(epsilon=2.0, seed=1), 20)
        assert len(batch.rmse_samples) == 20
        assert all(s >= 0 for s in batch.rmse_samples)

    def test_different_trials_differ(self):
        batch = run_trials(RECORDS, DpParams(epsilon=2.0, seed=1), 10)
        assert len(set(batch.rmse_samples)) > 1

    def test_requires_positive_trials(self):
        with pytest.raises(ConfigError):
            run_trials(RECORDS, DpParams(epsilon=1.0), 0)


class TestPercentileCi:
    def test_constant_samples(self):
        assert percentile_ci([3.0] * 10) == (3.0, 3.0)

    def test_linear_interpolation_rule(self):
        samples = list(range(1, 101))
        assert percentile_ci(samples, 0.95) == pytest.approx((3.475, 97.525))

    def test_empty_rejected(self):
        with pytest.raises(DataError):
            percentile_ci([])

    @pytest.mark.parametrize("level", [0.0, 1.0, -0.2, 1.5])
    def test_bad_level_rejected(self, level):
        with pytest.raises(ConfigError):
            percentile_ci([1.0, 2.0], level)

    def test_bounds_contain_most_samples(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            samples = rng.lognormal(size=int(rng.integers(200, 1000)))
            lo, hi = percentile_ci(samples, 0.95)
            assert lo <= hi
            inside = np.mean((samples >= lo) & (samples <= hi))
            assert inside >= 0.94


class TestSweep:
    def test_single_point_matches_run_trials(self):
        params = DpParams(epsilon=1.0, seed=9)
        result = sweep(RECORDS, [params], 25)
        batch = run_trials(RECORDS, params, 25)
        lo, hi = percentile_ci(batch.rmse_samples, 0.95)
        row = result.rows[0]
        assert row.mean_rmse == pytest.approx(np.mean(batch.rmse_samples))
        assert (row.ci_lower, row.ci_upper) == (lo, hi)
        assert result.trials == 25

    def test_rows_in_grid_order(self):
        grid = [DpParams(epsilon=e, seed=2) for e in (4.0, 0.5, 2.0)]
        result = sweep(RECORDS, grid, 5)
        assert [row.params.epsilon for row in result.rows] == [4.0, 0.5, 2.0]

    def test_deterministic(self):
        grid = [DpParams(epsilon=1.0, seed=3), DpParams(epsilon=2.0, seed=3)]
        a = sweep(RECORDS, grid, 10)
        b = sweep(RECORDS, grid, 10)
        assert a == b

    def test_empty_grid_rejected(self):
        with pytest.raises(ConfigError):
            sweep(RECORDS, [], 5)
