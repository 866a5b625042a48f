"""Multi-trial utility evaluation: RMSE against the non-private curve,
percentile confidence intervals, and parameter sweeps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DataError
from .mechanism import DpParams, dp_km, substream
from .survival import SurvivalCurve, SurvivalRecord, build_risk_table, fit_km


@dataclass(frozen=True)
class TrialBatch:
    """Per-trial RMSE samples for one parameter configuration."""

    params: DpParams
    trials: int
    rmse_samples: tuple[float, ...]


@dataclass(frozen=True)
class SweepRow:
    params: DpParams
    mean_rmse: float
    ci_lower: float
    ci_upper: float


@dataclass(frozen=True)
class SweepResult:
    """One row per grid point, in grid order."""

    rows: tuple[SweepRow, ...]
    trials: int


def rmse(private: SurvivalCurve, reference: SurvivalCurve) -> float:
    """Root mean squared pointwise difference between two curves on one grid."""
    if len(private) != len(reference) or not np.array_equal(private.times, reference.times):
        raise DataError("curves must share the same time grid")
    if len(private) == 0:
        return 0.0
    return float(np.sqrt(np.mean((private.probs - reference.probs) ** 2)))


def run_trials(records: Sequence[SurvivalRecord], params: DpParams, trials: int) -> TrialBatch:
    """Release the curve ``trials`` times and collect RMSE per trial.

    The non-private curve is fitted once; trial t draws its noise from the
    substream (params.seed, t), so results are reproducible and independent
    of execution order.
    """
    if not (isinstance(trials, int) and trials >= 1):
        raise ConfigError(f"trials must be an integer >= 1, got {trials!r}")
    reference = fit_km(build_risk_table(records))
    samples = []
    for t in range(trials):
        release = dp_km(reference, params, substream(params.seed, t))
        samples.append(rmse(release, reference))
    return TrialBatch(params, trials, tuple(samples))


def percentile_ci(samples: Sequence[float], level: float = 0.95) -> tuple[float, float]:
    """Empirical (1-level)/2 and 1-(1-level)/2 quantiles of the samples,
    linearly interpolated between order statistics."""
    if len(samples) == 0:
        raise DataError("cannot compute a confidence interval from no samples")
    if not 0 < level < 1:
        raise ConfigError(f"confidence level must lie in (0, 1), got {level!r}")
    lo = (1.0 - level) / 2.0
    qs = np.quantile(np.asarray(samples, dtype=float), [lo, 1.0 - lo])
    return float(qs[0]), float(qs[1])


def sweep(records: Sequence[SurvivalRecord], grid: Sequence[DpParams], trials: int) -> SweepResult:
    """run_trials + 95% percentile CI for every grid point, in grid order."""
    if len(grid) == 0:
        raise ConfigError("parameter grid is empty")
    rows = []
    for params in grid:
        batch = run_trials(records, params, trials)
        lo, hi = percentile_ci(batch.rmse_samples, 0.95)
        rows.append(SweepRow(params, float(np.mean(batch.rmse_samples)), lo, hi))
    return SweepResult(tuple(rows), trials)
