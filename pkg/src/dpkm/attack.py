"""Leave-one-out membership-inference evaluation.

Compares private releases computed with and without a target record and
counts time points where the two differ by more than a threshold.  The
with/without releases use independent noise substreams, matching an
attacker who observes two separately published curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DataError
from .mechanism import DpParams, dp_km, substream
from .survival import SurvivalCurve, SurvivalRecord, build_risk_table, fit_km, step_values


@dataclass(frozen=True, eq=False)
class AttackReport:
    """Influential-point counts per (trial, threshold).

    ``counts[t, j]`` is the number of union-grid time points where the
    with/without releases of trial t differ by more than ``thresholds[j]``.
    """

    target_index: int
    thresholds: tuple[float, ...]
    counts: np.ndarray
    union_grid: np.ndarray
    params: DpParams


def default_target_index(records: Sequence[SurvivalRecord]) -> int:
    """Index of the latest observed event (the max-time heuristic target)."""
    best = -1
    best_time = -1.0
    for idx, rec in enumerate(records):
        if rec.event and rec.time > best_time:
            best, best_time = idx, rec.time
    if best < 0:
        raise DataError("degenerate dataset: no events to target")
    return best


def _loo_curves(records: Sequence[SurvivalRecord], target_index: int):
    records = list(records)
    if not 0 <= target_index < len(records):
        raise DataError(
            f"target index {target_index} outside dataset of {len(records)} records"
        )
    without = records[:target_index] + records[target_index + 1:]
    if not without or not any(r.event for r in without):
        raise DataError("degenerate dataset: removal leaves no events to estimate from")
    curve_with = fit_km(build_risk_table(records))
    curve_without = fit_km(build_risk_table(without))
    return curve_with, curve_without


def leave_one_out_release(records: Sequence[SurvivalRecord], target_index: int,
                          params: DpParams, trial: int, *, noise: bool = True
                          ) -> tuple[SurvivalCurve, SurvivalCurve]:
    """One private release pair: with the target record and without it.

    The two arms draw from substreams (seed, trial, 0) and (seed, trial, 1);
    their time grids can differ because removing the target can remove an
    event time.
    """
    if not (isinstance(trial, int) and trial >= 0):
        raise ConfigError(f"trial index must be an integer >= 0, got {trial!r}")
    curve_with, curve_without = _loo_curves(records, target_index)
    release_with = dp_km(curve_with, params, substream(params.seed, trial, 0), noise=noise)
    release_without = dp_km(curve_without, params, substream(params.seed, trial, 1), noise=noise)
    return release_with, release_without


def influential_points(a: SurvivalCurve, b: SurvivalCurve, threshold: float
                       ) -> tuple[int, np.ndarray]:
    """Count union-grid time points where |a(t) - b(t)| exceeds the threshold."""
    grid = np.union1d(a.times, b.times)
    exceed = np.abs(step_values(a, grid) - step_values(b, grid)) > threshold
    return int(np.count_nonzero(exceed)), grid[exceed]


def attack_trials(records: Sequence[SurvivalRecord], target_index: int, params: DpParams,
                  thresholds: Sequence[float], trials: int, *, noise: bool = True
                  ) -> AttackReport:
    """Run the leave-one-out comparison over many trials.

    Per trial, both releases are evaluated on the union of their time grids
    and one influential-point count is recorded per threshold.  Thresholds
    must be sorted ascending so counts are non-increasing along that axis.
    """
    thresholds = tuple(float(t) for t in thresholds)
    if any(b < a for a, b in zip(thresholds, thresholds[1:])):
        raise ConfigError(f"thresholds must be sorted ascending, got {list(thresholds)}")
    if not (isinstance(trials, int) and trials >= 0):
        raise ConfigError(f"trials must be an integer >= 0, got {trials!r}")
    curve_with, curve_without = _loo_curves(records, target_index)
    grid = np.union1d(curve_with.times, curve_without.times)
    counts = np.zeros((trials, len(thresholds)), dtype=int)
    thr = np.asarray(thresholds)
    for t in range(trials):
        release_with = dp_km(curve_with, params, substream(params.seed, t, 0), noise=noise)
        release_without = dp_km(curve_without, params, substream(params.seed, t, 1), noise=noise)
        diff = np.abs(step_values(release_with, grid) - step_values(release_without, grid))
        counts[t] = np.count_nonzero(diff[:, None] > thr[None, :], axis=0)
    return AttackReport(target_index, thresholds, counts, grid, params)
