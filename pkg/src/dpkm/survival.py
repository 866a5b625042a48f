"""Exact Kaplan-Meier estimation from right-censored time-to-event records."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class SurvivalRecord:
    """One subject: observed time plus whether the event was seen.

    ``event`` is True when the event of interest occurred at ``time`` and
    False when the subject was right-censored at ``time``.
    """

    time: float
    event: bool


@dataclass(frozen=True)
class RiskRow:
    """Counts at one distinct event time: d_j events among n_j at risk."""

    time: float
    events: int
    at_risk: int


@dataclass(frozen=True)
class RiskTable:
    """Ordered rows (time, events, at_risk), one per distinct event time."""

    rows: tuple[RiskRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


@dataclass(frozen=True, eq=False)
class SurvivalCurve:
    """Right-continuous step function over strictly increasing event times."""

    times: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        probs = np.asarray(self.probs, dtype=float)
        if times.ndim != 1 or probs.ndim != 1 or times.shape != probs.shape:
            raise DataError(
                f"curve needs matching 1-d times/probs, got shapes "
                f"{times.shape} and {probs.shape}"
            )
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(probs))):
            raise DataError("curve times and probabilities must be finite")
        if len(times) > 1 and not np.all(np.diff(times) > 0):
            raise DataError("curve times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "probs", probs)

    def __len__(self) -> int:
        return len(self.times)


def build_risk_table(records: Sequence[SurvivalRecord]) -> RiskTable:
    """Aggregate raw records into per-event-time (d_j, n_j) counts.

    Only times with at least one event get a row.  A subject censored
    exactly at an event time still counts as at risk at that time.
    """
    records = list(records)
    if not records:
        raise DataError("empty dataset: no survival records")
    for idx, rec in enumerate(records):
        t = float(rec.time)
        if not math.isfinite(t) or t < 0:
            raise DataError(f"record {idx}: time must be finite and >= 0, got {rec.time!r}")

    times = np.array([float(r.time) for r in records])
    events = np.array([bool(r.event) for r in records])
    rows = []
    for t in np.unique(times[events]):
        d = int(np.count_nonzero((times == t) & events))
        n = int(np.count_nonzero(times >= t))
        rows.append(RiskRow(float(t), d, n))
    return RiskTable(tuple(rows))


def fit_km(table: RiskTable) -> SurvivalCurve:
    """Kaplan-Meier product-limit curve: S(t_i) = prod_{j<=i} (1 - d_j/n_j)."""
    times = []
    probs = []
    s = 1.0
    for row in table:
        s *= 1.0 - row.events / row.at_risk
        times.append(row.time)
        probs.append(s)
    return SurvivalCurve(np.array(times), np.array(probs))


def eval_step(curve: SurvivalCurve, t: float) -> float:
    """Survival probability at time ``t``: 1 before the first step,
    otherwise the value at the largest step time <= t."""
    if not math.isfinite(t):
        raise DataError(f"evaluation time must be finite, got {t!r}")
    idx = int(np.searchsorted(curve.times, t, side="right")) - 1
    if idx < 0:
        return 1.0
    return float(curve.probs[idx])


def step_values(curve: SurvivalCurve, ts: Iterable[float]) -> np.ndarray:
    """Vectorized eval_step over an array of time points."""
    ts = np.asarray(ts, dtype=float)
    if ts.size and not np.all(np.isfinite(ts)):
        raise DataError("evaluation times must be finite")
    idx = np.searchsorted(curve.times, ts, side="right") - 1
    out = np.ones(ts.shape)
    hit = idx >= 0
    out[hit] = curve.probs[idx[hit]]
    return out
