"""File ingestion and export: survival CSVs, curve files, report CSVs,
parameter grids, and a synthetic dataset generator.

All writers format floats with ``repr`` (shortest round-trip form) and LF
line endings, so identical inputs always produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .attack import AttackReport
from .errors import ConfigError, DataError
from .evaluation import SweepResult
from .mechanism import DpParams, substream
from .survival import SurvivalCurve, SurvivalRecord

logger = logging.getLogger(__name__)

CURVE_FORMATS = ("csv", "json")

GRID_COLUMNS = ("epsilon", "alpha", "tau_start", "tau_end", "window", "seed", "smoothing_mode")


@dataclass(frozen=True)
class IngestConfig:
    """Column names and status coding for delimited survival files.

    Defaults follow the R ``survival`` lung layout: a ``time`` column plus a
    ``status`` column coded 2 = event, 1 = censored.  Codes are compared as
    stripped strings, so they can be given as ints or strings.
    """

    time_column: str = "time"
    status_column: str = "status"
    event_codes: frozenset = frozenset({"2"})
    censored_codes: frozenset = frozenset({"1"})
    missing_token: str = "NA"

    def __post_init__(self):
        event = frozenset(str(c).strip() for c in self.event_codes)
        censored = frozenset(str(c).strip() for c in self.censored_codes)
        if not event or not censored:
            raise ConfigError("event and censored status codes must be non-empty")
        if event & censored:
            raise ConfigError(f"status codes must be disjoint, {sorted(event & censored)} appear in both")
        object.__setattr__(self, "event_codes", event)
        object.__setattr__(self, "censored_codes", censored)


def _sniff_dialect(sample: str):
    try:
        return csv.Sniffer().sniff(sample, delimiters=",;\t")
    except csv.Error:
        return csv.excel


def load_records(path, config: IngestConfig | None = None) -> list[SurvivalRecord]:
    """Parse a delimited file with a header row into survival records.

    Rows whose time or status cell is missing (empty or the configured
    missing token) are rejected and logged with their row number; anything
    else that cannot be interpreted is a hard error naming the row.
    """
    config = config or IngestConfig()
    path = Path(path)
    text = path.read_text()
    if not text.strip():
        raise DataError(f"{path}: empty file")
    reader = csv.DictReader(io.StringIO(text), dialect=_sniff_dialect(text[:4096]))
    header = reader.fieldnames or []
    missing_cols = [c for c in (config.time_column, config.status_column) if c not in header]
    if missing_cols:
        raise DataError(f"{path}: missing column(s) {missing_cols}, header has {header}")

    records = []
    rejected = 0
    row_count = 0
    for row_num, row in enumerate(reader, start=2):
        row_count += 1
        time_cell = (row.get(config.time_column) or "").strip()
        status_cell = (row.get(config.status_column) or "").strip()
        if time_cell in ("", config.missing_token) or status_cell in ("", config.missing_token):
            rejected += 1
            logger.warning("%s: row %d rejected (missing time or status)", path, row_num)
            continue
        try:
            time = float(time_cell)
        except ValueError:
            raise DataError(f"{path}: row {row_num}: unparseable time {time_cell!r}") from None
        if not np.isfinite(time) or time < 0:
            raise DataError(f"{path}: row {row_num}: time must be finite and >= 0, got {time_cell!r}")
        if status_cell in config.event_codes:
            event = True
        elif status_cell in config.censored_codes:
            event = False
        else:
            raise DataError(f"{path}: row {row_num}: unknown status code {status_cell!r}")
        records.append(SurvivalRecord(time, event))
    if row_count == 0:
        raise DataError(f"{path}: no data rows")
    if rejected:
        logger.warning("%s: %d of %d rows rejected", path, rejected, row_count)
    return records


def curve_to_csv_text(curve: SurvivalCurve) -> str:
    lines = ["time,survival_prob"]
    lines += [f"{t!r},{p!r}" for t, p in zip(curve.times.tolist(), curve.probs.tolist())]
    return "\n".join(lines) + "\n"


def curve_to_json_text(curve: SurvivalCurve) -> str:
    return json.dumps({"times": curve.times.tolist(), "probs": curve.probs.tolist()}) + "\n"


def export_curve(curve: SurvivalCurve, path, fmt: str = "csv") -> None:
    """Write a curve as CSV (columns time,survival_prob) or JSON."""
    if fmt not in CURVE_FORMATS:
        raise ConfigError(f"curve format must be one of {CURVE_FORMATS}, got {fmt!r}")
    text = curve_to_csv_text(curve) if fmt == "csv" else curve_to_json_text(curve)
    Path(path).write_text(text)


def import_curve(path, fmt: str = "csv") -> SurvivalCurve:
    """Read back a curve written by :func:`export_curve`."""
    if fmt not in CURVE_FORMATS:
        raise ConfigError(f"curve format must be one of {CURVE_FORMATS}, got {fmt!r}")
    path = Path(path)
    text = path.read_text()
    if fmt == "json":
        try:
            payload = json.loads(text)
            times, probs = payload["times"], payload["probs"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DataError(f"{path}: not a curve JSON file ({exc})") from None
        return SurvivalCurve(np.asarray(times, dtype=float), np.asarray(probs, dtype=float))
    lines = text.splitlines()
    if not lines or lines[0] != "time,survival_prob":
        raise DataError(f"{path}: expected header 'time,survival_prob'")
    times, probs = [], []
    for ln, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise DataError(f"{path}: row {ln}: expected two columns")
        try:
            times.append(float(parts[0]))
            probs.append(float(parts[1]))
        except ValueError:
            raise DataError(f"{path}: row {ln}: unparseable value") from None
    return SurvivalCurve(np.asarray(times), np.asarray(probs))


def write_sweep_csv(result: SweepResult, path) -> None:
    """One row per grid point with the mechanism parameters and trial stats."""
    lines = ["epsilon,alpha,tau_start,tau_end,window,trials,mean_rmse,ci_lower,ci_upper"]
    for row in result.rows:
        p = row.params
        lines.append(
            f"{p.epsilon!r},{p.alpha!r},{p.tau_start!r},{p.tau_end!r},{p.window},"
            f"{result.trials},{row.mean_rmse!r},{row.ci_lower!r},{row.ci_upper!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_attack_csv(report: AttackReport, path) -> None:
    """Full per-trial influential-point counts, one row per (trial, threshold)."""
    lines = ["trial,threshold,influential_count"]
    for t in range(report.counts.shape[0]):
        for j, thr in enumerate(report.thresholds):
            lines.append(f"{t},{thr!r},{int(report.counts[t, j])}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_attack_summary_csv(report: AttackReport, path) -> None:
    """Per-threshold mean/min/max counts across trials."""
    lines = ["epsilon,threshold,mean_count,min_count,max_count"]
    if report.counts.shape[0]:
        for j, thr in enumerate(report.thresholds):
            col = report.counts[:, j]
            lines.append(
                f"{report.params.epsilon!r},{thr!r},{float(np.mean(col))!r},"
                f"{int(np.min(col))},{int(np.max(col))}"
            )
    Path(path).write_text("\n".join(lines) + "\n")


def load_grid_csv(path, seed: int = 0) -> list[DpParams]:
    """Read a parameter grid: one configuration per row.

    Recognized columns are epsilon (required), alpha, tau_start, tau_end,
    window, seed, and smoothing_mode; anything omitted falls back to the
    defaults (and to the ``seed`` argument).
    """
    path = Path(path)
    text = path.read_text()
    if not text.strip():
        raise DataError(f"{path}: empty grid file")
    reader = csv.DictReader(io.StringIO(text), dialect=_sniff_dialect(text[:4096]))
    header = reader.fieldnames or []
    if "epsilon" not in header:
        raise DataError(f"{path}: grid file needs an 'epsilon' column, header has {header}")
    unknown = [c for c in header if c not in GRID_COLUMNS]
    if unknown:
        raise DataError(f"{path}: unknown grid column(s) {unknown}, expected a subset of {list(GRID_COLUMNS)}")

    defaults = {"alpha": 0.05, "tau_start": 0.95, "tau_end": 0.5, "window": 3,
                "seed": seed, "smoothing_mode": "actual_count"}
    grid = []
    for row_num, row in enumerate(reader, start=2):
        kwargs = dict(defaults)
        try:
            kwargs["epsilon"] = float(row["epsilon"])
            for key in ("alpha", "tau_start", "tau_end"):
                if (row.get(key) or "").strip():
                    kwargs[key] = float(row[key])
            for key in ("window", "seed"):
                if (row.get(key) or "").strip():
                    kwargs[key] = int(row[key])
            if (row.get("smoothing_mode") or "").strip():
                kwargs["smoothing_mode"] = row["smoothing_mode"].strip()
        except (TypeError, ValueError) as exc:
            raise DataError(f"{path}: row {row_num}: bad grid value ({exc})") from None
        try:
            grid.append(DpParams(**kwargs))
        except ConfigError as exc:
            raise DataError(f"{path}: row {row_num}: {exc}") from None
    if not grid:
        raise DataError(f"{path}: grid file has no data rows")
    return grid


def synthetic_records(size: int, seed: int, *, event_scale: float = 340.0,
                      censor_max: float = 1100.0) -> list[SurvivalRecord]:
    """Generate a censored dataset: exponential event times with mean
    ``event_scale``, censoring times uniform on (0, censor_max)."""
    if not (isinstance(size, int) and size >= 1):
        raise ConfigError(f"size must be an integer >= 1, got {size!r}")
    if event_scale <= 0 or censor_max <= 0:
        raise ConfigError("event_scale and censor_max must be positive")
    rng = substream(seed)
    event_times = rng.exponential(event_scale, size)
    censor_times = rng.uniform(0.0, censor_max, size)
    return [
        SurvivalRecord(float(min(t, c)), bool(t <= c))
        for t, c in zip(event_times, censor_times)
    ]


def records_to_csv_text(records) -> str:
    """Records in the default ingest layout (time + status, 2=event 1=censored)."""
    lines = ["time,status"]
    lines += [f"{float(r.time)!r},{2 if r.event else 1}" for r in records]
    return "\n".join(lines) + "\n"
