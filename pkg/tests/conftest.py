"""Shared fixtures: the NCCTG lung file when the user supplies one, and a
lung-like synthetic fallback otherwise.

The lung dataset is never vendored.  Point DPKM_LUNG_CSV at an export of
the R ``survival::lung`` data frame (write.csv layout) or drop it at
tests/data/lung.csv to run the paper-value checks against the real data.
"""

import os
from pathlib import Path

import pytest

from dpkm import SurvivalRecord, load_records, synthetic_records

LUNG_ENV = "DPKM_LUNG_CSV"

# fallback tuned so the true curve resembles lung's: 228 subjects, ~84%
# events, and an all-zero-release RMSE ceiling near the paper's 0.599
FALLBACK_SEED = 12345
FALLBACK_EVENT_SCALE = 340.0
FALLBACK_CENSOR_MAX = 2000.0


def rec(time, event) -> SurvivalRecord:
    return SurvivalRecord(float(time), bool(event))


def lung_csv_path():
    env = os.environ.get(LUNG_ENV)
    if env:
        return Path(env)
    local = Path(__file__).parent / "data" / "lung.csv"
    return local if local.exists() else None


@pytest.fixture(scope="session")
def lung_records():
    """Records from the real lung file, or None when it is unavailable."""
    path = lung_csv_path()
    if path is None or not path.exists():
        return None
    return load_records(path)


@pytest.fixture(scope="session")
def bench_records(lung_records):
    """(records, is_lung): the lung data when present, else the fallback."""
    if lung_records is not None:
        return lung_records, True
    return (
        synthetic_records(
            228,
            FALLBACK_SEED,
            event_scale=FALLBACK_EVENT_SCALE,
            censor_max=FALLBACK_CENSOR_MAX,
        ),
        False,
    )
