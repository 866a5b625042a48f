"""Matplotlib rendering of curves, sweep results, and attack reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .attack import AttackReport
from .evaluation import SweepResult
from .survival import SurvivalCurve


def _step_xy(curve: SurvivalCurve):
    # anchor the step plot at S(0) = 1 so the pre-first-event level is visible
    x = np.concatenate(([0.0], curve.times))
    y = np.concatenate(([1.0], curve.probs))
    return x, y


def plot_curve(curve: SurvivalCurve, path, reference: SurvivalCurve | None = None) -> None:
    """Step plot of a survival curve, optionally over a reference curve."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if reference is not None:
        ax.step(*_step_xy(reference), where="post", color="0.4", linestyle="--",
                label="non-private")
    ax.step(*_step_xy(curve), where="post", color="C0", label="released")
    ax.set_xlabel("time")
    ax.set_ylabel("survival probability")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _varying_param(result: SweepResult):
    for name in ("epsilon", "alpha", "tau_start", "tau_end", "window"):
        values = [getattr(row.params, name) for row in result.rows]
        if len(set(values)) > 1:
            return name, values
    return None, list(range(len(result.rows)))


def plot_sweep(result: SweepResult, path) -> None:
    """Mean RMSE with its 95% CI band against the parameter that varies."""
    name, xs = _varying_param(result)
    means = [row.mean_rmse for row in result.rows]
    los = [row.ci_lower for row in result.rows]
    his = [row.ci_upper for row in result.rows]
    order = np.argsort(xs)
    xs = np.asarray(xs, dtype=float)[order]
    means = np.asarray(means)[order]
    los = np.asarray(los)[order]
    his = np.asarray(his)[order]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.fill_between(xs, los, his, color="C0", alpha=0.2, label="95% CI")
    ax.plot(xs, means, "o-", color="C0", label="mean RMSE")
    ax.set_xlabel(name or "grid row")
    ax.set_ylabel("RMSE")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_attack(report: AttackReport, path) -> None:
    """Distribution of influential-point counts per threshold."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if report.counts.shape[0]:
        data = [report.counts[:, j] for j in range(len(report.thresholds))]
        ax.boxplot(data, tick_labels=[repr(t) for t in report.thresholds])
        means = report.counts.mean(axis=0)
        ax.plot(np.arange(1, len(report.thresholds) + 1), means, "o--", color="C1",
                label="mean")
        ax.legend(loc="best")
    ax.set_xlabel("threshold")
    ax.set_ylabel("influential points per trial")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
