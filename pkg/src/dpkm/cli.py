"""Command-line interface wiring the estimator, mechanism, and harnesses.

Subcommands: fit, dp-fit, budget, sweep, attack, synth.  Validation
problems exit with code 2, unexpected failures with 1.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import dataio, plots
from .attack import attack_trials, default_target_index
from .errors import ConfigError, DataError, DpKmError
from .evaluation import sweep
from .mechanism import DpParams, dp_km, substream, total_budget
from .survival import build_risk_table, fit_km

TRIALS_ENV = "DPKM_TRIALS"


def _default_trials() -> int:
    raw = os.environ.get(TRIALS_ENV, "500")
    try:
        trials = int(raw)
    except ValueError:
        raise ConfigError(f"{TRIALS_ENV} must be an integer, got {raw!r}") from None
    if trials < 1:
        raise ConfigError(f"{TRIALS_ENV} must be >= 1, got {trials}")
    return trials


def _add_ingest_options(sp):
    sp.add_argument("--input", required=True, help="delimited survival file with a header row")
    sp.add_argument("--time-column", default="time")
    sp.add_argument("--status-column", default="status")
    sp.add_argument("--event-codes", default="2", help="comma-separated status codes meaning event")
    sp.add_argument("--censored-codes", default="1", help="comma-separated status codes meaning censored")
    sp.add_argument("--missing-token", default="NA")


def _add_mechanism_options(sp):
    sp.add_argument("--epsilon", type=float, required=True, help="per-step base privacy budget")
    sp.add_argument("--alpha", type=float, default=0.05, help="noise decay factor")
    sp.add_argument("--tau-start", type=float, default=0.95)
    sp.add_argument("--tau-end", type=float, default=0.5)
    sp.add_argument("--window", type=int, default=3, help="rolling-mean window (odd)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--smoothing-mode", default="actual_count",
                    choices=["actual_count", "literal_w"])


def _ingest_config(args) -> dataio.IngestConfig:
    return dataio.IngestConfig(
        time_column=args.time_column,
        status_column=args.status_column,
        event_codes=frozenset(args.event_codes.split(",")),
        censored_codes=frozenset(args.censored_codes.split(",")),
        missing_token=args.missing_token,
    )


def _params(args) -> DpParams:
    return DpParams(
        epsilon=args.epsilon,
        alpha=args.alpha,
        tau_start=args.tau_start,
        tau_end=args.tau_end,
        window=args.window,
        seed=args.seed,
        smoothing_mode=args.smoothing_mode,
    )


def _curve_format(path) -> str:
    return "json" if Path(path).suffix.lower() == ".json" else "csv"


def _emit_curve(curve, out) -> None:
    if out is None:
        sys.stdout.write(dataio.curve_to_csv_text(curve))
    else:
        dataio.export_curve(curve, out, _curve_format(out))


def cmd_fit(args) -> int:
    records = dataio.load_records(args.input, _ingest_config(args))
    curve = fit_km(build_risk_table(records))
    _emit_curve(curve, args.out)
    if args.plot:
        plots.plot_curve(curve, args.plot)
    return 0


def cmd_dp_fit(args) -> int:
    records = dataio.load_records(args.input, _ingest_config(args))
    params = _params(args)
    curve = fit_km(build_risk_table(records))
    release = dp_km(curve, params, substream(params.seed))
    n = len(curve)
    eps_hat = total_budget(params.epsilon, params.alpha, n).total if n else 0.0
    print(f"epsilon_hat = {eps_hat!r} (total budget over {n} released points)",
          file=sys.stderr)
    _emit_curve(release, args.out)
    if args.plot:
        plots.plot_curve(release, args.plot, reference=curve)
    return 0


def cmd_budget(args) -> int:
    report = total_budget(args.epsilon, args.alpha, args.n)
    print("step,epsilon_hat_i")
    for i, eps_i in enumerate(report.per_step):
        print(f"{i},{eps_i!r}")
    print(f"total,{report.total!r}")
    return 0


def cmd_sweep(args) -> int:
    records = dataio.load_records(args.input, _ingest_config(args))
    grid = dataio.load_grid_csv(args.grid, seed=args.seed)
    trials = args.trials if args.trials is not None else _default_trials()
    result = sweep(records, grid, trials)
    dataio.write_sweep_csv(result, args.out)
    if args.plot:
        plots.plot_sweep(result, args.plot)
    return 0


def cmd_attack(args) -> int:
    records = dataio.load_records(args.input, _ingest_config(args))
    if args.target == "max-time":
        target = default_target_index(records)
    else:
        try:
            target = int(args.target)
        except ValueError:
            raise ConfigError(
                f"--target must be an integer index or 'max-time', got {args.target!r}"
            ) from None
    try:
        thresholds = [float(x) for x in args.thresholds.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"--thresholds must be comma-separated numbers, got {args.thresholds!r}") from None
    if not thresholds:
        raise ConfigError("--thresholds must list at least one value")
    trials = args.trials if args.trials is not None else _default_trials()
    report = attack_trials(records, target, _params(args), thresholds, trials)
    out = Path(args.out)
    summary = out.with_name(out.stem + "_summary" + (out.suffix or ".csv"))
    dataio.write_attack_csv(report, out)
    dataio.write_attack_summary_csv(report, summary)
    print(f"wrote {out} and {summary}", file=sys.stderr)
    if args.plot:
        plots.plot_attack(report, args.plot)
    return 0


def cmd_synth(args) -> int:
    records = dataio.synthetic_records(args.size, args.seed,
                                       event_scale=args.event_scale,
                                       censor_max=args.censor_max)
    text = dataio.records_to_csv_text(records)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpkm",
        description="Kaplan-Meier survival curves with differentially private release.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="non-private Kaplan-Meier curve")
    _add_ingest_options(fit)
    fit.add_argument("--out", help="curve file (.csv or .json); stdout when omitted")
    fit.add_argument("--plot", help="also render the curve to this image file")
    fit.set_defaults(func=cmd_fit)

    dp_fit = sub.add_parser("dp-fit", help="one differentially private release")
    _add_ingest_options(dp_fit)
    _add_mechanism_options(dp_fit)
    dp_fit.add_argument("--out", help="curve file (.csv or .json); stdout when omitted")
    dp_fit.add_argument("--plot", help="render release + non-private reference to this image file")
    dp_fit.set_defaults(func=cmd_dp_fit)

    budget = sub.add_parser("budget", help="per-step and total privacy budget")
    budget.add_argument("--epsilon", type=float, required=True)
    budget.add_argument("--alpha", type=float, required=True)
    budget.add_argument("--n", type=int, required=True, help="number of released time points")
    budget.set_defaults(func=cmd_budget)

    sweep_p = sub.add_parser("sweep", help="mean RMSE + CI over a parameter grid")
    _add_ingest_options(sweep_p)
    sweep_p.add_argument("--grid", required=True, help="CSV of parameter columns, one row per configuration")
    sweep_p.add_argument("--trials", type=int, default=None,
                         help=f"releases per grid point (default 500, or ${TRIALS_ENV})")
    sweep_p.add_argument("--seed", type=int, default=0)
    sweep_p.add_argument("--out", required=True, help="result CSV")
    sweep_p.add_argument("--plot", help="render mean RMSE vs the varying parameter")
    sweep_p.set_defaults(func=cmd_sweep)

    attack = sub.add_parser("attack", help="leave-one-out membership-inference counts")
    _add_ingest_options(attack)
    _add_mechanism_options(attack)
    attack.add_argument("--target", default="max-time",
                        help="record index to remove, or 'max-time' for the latest event")
    attack.add_argument("--thresholds", default="0.05,0.1,0.5,0.7",
                        help="comma-separated ascending thresholds")
    attack.add_argument("--trials", type=int, default=None,
                        help=f"release pairs (default 500, or ${TRIALS_ENV})")
    attack.add_argument("--out", required=True,
                        help="per-trial CSV; a *_summary.csv is written alongside")
    attack.add_argument("--plot", help="render count distributions per threshold")
    attack.set_defaults(func=cmd_attack)

    synth = sub.add_parser("synth", help="generate a synthetic censored dataset")
    synth.add_argument("--size", type=int, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--event-scale", type=float, default=340.0,
                       help="mean of the exponential event times")
    synth.add_argument("--censor-max", type=float, default=1100.0,
                       help="upper bound of the uniform censoring times")
    synth.add_argument("--out", help="records CSV; stdout when omitted")
    synth.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DataError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DpKmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
