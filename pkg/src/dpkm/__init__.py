"""Differentially private Kaplan-Meier estimation and its evaluation harness."""

from .attack import (
    AttackReport,
    attack_trials,
    default_target_index,
    influential_points,
    leave_one_out_release,
)
from .dataio import (
    IngestConfig,
    export_curve,
    import_curve,
    load_grid_csv,
    load_records,
    synthetic_records,
    write_attack_csv,
    write_attack_summary_csv,
    write_sweep_csv,
)
from .errors import ConfigError, DataError, DpKmError
from .evaluation import (
    SweepResult,
    SweepRow,
    TrialBatch,
    percentile_ci,
    rmse,
    run_trials,
    sweep,
)
from .mechanism import (
    BiasTerms,
    BudgetReport,
    DpParams,
    clip,
    clip_threshold,
    cumulative_min,
    dp_km,
    expected_noise_mse,
    measure_bias_terms,
    noise_scale,
    sample_laplace,
    smooth,
    substream,
    total_budget,
)
from .survival import (
    RiskRow,
    RiskTable,
    SurvivalCurve,
    SurvivalRecord,
    build_risk_table,
    eval_step,
    fit_km,
    step_values,
)

__version__ = "0.1.0"

__all__ = [
    "AttackReport",
    "BiasTerms",
    "BudgetReport",
    "ConfigError",
    "DataError",
    "DpKmError",
    "DpParams",
    "IngestConfig",
    "RiskRow",
    "RiskTable",
    "SurvivalCurve",
    "SurvivalRecord",
    "SweepResult",
    "SweepRow",
    "TrialBatch",
    "attack_trials",
    "build_risk_table",
    "clip",
    "clip_threshold",
    "cumulative_min",
    "default_target_index",
    "dp_km",
    "eval_step",
    "export_curve",
    "expected_noise_mse",
    "fit_km",
    "import_curve",
    "influential_points",
    "leave_one_out_release",
    "load_grid_csv",
    "load_records",
    "measure_bias_terms",
    "noise_scale",
    "percentile_ci",
    "rmse",
    "run_trials",
    "sample_laplace",
    "smooth",
    "step_values",
    "substream",
    "sweep",
    "synthetic_records",
    "total_budget",
    "write_attack_csv",
    "write_attack_summary_csv",
    "write_sweep_csv",
]
