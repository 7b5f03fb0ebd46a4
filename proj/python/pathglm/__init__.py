"""Solution paths for L1- and MCP-penalized logistic and Poisson regression."""

from ._core import (
    ApproxOrder,
    CorrectorKind,
    CorrectorResult,
    Dataset,
    ExperimentReport,
    Family,
    Metrics,
    PathConfig,
    PathPoint,
    PathSolution,
    PenaltyKind,
    PenaltySpec,
    PredictorDerivatives,
    SelectionReport,
    SimSpec,
    StopReason,
    SummaryStat,
    active_set_lasso,
    cd_correct,
    cd_update,
    check_saturation,
    choose_corrector,
    compute_metrics,
    compute_u_min,
    ebic_score,
    format_report,
    generate_design,
    generate_response,
    held_out_deviance,
    kkt_residual,
    lambda_grid,
    load_csv,
    log_choose,
    make_folds,
    neg_log_likelihood,
    newton_correct,
    null_intercept,
    penalty_derivative,
    penalty_value,
    predictor_derivatives,
    predictor_step,
    run_experiment,
    score,
    select_cv,
    select_cv_on_path,
    select_ebic,
    solve_path,
    solve_path_on_grid,
    third_diag,
    weight_diag,
    working_response,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxOrder",
    "CorrectorKind",
    "CorrectorResult",
    "Dataset",
    "ExperimentReport",
    "Family",
    "Metrics",
    "PathConfig",
    "PathPoint",
    "PathSolution",
    "PenaltyKind",
    "PenaltySpec",
    "PredictorDerivatives",
    "SelectionReport",
    "SimSpec",
    "StopReason",
    "SummaryStat",
    "active_set_lasso",
    "cd_correct",
    "cd_update",
    "check_saturation",
    "choose_corrector",
    "compute_metrics",
    "compute_u_min",
    "ebic_score",
    "format_report",
    "generate_design",
    "generate_response",
    "held_out_deviance",
    "kkt_residual",
    "lambda_grid",
    "load_csv",
    "log_choose",
    "make_folds",
    "neg_log_likelihood",
    "newton_correct",
    "null_intercept",
    "penalty_derivative",
    "penalty_value",
    "predictor_derivatives",
    "predictor_step",
    "run_experiment",
    "score",
    "select_cv",
    "select_cv_on_path",
    "select_ebic",
    "solve_path",
    "solve_path_on_grid",
    "third_diag",
    "weight_diag",
    "working_response",
]
