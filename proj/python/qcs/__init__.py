"""Quantized compressed sensing: quantizers, consistent region projection and greedy solvers."""

from ._qcs import (
    Cell,
    InvalidArgument,
    Problem,
    ProjectionResult,
    Quantizer,
    Region,
    RegionBox,
    SolverResult,
    TrialRecord,
    add_noise,
    algorithms,
    auto_step_size,
    build_trial_problem,
    consistency_penalties,
    corrupt,
    derive_seed,
    gen_problem,
    hard_threshold,
    least_squares,
    normalize,
    operator_norm,
    project_consistent,
    quantize_problem,
    rsnr,
    run_trial,
    select_outliers,
    solve,
    top_support,
    trial_seed,
)

__all__ = [
    "Cell",
    "InvalidArgument",
    "Problem",
    "ProjectionResult",
    "Quantizer",
    "Region",
    "RegionBox",
    "SolverResult",
    "TrialRecord",
    "add_noise",
    "algorithms",
    "auto_step_size",
    "build_trial_problem",
    "consistency_penalties",
    "corrupt",
    "derive_seed",
    "gen_problem",
    "hard_threshold",
    "least_squares",
    "normalize",
    "operator_norm",
    "project_consistent",
    "quantize_problem",
    "rsnr",
    "run_trial",
    "select_outliers",
    "solve",
    "top_support",
    "trial_seed",
]
