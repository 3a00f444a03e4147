"""Modified gradient sampling for nonsmooth min-max problems."""

from ._core import (
    ConfigError,
    CoverageProblem,
    GsParams,
    IterationRecord,
    MinNormResult,
    Oracle,
    Trace,
    abs_oracle,
    cantor_oracle,
    coverage_c,
    coverage_cost,
    coverage_grad,
    coverage_in_D,
    coverage_oracle,
    coverage_penalty,
    finite_max_oracle,
    gradient_descent_baseline,
    inner_lp_max,
    min_norm_bruteforce,
    min_norm_point,
    run,
    run_config,
    two_agent_cost,
    two_agent_problem,
)

__all__ = [
    "ConfigError",
    "CoverageProblem",
    "GsParams",
    "IterationRecord",
    "MinNormResult",
    "Oracle",
    "Trace",
    "abs_oracle",
    "cantor_oracle",
    "coverage_c",
    "coverage_cost",
    "coverage_grad",
    "coverage_in_D",
    "coverage_oracle",
    "coverage_penalty",
    "finite_max_oracle",
    "gradient_descent_baseline",
    "inner_lp_max",
    "min_norm_bruteforce",
    "min_norm_point",
    "run",
    "run_config",
    "two_agent_cost",
    "two_agent_problem",
]
