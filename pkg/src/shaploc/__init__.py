"""Shapley-value vs single-term anomaly localization for sensor data.

Exact Shapley values of a negative-log-density anomaly score over a
multivariate Gaussian sensor model, additive attack injection, and a
reproducible Monte Carlo harness comparing the error rate of thresholding
the Shapley value against thresholding the single marginal term.
"""

from .attacks import AttackSpec, apply_attack
from .coalitions import Coalition
from .gaussian import (
    DimensionMismatchError,
    GaussianModel,
    GaussianValueFunction,
    NotPositiveDefiniteError,
    check_observation,
)
from .harness import (
    DegenerateLabelsError,
    ErrorRateReport,
    ExperimentConfig,
    GridSpec,
    ScorePair,
    analytic_pe_gaussian,
    binomial_ci,
    optimize_threshold_exact,
    optimize_threshold_grid,
    run_experiment,
    run_trial,
    simulate_scores,
)
from .shapley import (
    AdditiveValueFunction,
    EmptyKeptSetError,
    ShapleyResult,
    UniverseTooLargeError,
    ValueFunction,
    all_shapley,
    exact_shapley,
    sampled_shapley,
    shapley_weight,
    truncated_shapley,
)
from .suite import (
    ConfigError,
    ExperimentSpec,
    SuiteConfig,
    bench,
    parse_config,
    preset_table1,
    preset_table2,
    run_suite,
)

__all__ = [
    "AdditiveValueFunction",
    "AttackSpec",
    "Coalition",
    "ConfigError",
    "DegenerateLabelsError",
    "DimensionMismatchError",
    "EmptyKeptSetError",
    "ErrorRateReport",
    "ExperimentConfig",
    "ExperimentSpec",
    "GaussianModel",
    "GaussianValueFunction",
    "GridSpec",
    "NotPositiveDefiniteError",
    "ScorePair",
    "ShapleyResult",
    "SuiteConfig",
    "UniverseTooLargeError",
    "ValueFunction",
    "all_shapley",
    "analytic_pe_gaussian",
    "apply_attack",
    "bench",
    "binomial_ci",
    "check_observation",
    "exact_shapley",
    "optimize_threshold_exact",
    "optimize_threshold_grid",
    "parse_config",
    "preset_table1",
    "preset_table2",
    "run_experiment",
    "run_suite",
    "run_trial",
    "sampled_shapley",
    "shapley_weight",
    "simulate_scores",
    "truncated_shapley",
]

__version__ = "0.1.0"
