"""Survival-power functionals of lifetime data.

Estimation of the cumulative residual entropy generating function and
its dynamic (residual-lifetime) version from data, analytic reference
values for standard lifetime families, a test of exponentiality against
decreasing residual dispersion, and a reproducible Monte Carlo harness.
"""

from .analytic import (
    AnalyticValue,
    cre_from_generating,
    cregf_closed,
    cregf_numeric,
    dcregf_closed,
    dcregf_numeric,
)
from .distributions import FAMILIES, LifetimeModel, make_model, parse_model
from .estimation import (
    CregfEstimate,
    CregfEstimator,
    cregf_bruteforce,
    cregf_estimate,
    cregf_stderr,
    dcregf_estimate,
    ustat_weights,
)
from .exptest import (
    ExponentialityTest,
    TestReport,
    alt_variance_plugin,
    delta_hat,
    delta_star,
    null_variance,
    run_test,
    test_statistic,
)
from .simulation import (
    NullVarianceResult,
    SimRow,
    SimSpec,
    load_sim_config,
    null_variance_check,
    run_bias_mse,
    run_size_power,
    write_csv,
)
from .validation import Sample, as_sample, sort_validate

__version__ = "0.1.0"

__all__ = [
    "AnalyticValue",
    "CregfEstimate",
    "CregfEstimator",
    "ExponentialityTest",
    "FAMILIES",
    "LifetimeModel",
    "NullVarianceResult",
    "Sample",
    "SimRow",
    "SimSpec",
    "TestReport",
    "alt_variance_plugin",
    "as_sample",
    "cre_from_generating",
    "cregf_bruteforce",
    "cregf_closed",
    "cregf_estimate",
    "cregf_numeric",
    "cregf_stderr",
    "dcregf_closed",
    "dcregf_estimate",
    "dcregf_numeric",
    "delta_hat",
    "delta_star",
    "load_sim_config",
    "make_model",
    "null_variance",
    "null_variance_check",
    "parse_model",
    "run_bias_mse",
    "run_size_power",
    "run_test",
    "sort_validate",
    "test_statistic",
    "ustat_weights",
    "write_csv",
]
