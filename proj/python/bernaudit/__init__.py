"""Bernstein approximation error bounds and binomial subgaussian audits."""

from ._core import (
    REPORT_SCHEMA,
    BoundRecord,
    ConfigError,
    ConvergenceError,
    DomainError,
    Function,
    Modulus,
    __version__,
    bernstein_derivative_eval,
    bernstein_eval,
    bernstein_weights,
    bivariate_bound,
    bivariate_labels,
    bk_check,
    bojanic_asymptote,
    corpus,
    cosh_mgf_check,
    derivative_bound,
    error_exact,
    excess_kurtosis_root,
    j_functional,
    j_hoelder_closed_form,
    log_binomial,
    log_binomial_pmf,
    log_gamma,
    moment_check,
    ratio_trace,
    run_cli,
    sub_norm_estimate,
    tail_bound_check,
    tail_function,
    trial_G,
    trial_g,
    uniform_bound,
    upper_bound,
)
