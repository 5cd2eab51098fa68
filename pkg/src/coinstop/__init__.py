"""Exact distributions, expectations, and moments of coin-toss stopping times.

Two stopping rules for a coin with rational bias p: stop at the first of
n heads or m tails (OR), and stop once both have occurred (AND).  The
package computes their exact pmfs, expectations by four independent routes,
factorial/raw/central/scaled moments for the fair symmetric case, the
half-normal limit profile, and seeded Monte Carlo cross-checks.  All core
arithmetic is exact rational; floats appear only at display boundaries and
in the simulation oracle.
"""

__version__ = "0.1.0"

from .exact import (
    CACHE_MAX_ENTRIES,
    DomainError,
    Polynomial,
    Rational,
    binomial,
    catalan,
    cn,
    stirling2,
    to_decimal,
)
from .pgf import (
    DEFAULT_EPSILON,
    CoinSpec,
    GoalSpec,
    Pmf,
    StopRule,
    pgf_sum_closed_form,
    pmf_and,
    pmf_or,
)
from .duration import (
    ExpectationResult,
    Method,
    asymptotic_balanced,
    binomial_partial_expectation,
    catalan_sum_or,
    closed_form_balanced,
    expectation_direct,
    expectation_recurrence,
    expected_margin,
)
from .moments import (
    ConvergenceEntry,
    ConvergenceReport,
    MomentTable,
    and_factorial_moment_fair,
    central_moments,
    factorial_moment_or_fair,
    factorial_moment_or_fair_direct,
    factorial_moments_or_fair,
    halfnormal_scaled_moment,
    limit_convergence_report,
    moment_table,
    negbin_factorial_moment,
    raw_moments,
    scaled_central_moments,
)
from .montecarlo import (
    SimConfig,
    SimSummary,
    T1T2Report,
    WaldReport,
    XYReport,
    experiment_t1_t2,
    experiment_wald,
    experiment_xy,
    simulate,
)

__all__ = [
    "__version__",
    "CACHE_MAX_ENTRIES",
    "DomainError",
    "Polynomial",
    "Rational",
    "binomial",
    "catalan",
    "cn",
    "stirling2",
    "to_decimal",
    "DEFAULT_EPSILON",
    "CoinSpec",
    "GoalSpec",
    "Pmf",
    "StopRule",
    "pgf_sum_closed_form",
    "pmf_and",
    "pmf_or",
    "ExpectationResult",
    "Method",
    "asymptotic_balanced",
    "binomial_partial_expectation",
    "catalan_sum_or",
    "closed_form_balanced",
    "expectation_direct",
    "expectation_recurrence",
    "expected_margin",
    "ConvergenceEntry",
    "ConvergenceReport",
    "MomentTable",
    "and_factorial_moment_fair",
    "central_moments",
    "factorial_moment_or_fair",
    "factorial_moment_or_fair_direct",
    "factorial_moments_or_fair",
    "halfnormal_scaled_moment",
    "limit_convergence_report",
    "moment_table",
    "negbin_factorial_moment",
    "raw_moments",
    "scaled_central_moments",
    "SimConfig",
    "SimSummary",
    "T1T2Report",
    "WaldReport",
    "XYReport",
    "experiment_t1_t2",
    "experiment_wald",
    "experiment_xy",
    "simulate",
]
