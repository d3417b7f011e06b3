"""Inversion of Chernoff tail bounds for sums of independent Poisson trials."""
from .errors import ConvergenceError, DomainError, InfeasibleBoundError, UnsupportedApproximationError
from .exponents import (
    ExponentKind,
    Method,
    RationalApprox,
    approx_exponent,
    exact_exponent,
    pade_table,
    series_coefficients,
)
from .intervals import (
    BoundQuery,
    IntervalResult,
    Mode,
    Side,
    confidence_interval,
    exceptional_mu_range,
    tail_bounds,
)
from .inversion import (
    DeltaResult,
    beta_from,
    invert,
    invert_classic,
    invert_exact,
    invert_pade_numeric,
    invert_theorem1,
    invert_theorem2,
    solve_quadratic_stable,
)
from .oracle import (
    TailCheckReport,
    TrialModel,
    binomial_tail_lower,
    binomial_tail_upper,
    check_conservative,
    simulate_tail_frequency,
)

__version__ = "0.1.0"
