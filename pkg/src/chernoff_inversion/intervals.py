"""Tail-bound statements and conservative confidence intervals.

Prediction mode takes the known mean ``mu`` of a sum of Poisson trials and
returns thresholds the sum exceeds with probability below ``gamma``.
Regression mode takes an observed sum ``mu_hat`` and returns an interval for
the unknown mean with confidence at least ``1 - gamma`` per side.
"""
import enum
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import InfeasibleBoundError
from .exponents import ExponentKind, Method
from .inversion import DEFAULT_TOL, DeltaResult, beta_from, invert


class Side(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"
    TWO_SIDED = "two-sided"
    SYMMETRIC = "symmetric"

    @property
    def two_sided(self) -> bool:
        return self in (Side.TWO_SIDED, Side.SYMMETRIC)


class Mode(enum.Enum):
    PREDICTION = "prediction"
    REGRESSION = "regression"


@dataclass(frozen=True)
class BoundQuery:
    """A validated request. Supply ``mu`` (prediction) or ``mu_hat`` (regression), and
    ``gamma`` or ``log_gamma``."""

    gamma: float | None = None
    mu: float | None = None
    mu_hat: float | None = None
    method: Method = Method.PADE2
    side: Side = Side.TWO_SIDED
    log_gamma: float | None = None

    def __post_init__(self):
        if (self.mu is None) == (self.mu_hat is None):
            raise ValueError("supply exactly one of mu (prediction) or mu_hat (regression)")
        if self.mode is Mode.REGRESSION and self.method is Method.CLASSIC:
            raise ValueError("the classic method exists only in prediction mode")
        # validates gamma/log_gamma and the mean
        object.__setattr__(self, "_beta", beta_from(self.mean, self.gamma, self.log_gamma))

    @property
    def mode(self) -> Mode:
        return Mode.PREDICTION if self.mu is not None else Mode.REGRESSION

    @property
    def mean(self) -> float:
        return self.mu if self.mu is not None else self.mu_hat

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def log_level(self) -> float:
        return self.log_gamma if self.log_gamma is not None else math.log(self.gamma)


@dataclass(frozen=True)
class IntervalResult:
    """Endpoints in count units plus the deviations that produced them.

    A missing side has ``delta_* = None`` and an infinite endpoint. For the
    symmetric variant ``delta_l`` is the upper deviation reused.
    """

    delta_u: DeltaResult | None
    delta_l: DeltaResult | None
    lower_endpoint: float
    upper_endpoint: float
    confidence: float
    mode: Mode
    side: Side
    method: Method
    mean: float

    @property
    def upper_threshold(self) -> int | None:
        """Smallest integer count in the exceptional upper tail (ceil of the endpoint)."""
        return math.ceil(self.upper_endpoint) if math.isfinite(self.upper_endpoint) else None

    @property
    def lower_threshold(self) -> int | None:
        """Largest integer count in the exceptional lower tail (floor of the endpoint)."""
        return math.floor(self.lower_endpoint) if math.isfinite(self.lower_endpoint) else None

    @property
    def count_bounds(self) -> tuple[int | None, int | None]:
        """Inclusive integer range left after removing both exceptional tails."""
        lo = self.lower_threshold + 1 if self.lower_threshold is not None else None
        hi = self.upper_threshold - 1 if self.upper_threshold is not None else None
        return lo, hi


def _solve_side(query: BoundQuery, upper: bool, tol: float) -> DeltaResult:
    kind = ExponentKind.for_side(upper, query.mode is Mode.PREDICTION)
    side = "upper" if upper else "lower"
    try:
        result = invert(kind, query.method, query.beta, tol)
    except InfeasibleBoundError as exc:
        raise InfeasibleBoundError(f"{side} side: {exc}", side=side) from exc
    if not result.in_domain:
        raise InfeasibleBoundError(
            f"{side} side: {query.method.value} gives delta={result.delta:.6g}, outside the "
            f"validated domain of the {kind.value} approximant", side=side)
    return result


def _assemble(query: BoundQuery, tol: float) -> IntervalResult:
    side = query.side
    du = _solve_side(query, True, tol) if side is not Side.LOWER else None
    if side is Side.SYMMETRIC:
        dl = du
    elif side is Side.UPPER:
        dl = None
    else:
        dl = _solve_side(query, False, tol)
    mean = query.mean
    upper = (1.0 + du.delta) * mean if du is not None else math.inf
    lower = (1.0 - dl.delta) * mean if dl is not None else -math.inf
    gamma = math.exp(query.log_level)
    confidence = 1.0 - 2.0 * gamma if side.two_sided else 1.0 - gamma
    return IntervalResult(du, dl, lower, upper, confidence, query.mode, side, query.method, mean)


def tail_bounds(query: BoundQuery, tol: float = DEFAULT_TOL) -> IntervalResult:
    """Thresholds with P(X >= upper) < gamma and P(X <= lower) < gamma for E[X] = mu."""
    if query.mode is not Mode.PREDICTION:
        raise ValueError("tail_bounds needs a prediction query (mu)")
    return _assemble(query, tol)


def confidence_interval(query: BoundQuery, tol: float = DEFAULT_TOL) -> IntervalResult:
    """Conservative interval for E[X] given an observed sum mu_hat."""
    if query.mode is not Mode.REGRESSION:
        raise ValueError("confidence_interval needs a regression query (mu_hat)")
    return _assemble(query, tol)


def exceptional_mu_range(gamma: float, mu_hat: float, tol: float = 1e-13) -> tuple[float, float]:
    """Exact-method interval endpoints found directly in mean space.

    Both endpoints solve ``mu_hat - m + mu_hat * log(m / mu_hat) = log(gamma)``,
    one on each side of ``mu_hat``: the means under which the observation
    would be a ``gamma``-rare event. This is an independent route to the exact
    row of :func:`confidence_interval`. The search runs over ``t = log(m / mu_hat)``
    so both endpoints come out with relative accuracy ``tol``.
    """
    beta = beta_from(mu_hat, gamma)

    # g(t) / mu_hat with m = mu_hat * exp(t); decreasing away from t = 0
    def g(t):
        return t - math.expm1(t) - beta

    kw = dict(xtol=tol, rtol=4.0 * 2.0 ** -52, maxiter=500)
    roots = []
    for step in (-1.0, 1.0):
        far = step
        while g(far) > 0:
            far *= 2.0
        a, b = sorted((0.0, far))
        roots.append(float(mu_hat) * math.exp(brentq(g, a, b, **kw)))
    return roots[0], roots[1]
