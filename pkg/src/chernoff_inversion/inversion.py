"""Solve ``exponent(delta) = beta`` for the deviation ``delta``.

``beta = log(gamma) / mu`` is the normalised log tail level and is always
negative. Quadratic approximants invert in closed form; the exact exponent
and the cubic/quartic approximants go through a safeguarded Newton iteration.
Every solver returns the root on the certified side, i.e. a ``delta`` with
``exponent(delta) <= beta`` up to rounding.
"""
import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, InfeasibleBoundError
from .exponents import (
    UPPER_DOMAIN_LIMIT,
    ExponentKind,
    Method,
    _exact,
    _exact_derivative,
    pade_table,
)

DEFAULT_TOL = 1e-12
MAX_ITER = 200
# Upper-kind exact roots are searched by doubling up to this bound.
_MAX_UPPER_BRACKET = 2.0 ** 64
_EPS = 2.0 ** -52
_STALL = 1e-12


@dataclass(frozen=True)
class DeltaResult:
    """A solved deviation factor.

    ``residual`` is ``exponent(delta) - beta`` for iterative methods and the
    signed value of the defining quadratic at ``delta`` for closed forms.
    ``in_domain`` is False when a closed form lands outside the region where
    its approximant is known to bound the exact exponent.
    """

    delta: float
    kind: ExponentKind
    method: Method
    beta: float
    residual: float
    in_domain: bool = True
    iterations: int = 0


def beta_from(mu: float, gamma: float | None = None, log_gamma: float | None = None) -> float:
    """Normalised log level ``log(gamma) / mu``; pass ``log_gamma`` to skip the log."""
    if (gamma is None) == (log_gamma is None):
        raise ValueError("supply exactly one of gamma or log_gamma")
    mu = float(mu)
    if not (math.isfinite(mu) and mu > 0):
        raise DomainError(f"mu must be positive and finite, got {mu!r}")
    if gamma is not None:
        gamma = float(gamma)
        if not 0.0 < gamma < 1.0:
            raise DomainError(f"gamma must lie in (0, 1), got {gamma!r}")
        log_gamma = math.log(gamma)
    log_gamma = float(log_gamma)
    if not (math.isfinite(log_gamma) and log_gamma < 0):
        raise DomainError(f"log_gamma must be negative and finite, got {log_gamma!r}")
    return log_gamma / mu


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta >= 0.0:
        raise DomainError(f"beta must be negative and finite, got {beta!r}")
    return beta


def solve_quadratic_stable(a: float, b: float, c: float) -> tuple[float, float]:
    """Both real roots of ``a x^2 + b x + c``, smaller first.

    Uses ``q = -(b + sign(b) sqrt(disc)) / 2`` and returns ``q/a`` and ``c/q``,
    which avoids subtracting nearly equal numbers when ``|4ac| << b^2``.
    """
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    disc = b * b - 4.0 * a * c
    if disc < 0:
        raise ValueError(f"negative discriminant {disc!r}")
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    if q == 0.0:
        return 0.0, 0.0
    r1, r2 = q / a, c / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


# (a, b, c) of the quadratic whose positive root is the closed-form delta.
def _quadratic(kind: ExponentKind, method: Method, beta: float) -> tuple[float, float, float]:
    if method is Method.CLASSIC:
        if kind is ExponentKind.PRED_UPPER:
            return 1.0, beta, 2.0 * beta
        if kind is ExponentKind.PRED_LOWER:
            return 1.0, 0.0, 2.0 * beta
    elif method is Method.PADE2:
        if kind is ExponentKind.PRED_UPPER:
            return 3.0, 2.0 * beta, 6.0 * beta
        if kind is ExponentKind.PRED_LOWER:
            return 9.0 - beta, -6.0 * beta, 18.0 * beta
        if kind is ExponentKind.REG_UPPER:
            return 3.0, 4.0 * beta, 6.0 * beta
        return 9.0 - beta, -12.0 * beta, 18.0 * beta
    # raises the standard error for the pair
    pade_table(kind, method)
    raise DomainError(f"{method.value} has no closed-form inversion")


def _closed_form(kind: ExponentKind, method: Method, beta: float) -> DeltaResult:
    beta = _check_beta(beta)
    a, b, c = _quadratic(kind, method, beta)
    small, large = solve_quadratic_stable(a, b, c)
    # c/a < 0 for beta < 0, so the roots straddle zero
    assert small < 0.0 < large, (small, large)
    residual = (a * large + b) * large + c
    return DeltaResult(large, kind, method, beta, residual,
                       in_domain=pade_table(kind, method).in_domain(large))


def invert_classic(kind: ExponentKind, beta: float) -> DeltaResult:
    """Positive root of the classical quadratics ``d^2 + beta d + 2 beta`` / ``d^2 + 2 beta``."""
    return _closed_form(kind, Method.CLASSIC, beta)


def invert_theorem1(kind: ExponentKind, beta: float) -> DeltaResult:
    """Closed-form prediction deviation from the quadratic Padé exponents."""
    if not kind.is_prediction:
        raise DomainError(f"prediction inversion needs a prediction kind, got {kind.value}")
    return _closed_form(kind, Method.PADE2, beta)


def invert_theorem2(kind: ExponentKind, beta: float) -> DeltaResult:
    """Closed-form confidence-interval deviation from the quadratic Padé exponents."""
    if kind.is_prediction:
        raise DomainError(f"regression inversion needs a regression kind, got {kind.value}")
    return _closed_form(kind, Method.PADE2, beta)


def _solve_decreasing(f, df, target, lo, hi, x0, tol):
    """Newton with a bisection safeguard for a decreasing f, f(lo) > target >= f(hi).

    Returns ``(x, f(x) - target, iterations)`` with ``f(x) <= target``.
    """
    fhi = f(hi) - target
    x = x0 if lo < x0 < hi else 0.5 * (lo + hi)
    newton = True
    for it in range(1, MAX_ITER + 1):
        fx = f(x) - target
        if fx > 0.0:
            lo = x
        else:
            hi, fhi = x, fx
            if fx == 0.0:
                return x, fx, it
        if hi - lo <= 2.0 * _EPS * hi:
            return hi, fhi, it
        xn = math.nan
        if newton:
            d = df(x)
            step = fx / d if d != 0.0 and math.isfinite(d) else math.nan
            if abs(step) <= _STALL * x and abs(fx) <= tol:
                # converged to rounding level; f may be flat over many ulps here,
                # so close the bracket by bisection
                newton = False
            else:
                xn = x - step
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        x = xn
    raise ConvergenceError(f"no convergence within {MAX_ITER} iterations")


def _iterative(kind: ExponentKind, method: Method, beta: float, tol: float) -> DeltaResult:
    beta = _check_beta(beta)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if method is Method.EXACT:
        f = lambda d: _exact(kind, d)  # noqa: E731
        df = lambda d: _exact_derivative(kind, d)  # noqa: E731
        upper_cap = _MAX_UPPER_BRACKET
    else:
        table = pade_table(kind, method)
        f, df = table, table.derivative
        upper_cap = UPPER_DOMAIN_LIMIT

    lo = 0.0
    if kind.is_upper:
        hi = min(1.0, upper_cap)
        while f(hi) > beta:
            if hi >= upper_cap:
                raise InfeasibleBoundError(
                    f"{method.value} root for {kind.value} at beta={beta!r} lies beyond "
                    f"delta={upper_cap:g}", side="upper")
            lo, hi = hi, min(2.0 * hi, upper_cap)
    else:
        exact_pred = method is Method.EXACT and kind is ExponentKind.PRED_LOWER
        hi = 1.0 if exact_pred else math.nextafter(1.0, 0.0)
        if f(hi) > beta:
            raise InfeasibleBoundError(
                f"{kind.value} cannot certify beta={beta!r} with delta < 1 "
                f"(exponent infimum ~ {f(hi):.6g})", side="lower")

    # The quadratic Padé root is a cheap, close starting point.
    x0 = _closed_form(kind, Method.PADE2, beta).delta
    delta, residual, its = _solve_decreasing(f, df, beta, lo, hi, x0, tol)
    # near a pole of the derivative adjacent floats can straddle beta by more than tol
    if abs(residual) > max(tol, 4.0 * _EPS * delta * abs(df(delta))):
        raise ConvergenceError(
            f"residual {residual!r} exceeds tol={tol!r} at delta={delta!r} ({kind.value})")
    return DeltaResult(delta, kind, method, beta, residual, True, its)


def invert_exact(kind: ExponentKind, beta: float, tol: float = DEFAULT_TOL) -> DeltaResult:
    """Root of the exact transcendental exponent equation."""
    return _iterative(kind, Method.EXACT, beta, tol)


def invert_pade_numeric(kind: ExponentKind, method: Method, beta: float,
                        tol: float = DEFAULT_TOL) -> DeltaResult:
    """Root of a cubic or quartic approximant by the same safeguarded iteration."""
    if method not in (Method.PADE3, Method.PADE4):
        raise DomainError(f"numeric Padé inversion is for pade3/pade4, got {method.value}")
    return _iterative(kind, method, beta, tol)


def invert(kind: ExponentKind, method: Method, beta: float, tol: float = DEFAULT_TOL) -> DeltaResult:
    """Dispatch to the solver appropriate for ``method``."""
    if method is Method.EXACT:
        return invert_exact(kind, beta, tol)
    if method is Method.CLASSIC:
        return invert_classic(kind, beta)
    if method is Method.PADE2:
        return _closed_form(kind, Method.PADE2, beta)
    return invert_pade_numeric(kind, method, beta, tol)
