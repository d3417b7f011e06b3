"""Chernoff tail exponents, their classical bounds, and Padé approximants.

Four exponent functions of the relative deviation ``delta`` appear in the
bounds for a sum ``X`` of independent Poisson trials:

==================  ================================  ============================
kind                exponent                          bound
==================  ================================  ============================
``PRED_UPPER``      delta - (1+delta) log(1+delta)    P(X >= (1+delta) mu)
``PRED_LOWER``      -delta - (1-delta) log(1-delta)   P(X <= (1-delta) mu)
``REG_UPPER``       -delta + log(1+delta)             E[X] >= (1+delta) mu_hat
``REG_LOWER``       delta + log(1-delta)              E[X] <= (1-delta) mu_hat
==================  ================================  ============================

Each tail probability is at most ``exp(mu * exponent)``. Every approximant
stored here is a strict upper bound on its exponent over the validated
domain, so substituting it still gives a valid (slightly looser) probability
bound while making the inversion solvable in closed form.
"""
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import DomainError, UnsupportedApproximationError
from .pade import rational_taylor

# Upper-tail approximants are checked numerically on (0, UPPER_DOMAIN_LIMIT].
UPPER_DOMAIN_LIMIT = 10.0
# Below this the closed forms lose digits to cancellation; use the Taylor series.
SERIES_CUTOFF = 0.25
_SERIES_TERMS = 40
MAX_SERIES_TERMS = 12
# Approximant values are pulled toward zero by this relative margin, which
# covers their own rounding error, so the float result stays an upper bound.
APPROX_MARGIN = 2.0 ** -46


class ExponentKind(enum.Enum):
    PRED_UPPER = "pred-upper"
    PRED_LOWER = "pred-lower"
    REG_UPPER = "reg-upper"
    REG_LOWER = "reg-lower"

    @property
    def is_upper(self) -> bool:
        return self in (ExponentKind.PRED_UPPER, ExponentKind.REG_UPPER)

    @property
    def is_prediction(self) -> bool:
        return self in (ExponentKind.PRED_UPPER, ExponentKind.PRED_LOWER)

    @classmethod
    def for_side(cls, upper: bool, prediction: bool) -> "ExponentKind":
        if prediction:
            return cls.PRED_UPPER if upper else cls.PRED_LOWER
        return cls.REG_UPPER if upper else cls.REG_LOWER


class Method(enum.Enum):
    """How a deviation is obtained: the exact exponent or one of its approximants."""

    EXACT = "exact"
    CLASSIC = "classic"
    PADE2 = "pade2"
    PADE3 = "pade3"
    PADE4 = "pade4"

    @property
    def is_approximation(self) -> bool:
        return self is not Method.EXACT


# Loosest to tightest; EXACT is the limit of the sequence.
APPROX_ORDERS = (Method.CLASSIC, Method.PADE2, Method.PADE3, Method.PADE4)


@dataclass(frozen=True)
class RationalApprox:
    """``numerator(delta) / denominator(delta)`` with integer coefficients in ascending powers."""

    kind: ExponentKind
    method: Method
    numerator: tuple
    denominator: tuple
    rederived: bool = False
    note: str = ""

    @cached_property
    def _num(self):
        return tuple(float(c) for c in self.numerator)

    @cached_property
    def _den(self):
        return tuple(float(c) for c in self.denominator)

    @property
    def domain_limit(self) -> float:
        return UPPER_DOMAIN_LIMIT if self.kind.is_upper else 1.0

    def in_domain(self, delta: float) -> bool:
        if self.kind.is_upper:
            return 0.0 < delta <= UPPER_DOMAIN_LIMIT
        return 0.0 < delta < 1.0

    def __call__(self, delta: float) -> float:
        return _horner(self._num, delta) / _horner(self._den, delta) * (1.0 - APPROX_MARGIN)

    def derivative(self, delta: float) -> float:
        p, q = _horner(self._num, delta), _horner(self._den, delta)
        dp, dq = _horner_deriv(self._num, delta), _horner_deriv(self._den, delta)
        return (dp * q - p * dq) / (q * q) * (1.0 - APPROX_MARGIN)

    def taylor(self, count: int) -> list[Fraction]:
        """Exact Taylor coefficients at 0 (constant term first)."""
        return rational_taylor(self.numerator, self.denominator, count)


def _horner(coeffs, x):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _horner_deriv(coeffs, x):
    acc = 0.0
    for i in range(len(coeffs) - 1, 0, -1):
        acc = acc * x + i * coeffs[i]
    return acc


_K = ExponentKind
_M = Method

# Integer coefficient tables, ascending powers. The quadratic rows are the
# forms -3d^2/(6+2d), -9d^2/(18-6d-d^2), -3d^2/(6+4d), -9d^2/(18-12d-d^2).
# Cubic and quartic rows were regenerated with pade.pade_coefficients and are
# cross-checked against that derivation in the test suite.
_TABLE = {
    (_K.PRED_UPPER, _M.CLASSIC): ((0, 0, -1), (2, 1), False, ""),
    (_K.PRED_LOWER, _M.CLASSIC): ((0, 0, -1), (2,), False, ""),
    (_K.PRED_UPPER, _M.PADE2): ((0, 0, -3), (6, 2), False, ""),
    (_K.PRED_LOWER, _M.PADE2): ((0, 0, -9), (18, -6, -1), False, ""),
    (_K.REG_UPPER, _M.PADE2): ((0, 0, -3), (6, 4), False, ""),
    (_K.REG_LOWER, _M.PADE2): ((0, 0, -9), (18, -12, -1), False, ""),
    (_K.PRED_UPPER, _M.PADE3): ((0, 0, -15, -7), (30, 24, 3), True, ""),
    (_K.PRED_UPPER, _M.PADE4): ((0, 0, -210, -200, -35), (420, 540, 180, 12), True, ""),
    (_K.PRED_LOWER, _M.PADE3): ((0, 0, -210, 125), (420, -390, 60, 3), True, ""),
    (_K.PRED_LOWER, _M.PADE4): (
        (0, 0, -7350, 8260, -1975), (14700, -21420, 8640, -780, -18), True, "",
    ),
    (_K.REG_UPPER, _M.PADE3): (
        (0, 0, -15, -8), (30, 36, 9), True,
        "[1/2] form of exponent/d^2; the [1/3] Padé form lies below the exponent for all d > 0",
    ),
    (_K.REG_UPPER, _M.PADE4): ((0, 0, -210, -220, -45), (420, 720, 360, 48), True, ""),
    (_K.REG_LOWER, _M.PADE3): (
        (0, 0, -240, 155), (480, -630, 180, 3), True,
        "denominator cubic coefficient is 3 (with a 1 the series match stops at d^5)",
    ),
    (_K.REG_LOWER, _M.PADE4): (
        (0, 0, -3150, 3780, -985), (6300, -11760, 6660, -1080, -6), True,
        "sign-normalised so the constant denominator term is positive",
    ),
}

_APPROX = {
    key: RationalApprox(key[0], key[1], num, den, rederived, note)
    for key, (num, den, rederived, note) in _TABLE.items()
}


def supported_pairs():
    """All (kind, method) pairs that have an approximant table."""
    return list(_APPROX)


def pade_table(kind: ExponentKind, method: Method) -> RationalApprox:
    try:
        return _APPROX[(kind, method)]
    except KeyError:
        raise UnsupportedApproximationError(
            f"no {method.value} approximant for {kind.value}") from None


def series_coefficients(kind: ExponentKind, count: int, exact: bool = False) -> list:
    """First ``count`` Taylor coefficients of the exact exponent at 0.

    Returns floats, or :class:`~fractions.Fraction` values when ``exact`` is set.
    """
    if not 1 <= count <= MAX_SERIES_TERMS:
        raise ValueError(f"count must be in [1, {MAX_SERIES_TERMS}], got {count}")
    out = _series(kind, count)
    return out if exact else [float(c) for c in out]


def _series(kind, count):
    out = []
    for k in range(count):
        if k < 2:
            c = Fraction(0)
        elif kind is ExponentKind.PRED_UPPER:
            c = Fraction(-(-1) ** k, k * (k - 1))
        elif kind is ExponentKind.PRED_LOWER:
            c = Fraction(-1, k * (k - 1))
        elif kind is ExponentKind.REG_UPPER:
            c = Fraction((-1) ** (k + 1), k)
        else:
            c = Fraction(-1, k)
        out.append(c)
    return out


_SERIES = {kind: [float(c) for c in _series(kind, _SERIES_TERMS)] for kind in ExponentKind}


def _check_delta(kind: ExponentKind, delta: float) -> float:
    delta = float(delta)
    if not math.isfinite(delta) or delta <= 0.0:
        raise DomainError(f"delta must be positive and finite, got {delta!r}")
    if kind is ExponentKind.PRED_LOWER:
        # (1 - d) log(1 - d) -> 0, so the exponent extends continuously to d = 1
        if delta > 1.0:
            raise DomainError(f"{kind.value} requires delta <= 1, got {delta!r}")
    elif not kind.is_upper and delta >= 1.0:
        raise DomainError(f"{kind.value} requires delta < 1, got {delta!r}")
    return delta


def _exact(kind: ExponentKind, d: float) -> float:
    # unchecked; accepts d = 0 for bracketing
    if d < SERIES_CUTOFF:
        return _horner(_SERIES[kind], d)
    if kind is ExponentKind.PRED_UPPER:
        return d - (1.0 + d) * math.log1p(d)
    if kind is ExponentKind.PRED_LOWER:
        return -1.0 if d == 1.0 else -d - (1.0 - d) * math.log1p(-d)
    if kind is ExponentKind.REG_UPPER:
        return math.log1p(d) - d
    return d + math.log1p(-d)


def _exact_derivative(kind: ExponentKind, d: float) -> float:
    if kind is ExponentKind.PRED_UPPER:
        return -math.log1p(d)
    if kind is ExponentKind.PRED_LOWER:
        return -math.inf if d == 1.0 else math.log1p(-d)
    if kind is ExponentKind.REG_UPPER:
        return -d / (1.0 + d)
    return -d / (1.0 - d)


def exact_exponent(kind: ExponentKind, delta: float) -> float:
    """Exact Chernoff exponent; strictly negative and decreasing for delta > 0."""
    return _exact(kind, _check_delta(kind, delta))


def exact_derivative(kind: ExponentKind, delta: float) -> float:
    return _exact_derivative(kind, _check_delta(kind, delta))


def approx_exponent(kind: ExponentKind, method: Method, delta: float) -> float:
    """Value of the ``method`` approximant, an upper bound on :func:`exact_exponent`."""
    table = pade_table(kind, method)
    delta = _check_delta(kind, delta)
    if not table.in_domain(delta):
        raise DomainError(
            f"delta={delta!r} outside the validated domain (0, {table.domain_limit}] "
            f"of the {method.value} approximant for {kind.value}")
    return table(delta)


def exponent(kind: ExponentKind, method: Method, delta: float) -> float:
    """Dispatch to :func:`exact_exponent` or :func:`approx_exponent`."""
    if method is Method.EXACT:
        return exact_exponent(kind, delta)
    return approx_exponent(kind, method, delta)
