import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from chernoff_inversion import DomainError, UnsupportedApproximationError
from chernoff_inversion.exponents import (
    APPROX_ORDERS,
    ExponentKind,
    Method,
    approx_exponent,
    exact_derivative,
    exact_exponent,
    exponent,
    pade_table,
    series_coefficients,
    supported_pairs,
)
from chernoff_inversion.pade import matching_order
from conftest import LOWER_GRID, grid_for, mp_approx, mp_exact

K, M = ExponentKind, Method
APPROX_PAIRS = [(k, m) for k, m in supported_pairs()]


def _id(pair):
    return f"{pair[0].value}-{pair[1].value}"


# ---- examples -------------------------------------------------------------

def test_exact_examples():
    assert exact_exponent(K.PRED_UPPER, 1.0) == pytest.approx(1 - 2 * math.log(2), rel=1e-15)
    assert exact_exponent(K.REG_LOWER, 0.5) == pytest.approx(
        float(mpmath.mpf("0.5") + mpmath.log(mpmath.mpf("0.5"))), rel=1e-15)


def test_exact_leading_behaviour_near_zero():
    for d in (1e-3, 1e-5, 1e-8):
        assert exact_exponent(K.PRED_UPPER, d) / (-d * d / 2) == pytest.approx(1, abs=2 * d)


def test_approx_examples():
    assert approx_exponent(K.PRED_UPPER, M.PADE2, 0.5) == pytest.approx(-3 / 28, rel=1e-13)
    assert approx_exponent(K.PRED_LOWER, M.PADE2, 0.5) == pytest.approx(-2.25 / 14.75, rel=1e-13)
    assert approx_exponent(K.REG_UPPER, M.PADE2, 0.5) == pytest.approx(-0.09375, rel=1e-13)
    p3 = approx_exponent(K.PRED_UPPER, M.PADE3, 0.5)
    assert exact_exponent(K.PRED_UPPER, 0.5) < p3 < approx_exponent(K.PRED_UPPER, M.PADE2, 0.5)


def test_series_examples():
    F = Fraction
    assert series_coefficients(K.PRED_UPPER, 5, exact=True) == [0, 0, F(-1, 2), F(1, 6), F(-1, 12)]
    assert series_coefficients(K.REG_LOWER, 5, exact=True) == [0, 0, F(-1, 2), F(-1, 3), F(-1, 4)]
    assert series_coefficients(K.PRED_LOWER, 3) == [0.0, 0.0, -0.5]
    # second nonzero term of the lower prediction series
    assert series_coefficients(K.PRED_LOWER, 4, exact=True)[3] == F(-1, 6)


def test_series_against_sympy():
    import sympy as sp
    x = sp.symbols("x")
    forms = {
        K.PRED_UPPER: x - (1 + x) * sp.log(1 + x),
        K.PRED_LOWER: -x - (1 - x) * sp.log(1 - x),
        K.REG_UPPER: -x + sp.log(1 + x),
        K.REG_LOWER: x + sp.log(1 - x),
    }
    for kind, f in forms.items():
        s = sp.series(f, x, 0, 12).removeO()
        want = [Fraction(int(sp.Rational(s.coeff(x, i)).p), int(sp.Rational(s.coeff(x, i)).q))
                for i in range(12)]
        assert series_coefficients(kind, 12, exact=True) == want


def test_pade_table_examples():
    assert pade_table(K.PRED_UPPER, M.PADE2).numerator == (0, 0, -3)
    assert pade_table(K.PRED_UPPER, M.PADE2).denominator == (6, 2)
    assert pade_table(K.PRED_LOWER, M.PADE2).denominator == (18, -6, -1)
    assert pade_table(K.REG_LOWER, M.PADE2).numerator == (0, 0, -9)
    assert pade_table(K.REG_LOWER, M.PADE2).denominator == (18, -12, -1)
    # cubic numerator -15x^2 - 7x^3
    assert pade_table(K.PRED_UPPER, M.PADE3).numerator == (0, 0, -15, -7)


def test_classic_only_for_prediction():
    for kind in (K.REG_UPPER, K.REG_LOWER):
        with pytest.raises(UnsupportedApproximationError):
            pade_table(kind, M.CLASSIC)
        with pytest.raises(UnsupportedApproximationError):
            approx_exponent(kind, M.CLASSIC, 0.1)


def test_rederived_notes_present():
    assert pade_table(K.REG_UPPER, M.PADE3).rederived
    assert "[1/3]" in pade_table(K.REG_UPPER, M.PADE3).note
    assert not pade_table(K.PRED_UPPER, M.PADE2).rederived


# ---- series consistency ---------------------------------------------------

SERIES_ORDER = {
    (K.PRED_UPPER, M.PADE2): 4,
    (K.REG_UPPER, M.PADE2): 4,
    (K.PRED_LOWER, M.PADE2): 5,
    (K.REG_LOWER, M.PADE2): 5,
}


@pytest.mark.parametrize("pair", APPROX_PAIRS, ids=_id)
def test_series_consistency(pair):
    kind, method = pair
    series = series_coefficients(kind, 12, exact=True)
    t = pade_table(kind, method)
    order = matching_order(series, t.numerator, t.denominator)
    if method is M.CLASSIC:
        assert order >= 3
    elif method is M.PADE2:
        assert order == SERIES_ORDER[pair]
    else:
        lower = SERIES_ORDER[(kind, M.PADE2)]
        assert order > lower
        if method is M.PADE4:
            p3 = pade_table(kind, M.PADE3)
            assert order > matching_order(series, p3.numerator, p3.denominator)


def test_taylor_method_matches_series_prefix():
    t = pade_table(K.PRED_LOWER, M.PADE2)
    assert t.taylor(5) == series_coefficients(K.PRED_LOWER, 5, exact=True)
    assert t.taylor(6)[5] != series_coefficients(K.PRED_LOWER, 6, exact=True)[5]


# ---- domination and ordering ---------------------------------------------

@pytest.mark.parametrize("pair", APPROX_PAIRS, ids=_id)
def test_domination_float(pair):
    kind, method = pair
    grid = grid_for(kind)
    ex = np.array([exact_exponent(kind, d) for d in grid])
    ap = np.array([approx_exponent(kind, method, d) for d in grid])
    assert np.all(ex < ap)
    assert np.all(ap < 0)


@pytest.mark.parametrize("pair", APPROX_PAIRS, ids=_id)
def test_domination_high_precision(pair):
    # the unrounded tables against the exact exponent at 40 digits
    kind, method = pair
    for d in grid_for(kind)[::3]:
        d = mpmath.mpf(float(d))
        assert mp_exact(kind, d) < mp_approx(kind, method, d) < 0


@pytest.mark.parametrize("kind", list(K), ids=lambda k: k.value)
def test_ordering_of_methods_high_precision(kind):
    methods = [m for m in APPROX_ORDERS if (kind, m) in supported_pairs()]
    for d in grid_for(kind)[::7]:
        vals = [mp_approx(kind, m, float(d)) for m in methods] + [mp_exact(kind, float(d))]
        assert all(a > b for a, b in zip(vals, vals[1:])), (d, vals)


@pytest.mark.parametrize("kind", list(K), ids=lambda k: k.value)
def test_ordering_of_methods_float(kind):
    methods = [m for m in APPROX_ORDERS if (kind, m) in supported_pairs()]
    for d in grid_for(kind)[::7]:
        vals = [approx_exponent(kind, m, d) for m in methods] + [exact_exponent(kind, d)]
        assert all(a >= b for a, b in zip(vals, vals[1:])), (d, vals)


@pytest.mark.parametrize("kind", [K.PRED_UPPER, K.PRED_LOWER], ids=lambda k: k.value)
def test_pade2_tighter_than_classic(kind):
    for d in LOWER_GRID:
        assert approx_exponent(kind, M.PADE2, d) < approx_exponent(kind, M.CLASSIC, d)


@pytest.mark.parametrize("pair", APPROX_PAIRS + [(k, M.EXACT) for k in K], ids=_id)
def test_strictly_decreasing(pair):
    kind, method = pair
    vals = np.array([exponent(kind, method, d) for d in grid_for(kind)])
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("kind", list(K), ids=lambda k: k.value)
def test_exact_accuracy_against_mpmath(kind):
    # includes the series branch and the switch-over to the log form
    pts = np.concatenate([np.logspace(-12, -1, 60), grid_for(kind)[::37]])
    for d in pts:
        got = exact_exponent(kind, d)
        want = mp_exact(kind, float(d))
        assert abs(got - want) <= 32 * math.ulp(got), d


@pytest.mark.parametrize("kind", list(K), ids=lambda k: k.value)
def test_exact_derivative_matches_finite_difference(kind):
    for d in (0.01, 0.3, 0.7):
        want = mpmath.diff(lambda t: mp_exact(kind, t), d)
        assert exact_derivative(kind, d) == pytest.approx(float(want), rel=1e-12)


@pytest.mark.parametrize("pair", APPROX_PAIRS, ids=_id)
def test_approx_derivative(pair):
    kind, method = pair
    t = pade_table(kind, method)
    for d in (0.05, 0.4, 0.9):
        want = mpmath.diff(lambda s: mp_approx(kind, method, s), d)
        assert t.derivative(d) == pytest.approx(float(want), rel=1e-12)


# ---- domain handling -----------------------------------------------------

@pytest.mark.parametrize("bad", [0.0, -0.1, math.nan, math.inf])
def test_rejects_nonpositive_delta(bad):
    with pytest.raises(DomainError):
        exact_exponent(K.PRED_UPPER, bad)


def test_lower_kinds_capped_at_one():
    with pytest.raises(DomainError):
        exact_exponent(K.REG_LOWER, 1.0)
    with pytest.raises(DomainError):
        exact_exponent(K.PRED_LOWER, 1.0 + 1e-9)
    # continuous extension: P(X <= 0) <= exp(-mu)
    assert exact_exponent(K.PRED_LOWER, 1.0) == -1.0
    with pytest.raises(DomainError):
        approx_exponent(K.PRED_LOWER, M.PADE2, 1.0)


def test_upper_approximants_limited_to_ten():
    assert approx_exponent(K.PRED_UPPER, M.PADE2, 10.0) < 0
    with pytest.raises(DomainError):
        approx_exponent(K.PRED_UPPER, M.PADE2, 10.5)
    # the exact exponent has no such limit
    assert exact_exponent(K.PRED_UPPER, 1e6) < 0


def test_exponent_dispatch():
    assert exponent(K.REG_UPPER, M.EXACT, 0.3) == exact_exponent(K.REG_UPPER, 0.3)
    assert exponent(K.REG_UPPER, M.PADE4, 0.3) == approx_exponent(K.REG_UPPER, M.PADE4, 0.3)


def test_series_count_limits():
    with pytest.raises(ValueError):
        series_coefficients(K.PRED_UPPER, 0)
    with pytest.raises(ValueError):
        series_coefficients(K.PRED_UPPER, 13)


def test_for_side():
    assert K.for_side(True, True) is K.PRED_UPPER
    assert K.for_side(False, False) is K.REG_LOWER
    assert K.REG_UPPER.is_upper and not K.REG_UPPER.is_prediction
