import mpmath
import numpy as np
import pytest

from chernoff_inversion.exponents import ExponentKind, pade_table

LOWER_GRID = np.arange(1, 1000) / 1000.0          # 0.001 .. 0.999
UPPER_GRID = np.arange(1, 10001) / 1000.0         # 0.001 .. 10.000

DEFAULT_GAMMAS = (0.05, 0.01, 0.000000002, 5.421e-20)


def grid_for(kind):
    return UPPER_GRID if kind.is_upper else LOWER_GRID


def mp_exact(kind, d):
    """High-precision exact exponent, independent of the float implementation."""
    d = mpmath.mpf(d)
    if kind is ExponentKind.PRED_UPPER:
        return d - (1 + d) * mpmath.log1p(d)
    if kind is ExponentKind.PRED_LOWER:
        return -d - (1 - d) * mpmath.log1p(-d)
    if kind is ExponentKind.REG_UPPER:
        return -d + mpmath.log1p(d)
    return d + mpmath.log1p(-d)


def mp_approx(kind, method, d):
    t = pade_table(kind, method)
    d = mpmath.mpf(d)
    num = sum(mpmath.mpf(c) * d ** i for i, c in enumerate(t.numerator))
    den = sum(mpmath.mpf(c) * d ** i for i, c in enumerate(t.denominator))
    return num / den


@pytest.fixture(autouse=True)
def _mp_precision():
    with mpmath.workdps(40):
        yield


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
