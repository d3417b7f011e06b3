"""Exact-rational Padé tooling used to derive and audit the approximant tables.

Everything here works on :class:`fractions.Fraction` so that coefficient
identities can be checked without rounding. Runtime evaluation of the
approximants lives in :mod:`chernoff_inversion.exponents` and uses floats.
"""
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def rational_taylor(numerator: Sequence, denominator: Sequence, count: int) -> list[Fraction]:
    """Taylor coefficients at 0 of ``numerator / denominator`` by long division.

    Both polynomials are given in ascending powers. ``denominator[0]`` must be
    nonzero.
    """
    num = [Fraction(c) for c in numerator]
    den = [Fraction(c) for c in denominator]
    if not den or den[0] == 0:
        raise ValueError("denominator must have a nonzero constant term")
    out: list[Fraction] = []
    for k in range(count):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / den[0])
    return out


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rhs)
    a = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular Padé system (degenerate degree choice)")
        a[col], a[pivot] = a[pivot], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def pade_coefficients(series: Sequence, num_degree: int, den_degree: int,
                      shift: int = 0) -> tuple[list[Fraction], list[Fraction]]:
    """Padé approximant of ``x**shift * g(x)`` from the Taylor series of the full function.

    ``series`` holds coefficients of the full function (constant first). The
    first ``shift`` entries must be zero; the [num_degree/den_degree] Padé
    approximant of the quotient ``g`` is built and multiplied back by
    ``x**shift``. The denominator is normalised to a unit constant term.
    """
    c = [Fraction(v) for v in series]
    if any(v != 0 for v in c[:shift]):
        raise ValueError("leading coefficients do not vanish to the requested shift")
    g = c[shift:]
    need = num_degree + den_degree + 1
    if len(g) < need:
        raise ValueError(f"need {need + shift} series coefficients, got {len(c)}")

    def coef(i):
        return g[i] if i >= 0 else Fraction(0)

    # q_1..q_M from sum_j q_j g_{k-j} = -g_k for k = L+1..L+M
    matrix = [[coef(k - j) for j in range(1, den_degree + 1)]
              for k in range(num_degree + 1, num_degree + den_degree + 1)]
    rhs = [-coef(k) for k in range(num_degree + 1, num_degree + den_degree + 1)]
    q = [Fraction(1)] + (_solve_exact(matrix, rhs) if den_degree else [])
    p = [sum((q[j] * coef(k - j) for j in range(0, min(k, den_degree) + 1)), Fraction(0))
         for k in range(num_degree + 1)]
    return [Fraction(0)] * shift + p, q


def to_integer_coefficients(numerator: Sequence, denominator: Sequence) -> tuple[list[int], list[int]]:
    """Clear denominators and common factors; the constant denominator term is made positive."""
    num = [Fraction(v) for v in numerator]
    den = [Fraction(v) for v in denominator]
    scale = lcm(*(v.denominator for v in num + den))
    ints = [int(v * scale) for v in num + den]
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = g or 1
    if den[0] < 0:
        g = -g
    ints = [v // g for v in ints]
    return ints[:len(num)], ints[len(num):]


def same_rational(num_a: Sequence, den_a: Sequence, num_b: Sequence, den_b: Sequence) -> bool:
    """True when num_a/den_a and num_b/den_b are the same rational function."""
    def mul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += Fraction(x) * Fraction(y)
        return out

    lhs, rhs = mul(num_a, den_b), mul(num_b, den_a)
    size = max(len(lhs), len(rhs))
    lhs += [Fraction(0)] * (size - len(lhs))
    rhs += [Fraction(0)] * (size - len(rhs))
    return lhs == rhs


def matching_order(series: Sequence, numerator: Sequence, denominator: Sequence) -> int:
    """Index of the first Taylor coefficient where the rational and the series differ.

    Returns ``len(series)`` if they agree on every supplied coefficient. A
    return value of ``m`` means the difference is O(x**m).
    """
    approx = rational_taylor(numerator, denominator, len(series))
    for i, (a, b) in enumerate(zip(approx, series)):
        if Fraction(a) != Fraction(b):
            return i
    return len(series)
