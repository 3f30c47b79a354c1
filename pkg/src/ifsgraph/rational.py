"""Exact rational vector/matrix helpers and certified square-root bounds.

Everything in this module operates on ``fractions.Fraction`` values so that
map-equality decisions and separation certificates are exact.  Square roots
of rationals are generally irrational; :func:`sqrt_lower` / :func:`sqrt_upper`
return rational bounds that are exact whenever the argument is a perfect
square of a rational.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

#: relative slack (as a power of two) used when rounding irrational roots
SQRT_SLACK_BITS = 32


def vec(values: Sequence) -> Vec:
    return tuple(Fraction(v) for v in values)


def mat(rows: Sequence[Sequence]) -> Mat:
    return tuple(vec(row) for row in rows)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(c: Fraction, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def norm2(a: Vec) -> Fraction:
    """Exact squared Euclidean norm."""
    return dot(a, a)


def dist2(a: Vec, b: Vec) -> Fraction:
    return norm2(vsub(a, b))


def matvec(m: Mat, a: Vec) -> Vec:
    return tuple(dot(row, a) for row in m)


def matmul(m: Mat, n: Mat) -> Mat:
    cols = tuple(zip(*n, strict=True))
    return tuple(tuple(dot(row, col) for col in cols) for row in m)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m, strict=True))


_IDENTITY: dict[int, Mat] = {}


def identity(d: int) -> Mat:
    m = _IDENTITY.get(d)
    if m is None:
        m = _IDENTITY[d] = tuple(
            tuple(Fraction(1) if i == j else Fraction(0) for j in range(d)) for i in range(d)
        )
    return m


def is_orthogonal(m: Mat) -> bool:
    ident = identity(len(m))
    return m == ident or matmul(transpose(m), m) == ident


def solve(m: Mat, b: Vec) -> Vec:
    """Solve m @ x = b exactly by Gaussian elimination with Fractions."""
    d = len(b)
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(d):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return tuple(aug[i][d] for i in range(d))


def _exact_sqrt(q: Fraction) -> Fraction | None:
    """Return sqrt(q) if q is the square of a rational, else None."""
    ns, ds = isqrt(q.numerator), isqrt(q.denominator)
    if ns * ns == q.numerator and ds * ds == q.denominator:
        return Fraction(ns, ds)
    return None


def sqrt_lower(q: Fraction, bits: int = SQRT_SLACK_BITS) -> Fraction:
    """Rational lower bound for sqrt(q); exact for perfect squares."""
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return Fraction(0)
    exact = _exact_sqrt(q)
    if exact is not None:
        return exact
    # sqrt(n/d) = sqrt(n*d)/d; floor(isqrt(n*d*4^bits)) / (d*2^bits) <= sqrt(q)
    scale = 1 << bits
    n, d = q.numerator, q.denominator
    return Fraction(isqrt(n * d * scale * scale), d * scale)


def sqrt_upper(q: Fraction, bits: int = SQRT_SLACK_BITS) -> Fraction:
    """Rational upper bound for sqrt(q); exact for perfect squares."""
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return Fraction(0)
    exact = _exact_sqrt(q)
    if exact is not None:
        return exact
    scale = 1 << bits
    n, d = q.numerator, q.denominator
    return Fraction(isqrt(n * d * scale * scale) + 1, d * scale)


def parse_fraction(text: str) -> Fraction:
    """Parse 'p/q' or integer strings into an exact Fraction."""
    return Fraction(text.strip())


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)
