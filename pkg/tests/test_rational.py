"""Exact rational linear algebra and certified square-root bounds."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ifsgraph.rational import (
    dist2,
    dot,
    format_fraction,
    identity,
    is_orthogonal,
    mat,
    matmul,
    matvec,
    norm2,
    parse_fraction,
    solve,
    sqrt_lower,
    sqrt_upper,
    transpose,
    vec,
)

fractions = st.fractions(
    min_value=-100, max_value=100, max_denominator=1000
)
small_fracs = st.fractions(min_value=-10, max_value=10, max_denominator=50)


def test_vec_mat_constructors():
    v = vec([1, "1/2", Fraction(3, 4)])
    assert v == (Fraction(1), Fraction(1, 2), Fraction(3, 4))
    m = mat([[1, 0], [0, 1]])
    assert m == identity(2)


def test_identity_cached_and_orthogonal():
    assert identity(3) is identity(3)
    assert is_orthogonal(identity(4))
    rot = mat([["3/5", "-4/5"], ["4/5", "3/5"]])
    assert is_orthogonal(rot)
    assert not is_orthogonal(mat([[1, 1], [0, 1]]))


def test_matmul_matvec_transpose():
    a = mat([[1, 2], [3, 4]])
    b = mat([[0, 1], [1, 0]])
    assert matmul(a, b) == mat([[2, 1], [4, 3]])
    assert matvec(a, vec([1, 1])) == vec([3, 7])
    assert transpose(a) == mat([[1, 3], [2, 4]])


@given(st.lists(small_fracs, min_size=1, max_size=4))
def test_norms(xs):
    v = tuple(xs)
    assert norm2(v) == dot(v, v) >= 0
    assert dist2(v, v) == 0


@given(st.lists(small_fracs, min_size=2, max_size=2), st.lists(small_fracs, min_size=2, max_size=2))
def test_solve_roundtrip(row, b):
    # build an invertible 2x2 by construction: [[1, a], [0, 1]]-style shear
    m = mat([[1, row[0]], [0, 1]])
    x = solve(m, tuple(b))
    assert matvec(m, x) == tuple(b)


def test_solve_singular():
    with pytest.raises(ZeroDivisionError):
        solve(mat([[1, 1], [1, 1]]), vec([1, 2]))


@given(st.fractions(min_value=0, max_value=10_000, max_denominator=10_000))
def test_sqrt_bounds_bracket(q):
    lo, hi = sqrt_lower(q), sqrt_upper(q)
    assert lo * lo <= q <= hi * hi
    assert lo <= hi


@given(st.fractions(min_value=0, max_value=100, max_denominator=100))
def test_sqrt_exact_on_perfect_squares(r):
    assert sqrt_lower(r * r) == r == sqrt_upper(r * r)


def test_sqrt_negative_raises():
    with pytest.raises(ValueError):
        sqrt_lower(Fraction(-1))


@given(fractions)
def test_fraction_format_parse_roundtrip(q):
    assert parse_fraction(format_fraction(q)) == q
