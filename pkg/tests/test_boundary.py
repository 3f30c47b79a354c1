"""Boundary addresses, the realization map and its exact diagnostics."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ifsgraph.boundary import (
    BoundaryAddress,
    boundary_gromov,
    classify_gap_trend,
    condition_h_gap,
    condition_h_report,
    holder_upper_check,
    net_check,
    phi,
    phi_exact,
    ray,
    ray_word,
)
from ifsgraph.graph import View
from ifsgraph.presets import get_preset
from ifsgraph.rational import dist2, vec


def test_address_normalization():
    a = BoundaryAddress.make((0, 1), (2, 2))
    assert a.period == (2,)  # primitive period
    b = BoundaryAddress.make((0, 1), (1,))
    assert b.preperiod == (0,) and b.period == (1,)  # absorbed tail
    c = BoundaryAddress.make((), (0, 1, 0, 1))
    assert c.period == (0, 1)
    with pytest.raises(ValueError):
        BoundaryAddress.make((0,), ())


@given(
    st.lists(st.integers(0, 2), max_size=4),
    st.lists(st.integers(0, 2), min_size=1, max_size=3),
    st.integers(0, 12),
)
def test_prefix_consistency(pre, per, n):
    a = BoundaryAddress.make(pre, per)
    p, q = a.prefix(n), a.prefix(n + 1)
    assert len(p) == n and q[:n] == p
    # normalization preserves the infinite word
    raw = tuple(pre) + tuple(per) * 8
    assert a.prefix(len(raw) - 4)[: len(raw) - 4] == raw[: len(raw) - 4]


def test_labels():
    assert BoundaryAddress.make((0,), (1,)).label() == "0(1)^inf"
    assert BoundaryAddress.make((), (2,)).label(base=1) == "(3)^inf"


def test_phi_exact_fixed_points():
    ifs = get_preset("interval3")
    assert phi_exact(ifs, BoundaryAddress.make((), (0,))) == vec([0])
    assert phi_exact(ifs, BoundaryAddress.make((), (1,))) == vec([1])
    assert phi_exact(ifs, BoundaryAddress.make((), (2,))) == vec([2])
    # S_0 applied to fix(S_2) = 2 gives the touching point 1
    assert phi_exact(ifs, BoundaryAddress.make((0,), (2,))) == vec([1])


def test_phi_exact_periodic_point():
    # (01)^inf on interval3: x = (x/2 + 1/2)/2 => x = 2/3... computed exactly:
    # S_0 S_1 (x) = x/4 + 1/4, fixed point 1/3.
    ifs = get_preset("interval3")
    assert phi_exact(ifs, BoundaryAddress.make((), (0, 1))) == (Fraction(1, 3),)


def test_phi_approx_converges_to_exact():
    ifs = get_preset("gasket3")
    addr = BoundaryAddress.make((0, 1), (2,))
    target = phi_exact(ifs, addr)
    prev = None
    for depth in (1, 3, 5, 8):
        approx = phi(ifs, addr, depth)
        err2 = dist2(approx.point, target)
        assert err2 <= approx.error_radius**2
        if prev is not None:
            assert approx.error_radius < prev
        prev = approx.error_radius


def test_ray_words_are_level_truncations():
    ifs = get_preset("mixed-ratio")
    addr = BoundaryAddress.make((), (1,))  # ratio-1/4 map: skips levels
    words = ray(ifs, addr, 6)
    assert words[0] == ()
    from ifsgraph.symbolic import is_level_word

    for n, w in enumerate(words[1:], start=1):
        assert is_level_word(ifs, w, n)
        assert ray_word(ifs, addr, n) == w


def test_boundary_gromov_monotone_and_same_point(built):
    g = built("interval3", 5)
    a1 = BoundaryAddress.make((0,), (2,))
    a2 = BoundaryAddress.make((1,), (0,))  # S_1(0) = 1/2 ≠ 1
    bg = boundary_gromov(g, View.E, a1, a2)
    assert all(x <= y for x, y in zip(bg.values, bg.values[1:]))
    # identical addresses give the same ray
    same = boundary_gromov(g, View.E, a1, a1)
    assert same.same_point


def test_holder_upper_theoretical_constant(built):
    g = built("interval3", 5)
    pairs = [
        (BoundaryAddress.make((), (0,)), BoundaryAddress.make((), (2,))),
        (BoundaryAddress.make((), (0,)), BoundaryAddress.make((), (1,))),
        (BoundaryAddress.make((), (1,)), BoundaryAddress.make((), (1,))),
    ]
    res = holder_upper_check(g, pairs, a=0.2)
    assert res["ok"]
    assert res["rows"][2]["ratio"] == 0.0  # identical pair
    assert res["worst_ratio"] <= res["theoretical_constant"]


def test_condition_h_interval3_exact(built):
    g = built("interval3", 4)
    row = condition_h_gap(g, 3)
    assert row.min_normalized_gap == 1
    assert not row.partial
    assert row.argmin is not None
    rows = condition_h_report(g, [2, 3, 4])
    assert [r.min_normalized_gap for r in rows] == [1, 1, 1]
    assert classify_gap_trend(rows) == "bounded-below"


def test_condition_h_pure_tree(built):
    # interval2-osc: every same-level pair is disjoint; normalized gap is
    # the constant 1 at every level (gap 3^-n between adjacent cylinders).
    g = built("interval2-osc", 4)
    for n in (1, 2, 3):
        row = condition_h_gap(g, n)
        assert row.min_normalized_gap == 1


def test_classify_gap_trend_degenerate():
    assert classify_gap_trend([]) == "insufficient-data"


def test_net_check(built):
    g = built("interval3", 3)
    samples = [
        BoundaryAddress.make((), (0,)),
        BoundaryAddress.make((), (1, 2)),
        BoundaryAddress.make((0, 2), (1,)),
    ]
    res = net_check(g, 2, samples)
    assert res["ok"]
