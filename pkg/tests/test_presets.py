"""Preset catalogue and the lacunary family's exact parameters."""

from fractions import Fraction

import pytest

from ifsgraph.presets import (
    PRESET_NAMES,
    designated_levels,
    get_preset,
    lacunary_exponent,
    lacunary_sum,
    truncated_ck,
)


def test_all_presets_construct():
    for name in PRESET_NAMES:
        ifs = get_preset(name.replace("(k_max)", "(3)"))
        assert ifs.nmaps >= 2
        assert ifs.invariant_ball.radius > 0


def test_get_preset_errors():
    with pytest.raises(KeyError):
        get_preset("nope")
    with pytest.raises(ValueError):
        get_preset("example2-1d(0)")


def test_lacunary_exponents():
    assert [lacunary_exponent(k) for k in range(1, 6)] == [2, 4, 7, 11, 16]
    assert designated_levels(4) == (2, 4, 7, 11)


def test_lacunary_sum_exact():
    assert lacunary_sum(2) == Fraction(1, 9) + Fraction(1, 81)
    assert lacunary_sum(4) == sum(Fraction(1, 3**n) for n in (2, 4, 7, 11))


def test_offset_value():
    ifs = get_preset("example2-1d(4)")
    x0 = ifs.metadata["x0"]
    assert x0 == Fraction(1, 2) - lacunary_sum(4)
    assert Fraction(1, 3) < x0 < Fraction(1, 2)
    assert ifs.maps[2].translation == (x0,)
    assert ifs.metadata["designated_levels"] == (2, 4, 7, 11)


def test_truncated_ck():
    # c_k = 1 + sum_{j>=k+2} 3^{-(n_j - n_{k+1})}; exactly 1 at the boundary.
    assert truncated_ck(3, 4) == 1
    assert truncated_ck(2, 4) == 1 + Fraction(1, 3**4)  # n_4 - n_3 = 4
    assert truncated_ck(1, 4) == 1 + Fraction(1, 3**3) + Fraction(1, 3**7)


def test_2d_preset_shape():
    ifs = get_preset("example2-2d(2)")
    assert ifs.dimension == 2 and ifs.nmaps == 5
    assert all(s.ratio == Fraction(1, 3) for s in ifs.maps)


def test_default_k_max():
    assert get_preset("example2-1d").metadata["k_max"] == 4
