"""Level sets, truncation and the map-equality quotient, cross-checked
against brute-force oracles that recompose every word from scratch."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ifsgraph.presets import get_preset
from ifsgraph.similitude import compose_word
from ifsgraph.symbolic import (
    LevelTable,
    enumerate_level,
    is_level_word,
    parent_word,
    quotient_level,
    truncate_to_level,
    word_level,
    word_ratio,
)


def brute_quotient(ifs, level):
    """Independent oracle: bucket enumerate_level by full recomposition."""
    buckets = {}
    for w in enumerate_level(ifs, level):
        buckets.setdefault(compose_word(ifs.maps, w).canonical_key(), []).append(w)
    return sorted(tuple(sorted(ws)) for ws in buckets.values())


@pytest.mark.parametrize("name", ["interval3", "gasket3", "mixed-ratio", "example2-1d(2)"])
@pytest.mark.parametrize("level", [0, 1, 2, 3, 4])
def test_quotient_matches_bruteforce(name, level):
    ifs = get_preset(name)
    got = sorted(c.words for c in quotient_level(ifs, level))
    assert got == brute_quotient(ifs, level)


def test_uniform_ratio_levels_are_fixed_length():
    ifs = get_preset("interval3")
    for n in range(4):
        words = enumerate_level(ifs, n)
        assert all(len(w) == n for w in words)
        assert len(words) == 3**n


def test_mixed_ratio_levels_variable_length():
    # min ratio 1/4 sets the level unit: (1,) and (0,0) both land in level 1.
    ifs = get_preset("mixed-ratio")
    level1 = enumerate_level(ifs, 1)
    assert (1,) in level1 and (0, 0) in level1
    words = enumerate_level(ifs, 2)
    assert {len(w) for w in words} == {2, 3, 4}
    assert all(is_level_word(ifs, w, 2) for w in words)
    # every word belongs to exactly one level
    for w in words:
        assert word_level(ifs, w) == 2
        assert not is_level_word(ifs, w, 1) and not is_level_word(ifs, w, 3)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=10))
def test_word_level_consistent(word):
    ifs = get_preset("mixed-ratio")
    w = tuple(word)
    lvl = word_level(ifs, w)
    if lvl is None:
        assert not any(is_level_word(ifs, w, n) for n in range(1, 2 * len(w) + 1))
    else:
        assert is_level_word(ifs, w, lvl)


@given(st.lists(st.integers(0, 1), min_size=3, max_size=10))
def test_truncation_is_prefix_chain(word):
    ifs = get_preset("mixed-ratio")
    w = tuple(word)
    lvl = word_level(ifs, w)
    if lvl is None or lvl < 2:
        return
    for n in range(lvl):
        p = truncate_to_level(ifs, w, n)
        assert w[: len(p)] == p
        assert is_level_word(ifs, p, n) or n == 0
    assert parent_word(ifs, w) == truncate_to_level(ifs, w, lvl - 1)


def test_truncate_above_level_raises():
    ifs = get_preset("interval3")
    with pytest.raises(ValueError):
        truncate_to_level(ifs, (0,), 2)


def test_word_ratio():
    ifs = get_preset("mixed-ratio")
    from fractions import Fraction

    assert word_ratio(ifs, (0, 1)) == Fraction(1, 8)


def test_level_table_indexing():
    ifs = get_preset("interval3")
    t = LevelTable(ifs, 3)
    assert t.nvertices == 1 + sum(len(quotient_level(ifs, n)) for n in range(1, 4))
    for n in range(4):
        for i in t.iter_indices(n):
            cls = t.vertex(i)
            assert cls.level == n == t.level_of(i)
            for w in cls.words:
                assert t.index_of_word(w) == i
            assert t.composed_map(i).canonical_key() == cls.map_key
            if n:
                p = t.parent_index(i)
                assert t.level_of(p) == n - 1
            else:
                assert t.parent_index(i) is None


def test_level_table_class_cap():
    ifs = get_preset("interval3")
    with pytest.raises(ResourceWarning):
        LevelTable(ifs, 4, max_classes=5)


def test_quotient_classes_sorted_by_representative():
    ifs = get_preset("interval3")
    classes = quotient_level(ifs, 3)
    reps = [c.rep for c in classes]
    assert reps == sorted(reps)
    # canonical member is the lexicographically smallest word of the class
    for c in classes:
        assert c.rep == min(c.words)


def test_quotient_identifies_overlapping_words():
    # interval3: S_0 S_2 = S_1 S_0 (both are x/4 + 1/2).
    ifs = get_preset("interval3")
    classes = {c.words for c in quotient_level(ifs, 2)}
    assert ((0, 2), (1, 0)) in classes
    assert len(classes) == 7


def test_all_words_covered_once():
    ifs = get_preset("gasket3")
    for n in (1, 2, 3):
        from_classes = sorted(
            itertools.chain.from_iterable(c.words for c in quotient_level(ifs, n))
        )
        assert from_classes == sorted(enumerate_level(ifs, n))
