"""Symbolic words, variable-ratio level sets and the map-equality quotient.

Words are tuples of 0-based symbol indices.  With ``r = min_i ratio_i``, a
word ``w`` belongs to level ``n`` when ``ratio(w) <= r**n < ratio(w')`` where
``w'`` drops the last symbol; the root (empty word) is level 0.  Every
nonempty word belongs to at most one level, and each level-n word has a
unique prefix in level n-1 (its parent).

Two level-n words are identified when their composed maps are identical as
affine maps; vertex classes are ordered by their lexicographically smallest
member word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .similitude import IfsSpec, MapKey, SimilarityMap, compose_word

Word = tuple[int, ...]

ROOT: Word = ()


def word_ratio(ifs: IfsSpec, word: Word) -> Fraction:
    r = Fraction(1)
    for sym in word:
        r *= ifs.maps[sym].ratio
    return r


def is_level_word(ifs: IfsSpec, word: Word, level: int) -> bool:
    """True iff ``word`` lies in the level-``level`` set J_level."""
    if level == 0:
        return word == ROOT
    if not word:
        return False
    rn = ifs.min_ratio**level
    rw = word_ratio(ifs, word)
    return rw <= rn < rw / ifs.maps[word[-1]].ratio


def word_level(ifs: IfsSpec, word: Word) -> int | None:
    """The unique level containing ``word``, or None if there is none."""
    if not word:
        return 0
    rw = word_ratio(ifs, word)
    rparent = rw / ifs.maps[word[-1]].ratio
    # largest n with rw <= r**n; then check r**n < rparent.
    r = ifs.min_ratio
    n, rn = 0, Fraction(1)
    while rn * r >= rw:
        n += 1
        rn *= r
    return n if n > 0 and rn < rparent else None


def enumerate_level(ifs: IfsSpec, level: int) -> list[Word]:
    """All words in J_level, in lexicographic order."""
    if level == 0:
        return [ROOT]
    out: list[Word] = []
    rn = ifs.min_ratio**level

    def extend(word: Word, ratio: Fraction):
        # ratio > rn here: word is above level `level`; try all children.
        for sym in range(ifs.nmaps):
            child_ratio = ratio * ifs.maps[sym].ratio
            child = word + (sym,)
            if child_ratio <= rn:
                out.append(child)
            else:
                extend(child, child_ratio)

    extend(ROOT, Fraction(1))
    return out


def truncate_to_level(ifs: IfsSpec, word: Word, level: int) -> Word:
    """The unique prefix of ``word`` lying in J_level (word must lie at or
    below that level)."""
    if level == 0:
        return ROOT
    ratio = Fraction(1)
    rn = ifs.min_ratio**level
    for i, sym in enumerate(word):
        ratio *= ifs.maps[sym].ratio
        if ratio <= rn:
            return word[: i + 1]
    raise ValueError(f"word {word!r} lies above level {level}")


def parent_word(ifs: IfsSpec, word: Word) -> Word:
    """The unique prefix of a level-n word in J_{n-1} (n >= 1)."""
    level = word_level(ifs, word)
    if level is None or level == 0:
        raise ValueError("word has no parent in the level structure")
    return truncate_to_level(ifs, word, level - 1)


@dataclass(frozen=True)
class VertexClass:
    """An equivalence class of level words under exact map equality."""

    level: int
    words: tuple[Word, ...]  # sorted lexicographically; words[0] is canonical
    map_key: MapKey

    @property
    def rep(self) -> Word:
        return self.words[0]

    def label(self, base: int = 0) -> str:
        if not self.rep:
            return "()"
        return "".join(str(sym + base) for sym in self.rep)


def quotient_level(ifs: IfsSpec, level: int) -> list[VertexClass]:
    """J_level / ~ as vertex classes, ordered by canonical representative.

    The DFS carries the composed map incrementally as a raw
    (ratio, orthogonal, translation) triple, avoiding per-word recomposition.
    """
    if level == 0:
        root_key = compose_word(ifs.maps, ROOT).canonical_key()
        return [VertexClass(level=0, words=(ROOT,), map_key=root_key)]
    from .rational import matmul, matvec, vadd, vscale

    buckets: dict[MapKey, list[Word]] = {}
    rn = ifs.min_ratio**level
    raw = [(s.ratio, s.orthogonal, s.translation) for s in ifs.maps]

    def extend(word: Word, r: Fraction, o, t):
        for sym, (rs, os, ts) in enumerate(raw):
            rc = r * rs
            oc = matmul(o, os)
            tc = vadd(vscale(r, matvec(o, ts)), t)
            child = word + (sym,)
            if rc <= rn:
                buckets.setdefault((rc, oc, tc), []).append(child)
            else:
                extend(child, rc, oc, tc)

    ident = compose_word(ifs.maps, ROOT)
    extend(ROOT, ident.ratio, ident.orthogonal, ident.translation)
    classes = [
        VertexClass(level=level, words=tuple(sorted(words)), map_key=key)
        for key, words in buckets.items()
    ]
    classes.sort(key=lambda c: c.rep)
    return classes


class LevelTable:
    """Levels 0..depth of the quotient symbolic space, with fast lookup.

    Vertices are indexed globally in (level, canonical representative) order;
    index 0 is always the root.
    """

    def __init__(self, ifs: IfsSpec, depth: int, max_classes: int | None = 2_000_000):
        self.ifs = ifs
        self.depth = depth
        self.levels: list[list[VertexClass]] = []
        self.offsets: list[int] = []
        self._word_to_index: dict[Word, int] = {}
        self._composed: dict[int, SimilarityMap] = {}
        total = 0
        for n in range(depth + 1):
            classes = quotient_level(ifs, n)
            total += len(classes)
            if max_classes is not None and total > max_classes:
                raise ResourceWarning(
                    f"level table exceeds class cap ({total} > {max_classes})"
                )
            self.offsets.append(total - len(classes))
            self.levels.append(classes)
            base = self.offsets[n]
            for i, cls in enumerate(classes):
                for w in cls.words:
                    self._word_to_index[w] = base + i

    @property
    def nvertices(self) -> int:
        return self.offsets[-1] + len(self.levels[-1])

    def vertex(self, index: int) -> VertexClass:
        level = self.level_of(index)
        return self.levels[level][index - self.offsets[level]]

    def level_of(self, index: int) -> int:
        # levels are small in count; linear scan over offsets is fine.
        for n in range(self.depth, -1, -1):
            if index >= self.offsets[n]:
                return n
        raise IndexError(index)

    def index_of_word(self, word: Word) -> int:
        return self._word_to_index[word]

    def composed_map(self, index: int) -> SimilarityMap:
        m = self._composed.get(index)
        if m is None:
            m = compose_word(self.ifs.maps, self.vertex(index).rep)
            self._composed[index] = m
        return m

    def parent_index(self, index: int) -> int | None:
        """Index of the unique parent class, or None for the root."""
        cls = self.vertex(index)
        if cls.level == 0:
            return None
        return self._word_to_index[truncate_to_level(self.ifs, cls.rep, cls.level - 1)]

    def iter_indices(self, level: int) -> Iterator[int]:
        base = self.offsets[level]
        return iter(range(base, base + len(self.levels[level])))
