"""Exact contracting similarity maps, IFS specifications and invariant balls.

A similarity map is ``S(x) = ratio * orthogonal @ x + translation`` with an
exact rational ratio, an exact-rational orthogonal matrix and a rational
translation vector.  Contracting maps (``ratio < 1``) are the IFS generators;
neighbor maps ``S_x^{-1} S_y`` may be expanding, so the base class only
requires ``ratio > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .rational import (
    Mat,
    Vec,
    dist2,
    identity,
    is_orthogonal,
    mat,
    matmul,
    matvec,
    solve,
    sqrt_upper,
    transpose,
    vadd,
    vec,
    vscale,
    vsub,
)

MapKey = tuple

#: relative slack applied when rounding the invariant-ball radius upward
BALL_SLACK = Fraction(1, 1 << 32)


@dataclass(frozen=True)
class SimilarityMap:
    """x -> ratio * orthogonal @ x + translation, with ratio > 0."""

    ratio: Fraction
    orthogonal: Mat
    translation: Vec

    def __post_init__(self):
        if self.ratio <= 0:
            raise ValueError("ratio must be positive")
        if len(self.orthogonal) != len(self.translation):
            raise ValueError("dimension mismatch between orthogonal part and translation")
        if not is_orthogonal(self.orthogonal):
            raise ValueError("orthogonal part is not exactly orthogonal")

    @property
    def dimension(self) -> int:
        return len(self.translation)

    def __call__(self, x: Vec) -> Vec:
        ox = x if self.orthogonal == identity(self.dimension) else matvec(self.orthogonal, x)
        return vadd(vscale(self.ratio, ox), self.translation)

    def compose(self, other: "SimilarityMap") -> "SimilarityMap":
        """self after other: result(x) = self(other(x))."""
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        ident = identity(self.dimension)
        self_id = self.orthogonal == ident
        if self_id:
            o = other.orthogonal
            ot = other.translation
        else:
            other_id = other.orthogonal == ident
            o = self.orthogonal if other_id else matmul(self.orthogonal, other.orthogonal)
            ot = matvec(self.orthogonal, other.translation)
        cls = Similitude if self.ratio * other.ratio < 1 else SimilarityMap
        return cls(
            ratio=self.ratio * other.ratio,
            orthogonal=o,
            translation=vadd(vscale(self.ratio, ot), self.translation),
        )

    def inverse(self) -> "SimilarityMap":
        inv_ratio = 1 / self.ratio
        ot = transpose(self.orthogonal)
        cls = Similitude if inv_ratio < 1 else SimilarityMap
        return cls(
            ratio=inv_ratio,
            orthogonal=ot,
            translation=vscale(-inv_ratio, matvec(ot, self.translation)),
        )

    def invert_apply(self, z: Vec) -> Vec:
        """The unique x with self(x) = z, exactly."""
        return self.inverse()(z)

    def canonical_key(self) -> MapKey:
        """Hashable key equal for two maps iff they are the identical map."""
        return (self.ratio, self.orthogonal, self.translation)


@dataclass(frozen=True)
class Similitude(SimilarityMap):
    """A contracting similarity map (0 < ratio < 1)."""

    def __post_init__(self):
        super().__post_init__()
        if self.ratio >= 1:
            raise ValueError("similitude ratio must be < 1")

    def fixed_point(self) -> Vec:
        """Solve (I - r*O) x = b exactly; I - r*O is invertible since r < 1."""
        d = self.dimension
        m = tuple(
            tuple(
                (Fraction(1) if i == j else Fraction(0)) - self.ratio * self.orthogonal[i][j]
                for j in range(d)
            )
            for i in range(d)
        )
        return solve(m, self.translation)


def similitude(ratio, translation, orthogonal=None) -> Similitude:
    """Convenience constructor accepting plain ints/strings/Fractions."""
    t = vec(translation)
    o = mat(orthogonal) if orthogonal is not None else identity(len(t))
    return Similitude(ratio=Fraction(ratio), orthogonal=o, translation=t)


def compose_word(maps: "list[Similitude] | tuple[Similitude, ...]", word) -> SimilarityMap:
    """Composition S_{w_1} o ... o S_{w_n} for a word of 0-based indices."""
    if not word:
        d = maps[0].dimension
        return SimilarityMap(Fraction(1), identity(d), vec([0] * d))
    result = maps[word[0]]
    for sym in word[1:]:
        result = result.compose(maps[sym])
    return result


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball with rational center and radius.

    All geometric predicates are exact squared-norm comparisons.
    """

    center: Vec
    radius: Fraction

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("negative radius")

    def contains_point(self, p: Vec) -> bool:
        return dist2(p, self.center) <= self.radius * self.radius

    def contains_ball(self, other: "Ball") -> bool:
        margin = self.radius - other.radius
        return margin >= 0 and dist2(self.center, other.center) <= margin * margin

    def separated_from(self, other: "Ball") -> bool:
        s = self.radius + other.radius
        return dist2(self.center, other.center) > s * s

    def overlaps(self, other: "Ball") -> bool:
        return not self.separated_from(other)

    def image_under(self, s: SimilarityMap) -> "Ball":
        return Ball(center=s(self.center), radius=s.ratio * self.radius)


@dataclass(frozen=True)
class IfsSpec:
    """An ordered IFS of N >= 2 exact similitudes on R^d."""

    maps: tuple[Similitude, ...]
    label_base: int = 0  # display offset for symbols (paper examples are 0-based)
    name: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.maps) < 2:
            raise ValueError("an IFS needs at least two maps")
        dims = {s.dimension for s in self.maps}
        if len(dims) != 1:
            raise ValueError("all maps must share one dimension")

    @property
    def dimension(self) -> int:
        return self.maps[0].dimension

    @property
    def nmaps(self) -> int:
        return len(self.maps)

    @property
    def min_ratio(self) -> Fraction:
        return min(s.ratio for s in self.maps)

    @cached_property
    def invariant_ball(self) -> Ball:
        return invariant_ball(self)

    def cylinder_ball(self, word) -> Ball:
        """Image of the invariant ball under the word's composed map."""
        return self.invariant_ball.image_under(compose_word(self.maps, word))


def _invariant_ball_at(ifs: IfsSpec, c: Vec) -> Ball:
    """Smallest certified invariant ball centered at ``c`` (up to slack)."""
    radius = Fraction(0)
    for s in ifs.maps:
        bound = sqrt_upper(dist2(s(c), c)) / (1 - s.ratio)
        radius = max(radius, bound)
    while not all(Ball(c, radius).contains_ball(Ball(c, radius).image_under(s)) for s in ifs.maps):
        radius += max(radius, Fraction(1)) * BALL_SLACK  # pragma: no cover - slack is sufficient
    return Ball(center=c, radius=radius)


def invariant_ball(ifs: IfsSpec, center_hint: Vec | None = None) -> Ball:
    """Certified ball B with S_i(B) <= B for every i (hence attractor <= B).

    The radius bound max_i |S_i(c) - c| / (1 - r_i) may be irrational in
    d >= 2; it is rounded up to a rational within a small relative slack and
    the containment inequality is then re-verified exactly.

    Two centers are tried — the average of the maps' fixed points and the
    midpoint of their bounding box — keeping whichever yields the smaller
    certified radius.  On the line the bounding-box midpoint recovers the
    exact convex hull of the attractor whenever the extreme fixed points
    are the hull endpoints.
    """
    if center_hint is not None:
        return _invariant_ball_at(ifs, vec(center_hint))
    fps = [s.fixed_point() for s in ifs.maps]
    n = Fraction(len(fps))
    centers = [tuple(sum(col, Fraction(0)) / n for col in zip(*fps))]
    bbox_mid = tuple((min(col) + max(col)) / 2 for col in zip(*fps))
    if bbox_mid != centers[0]:
        centers.append(bbox_mid)
    return min((_invariant_ball_at(ifs, c) for c in centers), key=lambda b: b.radius)
