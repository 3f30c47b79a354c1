"""Geodesic rays, the boundary map Φ, and boundary metric diagnostics.

Boundary points are restricted to eventually periodic addresses u·w^∞, whose
images Φ(u·w^∞) = S_u(fix(S_w)) are exact rational points, so every
diagnostic here is exact except the final floating-point ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import AugmentedGraph, View, _candidate_pairs
from .hyperbolic import distance, horizontal_geodesic_bound
from .intersect import Verdict
from .rational import Vec, dist2, sqrt_lower, sqrt_upper
from .similitude import IfsSpec, compose_word
from .symbolic import Word, truncate_to_level


@dataclass(frozen=True)
class BoundaryAddress:
    """Eventually periodic infinite word u·w^∞, normalized.

    Normalization: the period is primitive (not a power of a shorter word)
    and the preperiod does not end with the period (maximal absorption).
    """

    preperiod: Word
    period: Word

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be non-empty")

    @staticmethod
    def make(preperiod, period) -> "BoundaryAddress":
        u, w = tuple(preperiod), tuple(period)
        if not w:
            raise ValueError("period must be non-empty")
        # minimal (primitive) period
        for p in range(1, len(w) + 1):
            if len(w) % p == 0 and w == w[: p] * (len(w) // p):
                w = w[:p]
                break
        # absorb trailing copies of the period into the rotation: while the
        # preperiod ends with the last symbol of the period, rotate it out.
        while u and u[-1] == w[-1]:
            u = u[:-1]
            w = w[-1:] + w[:-1]
        return BoundaryAddress(u, w)

    def prefix(self, n: int) -> Word:
        """The first n symbols of u·w^∞."""
        u, w = self.preperiod, self.period
        if n <= len(u):
            return u[:n]
        k = n - len(u)
        reps = -(-k // len(w))
        return u + (w * reps)[:k]

    def label(self, base: int = 0) -> str:
        u = "".join(str(s + base) for s in self.preperiod)
        w = "".join(str(s + base) for s in self.period)
        return f"{u}({w})^inf" if u else f"({w})^inf"


def phi_exact(ifs: IfsSpec, addr: BoundaryAddress) -> Vec:
    """Φ(u·w^∞) = S_u(fix(S_w)), exactly."""
    fw = compose_word(ifs.maps, addr.period).fixed_point()
    return compose_word(ifs.maps, addr.preperiod)(fw)


@dataclass(frozen=True)
class BoundaryPointApprox:
    point: Vec
    error_radius: Fraction
    depth: int


def phi(ifs: IfsSpec, addr: BoundaryAddress, depth: int, x0: Vec | None = None) -> BoundaryPointApprox:
    """Finite approximation S_{i|_n}(x0) with certified error radius.

    The truncation word is the J_depth level prefix; the error radius is the
    diameter bound 2R scaled by the word's contraction ratio (≤ r^depth·2R).
    """
    word = ray_word(ifs, addr, depth)
    m = compose_word(ifs.maps, word)
    ball = ifs.invariant_ball
    base = ball.center if x0 is None else x0
    return BoundaryPointApprox(point=m(base), error_radius=m.ratio * 2 * ball.radius, depth=depth)


def ray_word(ifs: IfsSpec, addr: BoundaryAddress, level: int) -> Word:
    """The J_level truncation of the infinite address."""
    if level == 0:
        return ()
    # a prefix of length `level * max-symbol-run` certainly reaches level
    # `level`; extend until the truncation succeeds.
    n = level
    while True:
        try:
            return truncate_to_level(ifs, addr.prefix(n), level)
        except ValueError:
            n *= 2


def ray(ifs: IfsSpec, addr: BoundaryAddress, depth: int) -> list[Word]:
    """Level words [i|_0], ..., [i|_depth] of the geodesic ray."""
    return [ray_word(ifs, addr, n) for n in range(depth + 1)]


def ray_indices(g: AugmentedGraph, addr: BoundaryAddress) -> list[int]:
    return [g.table.index_of_word(w) for w in ray(g.ifs, addr, g.depth)]


@dataclass
class BoundaryGromov:
    """Along-ray Gromov products |x_n ∧ y_n| for two addresses."""

    values: list[Fraction]  # index n = level
    stabilized: bool
    same_point: bool

    @property
    def final(self) -> Fraction:
        return self.values[-1]


def boundary_gromov(
    g: AugmentedGraph,
    view: View,
    addr1: BoundaryAddress,
    addr2: BoundaryAddress,
    stable_window: int = 3,
) -> BoundaryGromov:
    """Gromov products along the two canonical rays, to the built depth.

    The sequence is nondecreasing; when it has been constant over the last
    ``stable_window`` levels it is flagged stabilized.  Rays through the
    same vertices at every level are reported as the same boundary point.
    """
    r1 = ray_indices(g, addr1)
    r2 = ray_indices(g, addr2)
    values: list[Fraction] = []
    same = True
    for n, (a, b) in enumerate(zip(r1, r2)):  # noqa: B905
        d = 0 if a == b else distance(g, view, a, b)
        same = same and d <= 1
        values.append(Fraction(2 * n - d, 2))
    tail = values[-stable_window:]
    stabilized = len(values) > stable_window and all(v == tail[0] for v in tail)
    return BoundaryGromov(values=values, stabilized=stabilized, same_point=same)


# -- Hölder / bi-Lipschitz diagnostics -------------------------------------------


def _exact_distance_bounds(p: Vec, q: Vec) -> tuple[Fraction, Fraction]:
    d2 = dist2(p, q)
    return sqrt_lower(d2), sqrt_upper(d2)


def holder_upper_check(
    g: AugmentedGraph,
    pairs: list[tuple[BoundaryAddress, BoundaryAddress]],
    a: float,
    view: View = View.E,
) -> dict:
    """Check |Φξ − Φη| ≤ C·ρ_a(ξ,η)^α with α = −log r / a.

    Returns per-pair ratios |Φξ − Φη| / ρ_a^α and compares the worst case
    against the theoretical constant (L+1)·r^{−L/2}·2R.  Since
    ρ_a^α = r^{|ξ∧η|}, the ratios are independent of the choice of a.
    """
    ifs = g.ifs
    r = float(ifs.min_ratio)
    alpha = -math.log(r) / a
    big_l = max(horizontal_geodesic_bound(g))
    theoretical = (big_l + 1) * r ** (-big_l / 2.0) * 2.0 * float(ifs.invariant_ball.radius)
    rows = []
    worst = 0.0
    for a1, a2 in pairs:
        if a1 == a2:
            rows.append({"pair": (a1.label(), a2.label()), "distance": 0.0, "rho_alpha": 0.0, "ratio": 0.0, "flagged": False})
            continue
        bg = boundary_gromov(g, view, a1, a2)
        p, q = phi_exact(ifs, a1), phi_exact(ifs, a2)
        lo, hi = _exact_distance_bounds(p, q)
        rho_alpha = math.exp(-a * float(bg.final)) ** alpha  # == r**gromov
        flagged = not bg.stabilized and not bg.same_point
        ratio = float(hi) / rho_alpha if rho_alpha > 0 else math.inf
        rows.append(
            {
                "pair": (a1.label(), a2.label()),
                "distance": float(hi),
                "gromov": bg.final,
                "rho_alpha": rho_alpha,
                "ratio": ratio,
                "flagged": flagged,
            }
        )
        if not flagged:
            worst = max(worst, ratio)
    return {
        "a": a,
        "alpha": alpha,
        "L": big_l,
        "theoretical_constant": theoretical,
        "worst_ratio": worst,
        "ok": worst <= theoretical,
        "rows": rows,
    }


def bilipschitz_lower_check(
    g: AugmentedGraph,
    pairs: list[tuple[BoundaryAddress, BoundaryAddress]],
    a: float,
    view: View = View.E,
) -> dict:
    """Ratios |Φξ − Φη| / ρ_a^α per pair; bounded below under condition (H),
    decaying along the designated family when (H) fails."""
    ifs = g.ifs
    r = float(ifs.min_ratio)
    alpha = -math.log(r) / a
    rows = []
    lowest = math.inf
    for a1, a2 in pairs:
        if a1 == a2:
            continue
        bg = boundary_gromov(g, view, a1, a2)
        p, q = phi_exact(ifs, a1), phi_exact(ifs, a2)
        lo, hi = _exact_distance_bounds(p, q)
        rho_alpha = math.exp(-a * float(bg.final)) ** alpha
        ratio = float(lo) / rho_alpha if rho_alpha > 0 else math.inf
        rows.append(
            {
                "pair": (a1.label(), a2.label()),
                "distance_lower": float(lo),
                "gromov": bg.final,
                "rho_alpha": rho_alpha,
                "ratio": ratio,
                "flagged": not bg.stabilized and not bg.same_point,
            }
        )
        lowest = min(lowest, ratio)
    return {"a": a, "alpha": alpha, "min_ratio": lowest, "rows": rows}


# -- condition (H) gap analysis --------------------------------------------------


@dataclass
class ConditionHRow:
    level: int
    min_normalized_gap: Fraction | None  # None when no disjoint pair exists
    pairs_checked: int
    disjoint_pairs: int
    partial: bool  # Unknown verdicts encountered
    argmin: tuple[int, int] | None = None  # class indices realizing the min


def condition_h_gap(g: AugmentedGraph, n: int) -> ConditionHRow:
    """Min over certified-disjoint level-n class pairs of the certified
    cylinder gap lower bound, normalized by r^n.

    The gap bound for a disjoint pair is derived from the separation cover:
    the cylinders lie in the two enclosing balls of every cover member, so
    the minimum over the cover of (center distance − radius sum), lower
    bounded by an exact rational square root, is a certified gap bound.
    """
    ifs = g.ifs
    ball = ifs.invariant_ball
    rn = ifs.min_ratio**n
    idxs = list(g.table.iter_indices(n))
    best: Fraction | None = None
    argmin: tuple[int, int] | None = None
    checked = disjoint = 0
    partial = False
    for (i, j), (verdict, cert) in sorted(g.certificates.items()):
        if g.table.level_of(i) != n or g.table.level_of(j) != n:
            continue
        checked += 1
        if verdict is Verdict.UNKNOWN:
            partial = True
            continue
        if verdict is not Verdict.DISJOINT:
            continue
        disjoint += 1
        sx = g.table.composed_map(i)
        sy = g.table.composed_map(j)
        if cert.kind == "separation-cover":
            gap = _cover_gap(ifs, sx, sy, cert.data[1], ball)
        else:
            bi, bj = ball.image_under(sx), ball.image_under(sy)
            gap = max(
                sqrt_lower(dist2(bi.center, bj.center)) - bi.radius - bj.radius,
                Fraction(0),
            )
        norm = gap / rn
        if best is None or norm < best:
            best = norm
            argmin = (i, j)
    # Classes with no certificate entry were pruned by the build prefilter:
    # their enclosing balls are separated, so the pair is disjoint with ball
    # gap > 0.  Scan them with an inflated-grid search: any pair outside the
    # margin-inflated candidate set has gap > margin, so growing the margin
    # past the best gap found certifies minimality without an O(M^2) pass.
    margin = 2 * ball.radius * rn
    seen: set[tuple[int, int]] = set()
    while True:
        for i, j in _candidate_pairs(ifs, g.table, idxs, idxs, margin=margin):
            if (i, j) in g.certificates or (i, j) in seen:
                continue
            seen.add((i, j))
            checked += 1
            disjoint += 1
            bi = ball.image_under(g.table.composed_map(i))
            bj = ball.image_under(g.table.composed_map(j))
            gap = sqrt_lower(dist2(bi.center, bj.center)) - bi.radius - bj.radius
            norm = max(gap, Fraction(0)) / rn
            if best is None or norm < best:
                best = norm
                argmin = (i, j)
        if best is not None and best * rn <= margin:
            break
        if len(idxs) < 2 or margin > 8 * ball.radius:
            break  # level has no disjoint pair within the attractor span
        margin *= 4
    return ConditionHRow(
        level=n,
        min_normalized_gap=best,
        pairs_checked=checked,
        disjoint_pairs=disjoint,
        partial=partial,
        argmin=argmin,
    )


def _cover_gap(ifs, sx, sy, cover, ball) -> Fraction:
    """Certified lower bound on dist(S_x(K), S_y(K)) from a separation cover.

    Every point pair (p, q) of the two cylinders lands in some cover member
    (u, v): p ∈ S_x S_u(B), q ∈ S_y S_v(B); the member's ball gap bounds
    |p − q| from below.
    """
    best: Fraction | None = None
    for u, v in cover:
        bu = ball.image_under(sx.compose(compose_word(ifs.maps, u)))
        bv = ball.image_under(sy.compose(compose_word(ifs.maps, v)))
        gap = sqrt_lower(dist2(bu.center, bv.center)) - bu.radius - bv.radius
        gap = max(gap, Fraction(0))
        if best is None or gap < best:
            best = gap
    return best if best is not None else Fraction(0)


def condition_h_report(g: AugmentedGraph, levels: list[int] | None = None) -> list[ConditionHRow]:
    if levels is None:
        levels = list(range(1, g.depth + 1))
    return [condition_h_gap(g, n) for n in levels]


def classify_gap_trend(rows: list[ConditionHRow]) -> str:
    """"bounded-below" vs "decaying" heuristic over the reported levels."""
    gaps = [row.min_normalized_gap for row in rows if row.min_normalized_gap is not None]
    if len(gaps) < 2:
        return "insufficient-data"
    if gaps[-1] < gaps[0] / 2:
        return "decaying"
    return "bounded-below"


# -- net / surjectivity proxy ----------------------------------------------------


def net_check(g: AugmentedGraph, n: int, samples: list[BoundaryAddress]) -> dict:
    """Every sampled attractor point lies within r^n·2R of some level-n
    cylinder's phi center (surjectivity proxy)."""
    ifs = g.ifs
    ball = ifs.invariant_ball
    tol = ifs.min_ratio**n * 2 * ball.radius
    centers = []
    for i in g.table.iter_indices(n):
        m = compose_word(ifs.maps, g.table.vertex(i).rep)
        centers.append((m(ball.center), m.ratio * 2 * ball.radius))
    misses = []
    for addr in samples:
        p = phi_exact(ifs, addr)
        covered = any(dist2(p, c) <= rad * rad for c, rad in centers)
        # tolerance: the phi center approximates the cylinder within its own
        # radius, so containment in the doubled ball suffices.
        if not covered:
            covered = any(
                sqrt_upper(dist2(p, c)) <= rad + tol for c, rad in centers
            )
        if not covered:
            misses.append(addr.label())
    return {"level": n, "samples": len(samples), "misses": misses, "ok": not misses}
