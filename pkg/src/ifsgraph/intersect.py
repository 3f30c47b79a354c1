"""Certified three-valued cylinder-intersection oracle.

For words ``x, y`` the question is whether the cylinders ``S_x(K)`` and
``S_y(K)`` meet, where ``K`` is the attractor.  All arithmetic is exact and
every non-Unknown verdict carries a machine-checkable certificate:

* INTERSECTS via a map-equality witness (words ``u, v`` with
  ``S_x S_u = S_y S_v`` as affine maps, so the cylinders share a whole
  sub-cylinder), or via a point witness (two eventually periodic addresses
  whose exact attractor points coincide after applying the two maps);
* DISJOINT via a separation cover: a complete refinement of the pair of
  cylinders into sub-cylinder pairs whose certified enclosing balls are
  exactly separated (sub-cylinder balls nest inside parent balls, so
  separation prunes soundly);
* UNKNOWN when every stage hits its resource cap.

The verdict depends on the pair only through the neighbor map
``h = S_x^{-1} S_y`` (the cylinders meet iff ``K`` meets ``h(K)``), so
results are cached under a canonical key invariant under swapping x and y.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .similitude import Ball, IfsSpec, MapKey, SimilarityMap, compose_word
from .symbolic import Word


class Verdict(enum.Enum):
    INTERSECTS = "intersects"
    DISJOINT = "disjoint"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Certificate:
    """Evidence for a verdict, relative to the oriented pair (x, y)."""

    kind: str  # "map-equality" | "point-witness" | "separation-cover" | "capped"
    data: tuple = ()


@dataclass(frozen=True)
class Caps:
    """Resource limits for the staged escalation."""

    refine_depth: int = 12
    witness_pre: int = 6  # max preperiod length for point witnesses
    witness_per: int = 3  # max period length for point witnesses
    map_witness_len: int = 6  # max word length for map-equality witnesses
    frontier_cap: int = 200_000
    automaton_states: int = 100_000  # state cap for the neighbor automaton

    def __post_init__(self):
        for name in ("refine_depth", "witness_pre", "witness_per", "map_witness_len"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


# staged escalation: (map_len, refine_depth, pre, per) quadruples ramping up
# to the configured caps; cheap stages run first so easy pairs stay cheap.
def _stages(caps: Caps):
    ramps = [
        (2, 3, 1, 1),
        (4, 6, 2, 2),
        (caps.map_witness_len, 9, caps.witness_pre, caps.witness_per),
        (caps.map_witness_len, caps.refine_depth, caps.witness_pre, caps.witness_per),
    ]
    out = []
    for m, d, pre, per in ramps:
        stage = (
            min(m, caps.map_witness_len),
            min(d, caps.refine_depth),
            min(pre, caps.witness_pre),
            min(per, caps.witness_per),
        )
        if not out or stage != out[-1]:
            out.append(stage)
    return out


def _key_order(k: MapKey):
    # total order on canonical map keys for symmetric caching
    return k


class IntersectionOracle:
    """Decides cylinder intersection with exact certificates and caching."""

    def __init__(self, ifs: IfsSpec, caps: Caps | None = None):
        self.ifs = ifs
        self.caps = caps or Caps()
        self.ball = ifs.invariant_ball
        self._automaton_ok = _automaton_eligible(ifs)
        self._cache: dict[MapKey, tuple[Verdict, Certificate, bool]] = {}
        self._map_keys: dict[int, dict[MapKey, Word]] = {}
        self._points: dict[tuple[int, int], dict[tuple, tuple[Word, Word]]] = {}
        self.stats = {"decisions": 0, "cache_hits": 0, "unknown": 0}

    # -- per-IFS precomputed witness tables (pair independent) --------------

    def _map_key_table(self, max_len: int) -> dict[MapKey, Word]:
        """canonical_key(S_u) -> shortest u, over all words |u| <= max_len."""
        table = self._map_keys.get(max_len)
        if table is None:
            table = {}
            frontier: list[tuple[Word, SimilarityMap]] = [((), _identity_map(self.ifs))]
            table[frontier[0][1].canonical_key()] = ()
            for _ in range(max_len):
                nxt = []
                for word, m in frontier:
                    for i, s in enumerate(self.ifs.maps):
                        child = m.compose(s)
                        key = child.canonical_key()
                        if key not in table:
                            table[key] = word + (i,)
                            nxt.append((word + (i,), child))
                frontier = nxt
            self._map_keys[max_len] = table
        return table

    def _point_table(self, pre: int, per: int) -> dict[tuple, tuple[Word, Word]]:
        """Exact point S_u(fix(S_w)) -> (u, w) for |u| <= pre, 1 <= |w| <= per."""
        table = self._points.get((pre, per))
        if table is None:
            table = {}
            fixes: list[tuple[Word, tuple]] = []
            words: list[tuple[Word, SimilarityMap]] = [((), _identity_map(self.ifs))]
            all_words = [words[0]]
            for _ in range(max(pre, per)):
                nxt = []
                for word, m in words:
                    for i, s in enumerate(self.ifs.maps):
                        nxt.append((word + (i,), m.compose(s)))
                all_words.extend(nxt)
                words = nxt
            for w, m in all_words:
                if 1 <= len(w) <= per:
                    fixes.append((w, m.fixed_point()))
            for u, mu in all_words:
                if len(u) <= pre:
                    for w, p in fixes:
                        pt = mu(p)
                        table.setdefault(pt, (u, w))
            self._points[(pre, per)] = table
        return table

    # -- public API ----------------------------------------------------------

    def decide(self, x: Word, y: Word) -> tuple[Verdict, Certificate]:
        """Verdict for the cylinders of x and y, with certificate."""
        self.stats["decisions"] += 1
        sx = compose_word(self.ifs.maps, x)
        sy = compose_word(self.ifs.maps, y)
        h = sx.inverse().compose(sy)
        return self.decide_neighbor(h)

    def decide_neighbor(self, h: SimilarityMap) -> tuple[Verdict, Certificate]:
        kh = h.canonical_key()
        kinv = h.inverse().canonical_key()
        if kh == kinv or _key_order(kh) <= _key_order(kinv):
            canon, flipped = kh, False
        else:
            canon, flipped = kinv, True
        hit = self._cache.get(canon)
        if hit is not None:
            self.stats["cache_hits"] += 1
            verdict, cert, stored_flipped = hit
            return verdict, _orient(cert, flipped != stored_flipped)
        verdict, cert = self._decide_uncached(h if not flipped else h.inverse())
        self._cache[canon] = (verdict, cert, False)
        if verdict is Verdict.UNKNOWN:
            self.stats["unknown"] += 1
        return verdict, _orient(cert, flipped)

    # -- decision procedure ----------------------------------------------------

    def _decide_uncached(self, h: SimilarityMap) -> tuple[Verdict, Certificate]:
        if h.canonical_key() == _identity_map(self.ifs).canonical_key():
            return Verdict.INTERSECTS, Certificate("map-equality", ((), ()))
        if self._automaton_ok:
            hit = self._automaton_decide(h)
            if hit is not None:
                return hit
        best_unknown = Certificate("capped", ("all stages exhausted",))
        for map_len, depth, pre, per in _stages(self.caps):
            hit = self._map_equality_witness(h, map_len)
            if hit is not None:
                return Verdict.INTERSECTS, Certificate("map-equality", hit)
            cover = self._separation_cover(h, depth)
            if cover is not None:
                return Verdict.DISJOINT, Certificate("separation-cover", (depth, cover))
            hit = self._point_witness(h, pre, per)
            if hit is not None:
                return Verdict.INTERSECTS, Certificate("point-witness", hit)
        return Verdict.UNKNOWN, best_unknown

    def _automaton_decide(self, h: SimilarityMap) -> "tuple[Verdict, Certificate] | None":
        """Decisive verdict via the neighbor automaton, or None at the cap.

        An INTERSECTS cycle becomes an ordinary point witness.  For DISJOINT
        a separation cover is preferred (it carries gap information); when
        the cover itself is capped the automaton run stands as certificate.
        """
        res = _neighbor_automaton(self.ifs, self.ball, h, self.caps.automaton_states)
        if res is None:
            return None
        tag, payload = res
        if tag == "intersects":
            return Verdict.INTERSECTS, Certificate("point-witness", payload)
        depth = max(self.caps.refine_depth, payload + 2)
        cover = self._separation_cover(h, depth)
        if cover is not None:
            return Verdict.DISJOINT, Certificate("separation-cover", (depth, cover))
        return Verdict.DISJOINT, Certificate("automaton", (payload,))

    def _map_equality_witness(self, h: SimilarityMap, max_len: int):
        """Find (u, v) with S_u = h S_v, i.e. the cylinders share a whole
        sub-cylinder: S_x S_u = S_y S_v."""
        table = self._map_key_table(max_len)
        frontier: list[tuple[Word, SimilarityMap]] = [((), h)]
        for _ in range(max_len + 1):
            nxt = []
            for v, m in frontier:
                u = table.get(m.canonical_key())
                if u is not None:
                    return (u, v)
                for i, s in enumerate(self.ifs.maps):
                    nxt.append((v + (i,), m.compose(s)))
            frontier = nxt
        return None

    def _point_witness(self, h: SimilarityMap, pre: int, per: int):
        """Find eventually periodic addresses with p_left = h(p_right)."""
        table = self._point_table(pre, per)
        for pt, right in table.items():
            left = table.get(h(pt))
            if left is not None:
                return (left, right)
        return None

    def _separation_cover(self, h: SimilarityMap, depth: int):
        """Complete refinement of (K, h(K)) into exactly separated ball
        pairs, or None if the cap is hit or a pair refuses to separate.

        Expansion rule is deterministic (largest ratio side, ties -> left)
        so a verifier can re-derive the same tree.
        """
        b = self.ball
        root = ((), (), _identity_map(self.ifs), h)
        frontier = [root]
        cover: list[tuple[Word, Word]] = []
        for _ in range(2 * depth + 1):
            if not frontier:
                return tuple(cover)
            if len(frontier) + len(cover) > self.caps.frontier_cap:
                return None
            nxt = []
            for u, v, mu, mv in frontier:
                if b.image_under(mu).separated_from(b.image_under(mv)):
                    cover.append((u, v))
                    continue
                if len(u) >= depth and len(v) >= depth:
                    return None  # a pair refused to separate within depth
                expand_left = _expand_left(mu, mv, len(u), len(v), depth)
                for i, s in enumerate(self.ifs.maps):
                    if expand_left:
                        nxt.append((u + (i,), v, mu.compose(s), mv))
                    else:
                        nxt.append((u, v + (i,), mu, mv.compose(s)))
            frontier = nxt
        return None if frontier else tuple(cover)


def _expand_left(mu: SimilarityMap, mv: SimilarityMap, lu: int, lv: int, depth: int) -> bool:
    if lu >= depth:
        return False
    if lv >= depth:
        return True
    if mu.ratio != mv.ratio:
        return mu.ratio > mv.ratio
    return lu <= lv


def _orient(cert: Certificate, flip: bool) -> Certificate:
    if not flip:
        return cert
    if cert.kind in ("map-equality", "point-witness"):
        a, b = cert.data
        return Certificate(cert.kind, (b, a))
    if cert.kind == "separation-cover":
        depth, cover = cert.data
        return Certificate(cert.kind, (depth, tuple((v, u) for u, v in cover)))
    return cert


# -- neighbor automaton ---------------------------------------------------------
#
# When every map is x -> x/m + b (one uniform reciprocal-integer ratio, no
# rotation), the predicate P(g) := "K meets g(K)" satisfies the exact
# unfolding P(g) <=> OR_{i,j} P(S_i^{-1} g S_j), and the maps reachable by
# unfolding form a finite set: their ratio is preserved while translations
# obey t' = m(t + r*b_j - b_i), which keeps denominators bounded, and any
# state whose ball misses g(ball) is soundly pruned.  Hence a DFS decides:
# a back edge yields an intersection point with eventually periodic
# addresses read off the cycle, and exhaustion proves disjointness (a true
# intersection point would supply an infinite non-pruned path).


def _automaton_eligible(ifs: IfsSpec) -> bool:
    r = ifs.maps[0].ratio
    if r.numerator != 1 or r >= 1:
        return False
    from .rational import identity

    ident = identity(ifs.dimension)
    return all(s.ratio == r and s.orthogonal == ident for s in ifs.maps)


def _neighbor_automaton(ifs: IfsSpec, ball: Ball, h: SimilarityMap, state_cap: int):
    """DFS the unfolding graph of h.

    Returns ("intersects", ((u_l, w_l), (u_r, w_r))) with a point witness,
    ("disjoint", max_depth_reached), or None when the state cap is hit.
    The caller guarantees eligibility; expanding h (ratio > 1) is decided
    through its inverse with the witness sides swapped.
    """
    if h.ratio > 1:
        res = _neighbor_automaton(ifs, ball, h.inverse(), state_cap)
        if res is not None and res[0] == "intersects":
            left, right = res[1]
            return ("intersects", (right, left))
        return res

    # Eligibility fixes the ratio and orthogonal part of every reachable
    # state, so a state is just its translation vector t; the unfolding step
    # is t' = m*t + delta[i][j] with delta[i][j] = m*(rho*b_j - b_i), and
    # "ball separated from g(ball)" reduces to |(rho-1)c + t| > (1+rho)R.
    m = ifs.maps[0].ratio.denominator
    rho = h.ratio
    dim = ifs.dimension
    shift = tuple((rho - 1) * ck for ck in ball.center)
    sep_rhs = (ball.radius * (1 + rho)) ** 2

    def separated(t) -> bool:
        return sum((s + tk) ** 2 for s, tk in zip(shift, t)) > sep_rhs

    t0 = tuple(h.translation)
    if separated(t0):
        return ("disjoint", 0)
    nmaps = len(ifs.maps)
    bs = [s.translation for s in ifs.maps]
    delta = [
        [tuple(m * (rho * bj[k] - bi[k]) for k in range(dim)) for bj in bs]
        for bi in bs
    ]
    # frames: (t, m*t, child cursor); path_digits[k] = (i, j) into frame k+1
    stack = [(t0, tuple(m * x for x in t0), 0)]
    on_stack: dict[tuple, int] = {t0: 0}
    done: set[tuple] = set()
    path_digits: list[tuple[int, int]] = []
    max_depth = 0
    while stack:
        t, mt, cursor = stack[-1]
        if cursor == nmaps * nmaps:
            done.add(t)
            del on_stack[t]
            stack.pop()
            if path_digits:
                path_digits.pop()
            continue
        stack[-1] = (t, mt, cursor + 1)
        i, j = divmod(cursor, nmaps)
        d = delta[i][j]
        child = tuple(mt[k] + d[k] for k in range(dim))
        if child in done or separated(child):
            continue
        pos = on_stack.get(child)
        if pos is not None:
            digits = path_digits + [(i, j)]
            pre, per = digits[:pos], digits[pos:]
            left = (tuple(x[0] for x in pre), tuple(x[0] for x in per))
            right = (tuple(x[1] for x in pre), tuple(x[1] for x in per))
            return ("intersects", (left, right))
        if len(done) + len(on_stack) >= state_cap:
            return None
        on_stack[child] = len(stack)
        stack.append((child, tuple(m * x for x in child), 0))
        path_digits.append((i, j))
        max_depth = max(max_depth, len(path_digits))
    return ("disjoint", max_depth)


_IDENTITY_CACHE: dict[int, SimilarityMap] = {}


def _identity_map(ifs: IfsSpec) -> SimilarityMap:
    m = _IDENTITY_CACHE.get(ifs.dimension)
    if m is None:
        from .rational import identity, vec

        m = SimilarityMap(Fraction(1), identity(ifs.dimension), vec([0] * ifs.dimension))
        _IDENTITY_CACHE[ifs.dimension] = m
    return m


# -- independent certificate verification -------------------------------------


def verify_certificate(
    ifs: IfsSpec, x: Word, y: Word, verdict: Verdict, cert: Certificate
) -> bool:
    """Re-check a certificate from scratch (no oracle caches involved)."""
    sx = compose_word(ifs.maps, x)
    sy = compose_word(ifs.maps, y)
    if verdict is Verdict.INTERSECTS and cert.kind == "map-equality":
        u, v = cert.data
        left = sx.compose(compose_word(ifs.maps, u))
        right = sy.compose(compose_word(ifs.maps, v))
        return left.canonical_key() == right.canonical_key()
    if verdict is Verdict.INTERSECTS and cert.kind == "point-witness":
        (lu, lw), (ru, rw) = cert.data
        pl = _periodic_point(ifs, lu, lw)
        pr = _periodic_point(ifs, ru, rw)
        return sx(pl) == sy(pr)
    if verdict is Verdict.DISJOINT and cert.kind == "separation-cover":
        depth, cover = cert.data
        return _verify_cover(ifs, sx, sy, depth, frozenset(cover))
    if verdict is Verdict.DISJOINT and cert.kind == "automaton":
        if not _automaton_eligible(ifs):
            return False
        h = sx.inverse().compose(sy)
        res = _neighbor_automaton(ifs, ifs.invariant_ball, h, Caps().automaton_states)
        return res is not None and res[0] == "disjoint"
    return False


def _periodic_point(ifs: IfsSpec, u: Word, w: Word):
    return compose_word(ifs.maps, u)(compose_word(ifs.maps, w).fixed_point())


def _verify_cover(ifs, sx, sy, depth, cover) -> bool:
    """Walk the deterministic refinement tree; every branch must end in a
    cover member whose balls are exactly separated."""
    b = ifs.invariant_ball
    h = sx.inverse().compose(sy)
    stack = [((), (), _identity_map(ifs), h)]
    seen = 0
    while stack:
        u, v, mu, mv = stack.pop()
        if (u, v) in cover:
            if not b.image_under(mu).separated_from(b.image_under(mv)):
                return False
            seen += 1
            continue
        if len(u) >= depth and len(v) >= depth:
            return False
        expand_left = _expand_left(mu, mv, len(u), len(v), depth)
        for i, s in enumerate(ifs.maps):
            if expand_left:
                stack.append((u + (i,), v, mu.compose(s), mv))
            else:
                stack.append((u, v + (i,), mu, mv.compose(s)))
    return seen == len(cover)
