"""Graph metrics, Gromov products, canonical geodesics and hyperbolicity
diagnostics for the E and E◇ views of an augmented graph.

Conventions: the graph metric is the unweighted shortest-path metric of the
selected view; ``|x|`` is the level of a vertex, so ``d(root, x) = |x|`` in
both views; the Gromov product is ``|x ∧ y| = (|x| + |y| − d(x, y)) / 2``, a
half-integer handled as an exact Fraction (kernels use doubled integers).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .graph import AugmentedGraph, EdgeKind, View

TRIPLE_SAMPLE_CAP = 10_000


# -- adjacency / distance plumbing ---------------------------------------------


def _csr(adj: list[list[int]]):
    indptr = np.zeros(len(adj) + 1, dtype=np.int64)
    for i, nbrs in enumerate(adj):
        indptr[i + 1] = indptr[i] + len(nbrs)
    indices = np.fromiter(
        (v for nbrs in adj for v in nbrs), dtype=np.int64, count=int(indptr[-1])
    )
    return indptr, indices


def _view_cache(g: AugmentedGraph, view: View) -> dict:
    cache = g.__dict__.setdefault("_hyp_cache", {})
    return cache.setdefault(view, {})


def adjacency(g: AugmentedGraph, view: View) -> list[list[int]]:
    cache = _view_cache(g, view)
    if "adj" not in cache:
        cache["adj"] = g.adjacency(view)
    return cache["adj"]


def distance_matrix(g: AugmentedGraph, view: View) -> np.ndarray:
    """All-pairs distances in the view, via the active kernel backend."""
    cache = _view_cache(g, view)
    if "dist" not in cache:
        adj = adjacency(g, view)
        indptr, indices = _csr(adj)
        cache["dist"] = kernels.all_pairs_bfs(indptr, indices, len(adj))
    return cache["dist"]


def _bfs(adj: list[list[int]], src: int, target: int | None = None) -> list[int]:
    dist = [-1] * len(adj)
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == target:
            break
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def distance(g: AugmentedGraph, view: View, x: int, y: int) -> int:
    """Shortest-path distance between vertex indices in the view."""
    cache = _view_cache(g, view)
    if "dist" in cache:
        return int(cache["dist"][x, y])
    d = _bfs(adjacency(g, view), x, y)[y]
    if d < 0:
        raise ValueError("vertices are disconnected in this view")
    return d


def levels_array(g: AugmentedGraph) -> np.ndarray:
    cache = g.__dict__.setdefault("_hyp_cache", {})
    if "levels" not in cache:
        lev = np.empty(g.nvertices, dtype=np.int32)
        for n in range(g.depth + 1):
            for i in g.table.iter_indices(n):
                lev[i] = n
        cache["levels"] = lev
    return cache["levels"]


def gromov_product(g: AugmentedGraph, view: View, x: int, y: int) -> Fraction:
    lev = levels_array(g)
    return Fraction(int(lev[x]) + int(lev[y]) - distance(g, view, x, y), 2)


# -- canonical geodesics ---------------------------------------------------------


@dataclass(frozen=True)
class GeodesicPath:
    """A canonical geodesic: vertex index sequence plus shape data.

    E view: levels strictly decrease, run at the top level ``top_level`` for
    ``horizontal_len`` horizontal edges, then strictly increase.
    E◇ view: levels strictly decrease to the single top vertex (level
    ``top_level``, ``horizontal_len`` = 0) then strictly increase.
    """

    view: View
    vertices: tuple[int, ...]
    top_level: int
    horizontal_len: int

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def gromov(self) -> Fraction:
        """h − ℓ/2 (E view) or the top vertex level (E◇ view)."""
        return Fraction(2 * self.top_level - self.horizontal_len, 2)


def _down_adj(g: AugmentedGraph, view: View) -> list[list[int]]:
    """Per-vertex sorted list of neighbors one level up (toward the root)."""
    cache = _view_cache(g, view)
    if "down" not in cache:
        lev = levels_array(g)
        down: list[list[int]] = [[] for _ in range(g.nvertices)]
        kinds = view.kinds - {EdgeKind.HORIZONTAL}
        for e in g.edges:
            if e.kind in kinds and lev[e.b] == lev[e.a] + 1:
                down[e.b].append(e.a)
        for lst in down:
            lst.sort()
        cache["down"] = down
    return cache["down"]


def _closure_sets(down: list[list[int]], x: int, lx: int, h: int) -> list[set[int]]:
    """Sets of vertices reachable from x by m descending steps, m = 0..lx−h."""
    sets = [{x}]
    cur = {x}
    for _ in range(lx - h):
        cur = {p for c in cur for p in down[c]}
        sets.append(cur)
    return sets


def _descend_path(down: list[list[int]], x: int, lx: int, target: int, h: int) -> list[int]:
    """Lexicographically smallest descending chain x -> target (level h)."""
    # up_sets[m] = vertices at level h+m from which target is reachable going down
    up_sets: list[set[int]] = [{target}]
    members = {target}
    for _ in range(lx - h):
        members = {c for c in range(len(down)) if any(p in members for p in down[c])}
        up_sets.append(members)
    path = [x]
    cur, m = x, lx - h
    while m > 0:
        cur = min(p for p in down[cur] if p in up_sets[m - 1])
        path.append(cur)
        m -= 1
    return path


def _horizontal_adj(g: AugmentedGraph, level: int) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {i: [] for i in g.table.iter_indices(level)}
    lev = levels_array(g)
    for e in g.edges:
        if e.kind is EdgeKind.HORIZONTAL and lev[e.a] == level:
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
    for lst in adj.values():
        lst.sort()
    return adj


def canonical_geodesic(g: AugmentedGraph, view: View, x: int, y: int) -> GeodesicPath:
    """The canonical geodesic from x to y, with deterministic tie-breaking.

    Among geodesics in canonical shape the one closest to the root is chosen
    (smallest top level), then lexicographically smallest chains.
    """
    lev = levels_array(g)
    lx, ly = int(lev[x]), int(lev[y])
    if x == y:
        return GeodesicPath(view, (x,), lx, 0)
    down = _down_adj(g, view)
    if view is View.E_DIAMOND:
        ax = _closure_sets(down, x, lx, 0)
        ay = _closure_sets(down, y, ly, 0)
        top = None
        for t in range(min(lx, ly), -1, -1):
            meet = ax[lx - t] & ay[ly - t]
            if meet:
                top = (t, min(meet))
                break
        t, z = top
        left = _descend_path(down, x, lx, z, t)
        right = _descend_path(down, y, ly, z, t)
        path = tuple(left + right[-2::-1])
        geo = GeodesicPath(view, path, t, 0)
    else:
        ax = _closure_sets(down, x, lx, 0)
        ay = _closure_sets(down, y, ly, 0)
        best = None  # (total, h, ell, u, v, dist-to-sources map)
        for h in range(min(lx, ly) + 1):
            hadj = _horizontal_adj(g, h)
            sources = sorted(ax[lx - h])
            dist = {s: 0 for s in sources}
            queue = deque(sources)
            while queue:
                u = queue.popleft()
                for v in hadj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        queue.append(v)
            targets = [t for t in sorted(ay[ly - h]) if t in dist]
            if not targets:
                continue
            ell = min(dist[t] for t in targets)
            total = (lx - h) + (ly - h) + ell
            if best is None or total < best[0] or (total == best[0] and h < best[1]):
                v_end = min(t for t in targets if dist[t] == ell)
                best = (total, h, ell, v_end, dist, hadj)
        total, h, ell, v_end, dist, hadj = best
        # walk the horizontal run back from v_end to a source
        run = [v_end]
        while dist[run[-1]] > 0:
            d = dist[run[-1]]
            run.append(min(w for w in hadj[run[-1]] if dist.get(w) == d - 1))
        run.reverse()
        u_start = run[0]
        left = _descend_path(down, x, lx, u_start, h)
        right = _descend_path(down, y, ly, v_end, h)
        path = tuple(left + run[1:] + right[-2::-1])
        geo = GeodesicPath(view, path, h, ell)
    if geo.length != distance(g, view, x, y):  # pragma: no cover - sanity
        raise AssertionError("canonical geodesic is not a geodesic")
    return geo


# -- structural diagnostics ------------------------------------------------------


def horizontal_geodesic_bound(g: AugmentedGraph) -> list[int]:
    """Per-level max length of a geodesic consisting solely of horizontal
    edges: the horizontal-only distance where it equals the full E-view
    distance."""
    adj = adjacency(g, View.E)
    out = []
    for n in range(g.depth + 1):
        hadj = _horizontal_adj(g, n)
        best = 0
        for src in sorted(hadj):
            hdist = {src: 0}
            queue = deque([src])
            while queue:
                u = queue.popleft()
                for v in hadj[u]:
                    if v not in hdist:
                        hdist[v] = hdist[u] + 1
                        queue.append(v)
            full = _bfs(adj, src)
            for t, ell in hdist.items():
                if t > src and ell == full[t]:
                    best = max(best, ell)
        out.append(best)
    return out


def diamond_check(g: AugmentedGraph) -> tuple[bool, tuple | None]:
    """Check the E◇ view is a diamond graph.

    (i) every edge joins consecutive levels; (ii) every ∨-configuration
    (u, w distinct, both one level above v) closes via a common neighbor v′
    one further level up; plus the even-distance law for same-level pairs.
    """
    lev = levels_array(g)
    for e in g.edges_in_view(View.E_DIAMOND):
        if lev[e.b] != lev[e.a] + 1:
            return False, ("level-skip-edge", e.a, e.b)
    down = _down_adj(g, View.E_DIAMOND)
    for v in range(g.nvertices):
        ups = down[v]
        for i in range(len(ups)):
            for j in range(i + 1, len(ups)):
                u, w = ups[i], ups[j]
                if not set(down[u]) & set(down[w]):
                    return False, ("open-wedge", u, v, w)
    dist = distance_matrix(g, View.E_DIAMOND)
    for n in range(g.depth + 1):
        idxs = list(g.table.iter_indices(n))
        for a in range(len(idxs)):
            for b in range(a + 1, len(idxs)):
                if int(dist[idxs[a], idxs[b]]) % 2:
                    return False, ("odd-distance", idxs[a], idxs[b])
    return True, None


def geodesic_fan_divergence(g: AugmentedGraph) -> int:
    """δ′: the max d◇-diameter of a level slice of the descending-geodesic
    fan of any vertex (slices are backward closures over descending edges)."""
    down = _down_adj(g, View.E_DIAMOND)
    dist = distance_matrix(g, View.E_DIAMOND)
    lev = levels_array(g)
    best = 0
    for z in range(g.nvertices):
        sets = _closure_sets(down, z, int(lev[z]), 0)
        for slice_ in sets:
            members = sorted(slice_)
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    best = max(best, int(dist[members[a], members[b]]))
    return best


def delta_hyperbolicity(g: AugmentedGraph, view: View, sample_cap: int = TRIPLE_SAMPLE_CAP) -> Fraction:
    """Empirical δ: max over vertex triples of min(|x∧z|, |z∧y|) − |x∧y|.

    Beyond ``sample_cap`` vertices a deterministic stride sample is used.
    """
    n = g.nvertices
    lev = levels_array(g)
    if n <= sample_cap:
        dist = distance_matrix(g, view)
        idxs = np.arange(n)
    else:
        stride = -(-n // sample_cap)
        idxs = np.arange(0, n, stride)
        adj = adjacency(g, view)
        dist_rows = np.array([_bfs(adj, int(s)) for s in idxs], dtype=np.int32)
        dist = dist_rows[:, idxs]
        lev = lev[idxs]
        n = len(idxs)
        dist2 = (lev[:, None] + lev[None, :] - dist).astype(np.int32)
        return Fraction(kernels.max_gromov_defect(np.ascontiguousarray(dist2), n), 2)
    sub = dist if len(idxs) == g.nvertices else dist[np.ix_(idxs, idxs)]
    lv = lev[idxs]
    dist2 = (lv[:, None] + lv[None, :] - sub).astype(np.int32)
    return Fraction(kernels.max_gromov_defect(np.ascontiguousarray(dist2), len(idxs)), 2)


def quasi_isometry_check(g: AugmentedGraph) -> dict:
    """Exhaustive d◇ ≤ d + 1 verification plus the empirical constant C
    with d ≤ d◇ + C (requires both views connected on the built depth)."""
    de = distance_matrix(g, View.E)
    dd = distance_matrix(g, View.E_DIAMOND)
    diff = dd.astype(np.int64) - de.astype(np.int64)
    violations = np.argwhere(diff > 1)
    return {
        "max_dd_minus_d_minus_1": int(diff.max()) - 1,
        "quasi_C": int((-diff).max()),
        "violations": [tuple(map(int, v)) for v in violations],
    }


# -- visual metrics ρ_a / θ_a ----------------------------------------------------


def a_max_from_delta(delta: Fraction) -> float:
    """Largest admissible a: e^{δa} − 1 < √2 − 1, i.e. a < ln 2 / (2δ)."""
    if delta <= 0:
        return math.log(2.0)
    return math.log(2.0) / (2.0 * float(delta))


def default_a(delta: Fraction) -> float:
    return a_max_from_delta(delta) / 2.0


def a_prime(a: float, delta: Fraction) -> float:
    return math.exp(float(delta) * a) - 1.0


@dataclass(frozen=True)
class RhoValue:
    """ρ_a(x, y) = e^{−a|x∧y|} (0 when x = y), with exact exponent kept."""

    a: float
    gromov: Fraction
    same: bool = False

    @property
    def value(self) -> float:
        return 0.0 if self.same else math.exp(-self.a * float(self.gromov))


def rho_a(g: AugmentedGraph, view: View, x: int, y: int, a: float) -> RhoValue:
    if a <= 0:
        raise ValueError("a must be positive")
    if x == y:
        return RhoValue(a, Fraction(0), same=True)
    return RhoValue(a, gromov_product(g, view, x, y))


def theta_a(g: AugmentedGraph, view: View, subset, a: float, delta: Fraction | None = None) -> dict:
    """Chain metric θ_a on a finite vertex subset: shortest path on the
    complete graph with ρ_a weights; checks the sandwich
    (1 − 2a′)ρ_a ≤ θ_a ≤ ρ_a when δ is supplied."""
    nodes = sorted(set(subset))
    m = len(nodes)
    if m < 2:
        return {"nodes": nodes, "theta": {}, "rho": {}, "sandwich_ok": True}
    w = np.zeros((m, m))
    rho = {}
    for i in range(m):
        for j in range(i + 1, m):
            r = rho_a(g, view, nodes[i], nodes[j], a).value
            w[i, j] = w[j, i] = r
            rho[(nodes[i], nodes[j])] = r
    th = w.copy()
    for k in range(m):  # Floyd–Warshall: infimum over chains inside the subset
        th = np.minimum(th, th[:, k : k + 1] + th[k : k + 1, :])
    theta = {
        (nodes[i], nodes[j]): float(th[i, j]) for i in range(m) for j in range(i + 1, m)
    }
    sandwich_ok = True
    if delta is not None:
        lo = 1.0 - 2.0 * a_prime(a, delta)
        for pair, r in rho.items():
            t = theta[pair]
            if not (lo * r <= t * (1 + 1e-12) and t <= r * (1 + 1e-12)):
                sandwich_ok = False
    return {"nodes": nodes, "theta": theta, "rho": rho, "sandwich_ok": sandwich_ok}


# -- condition (C) diagnostic ----------------------------------------------------


def condition_c_diagnostic(
    g: AugmentedGraph, max_pairs_per_level: int = 2000
) -> dict:
    """Max minimal-touching-subchain length ℓ₀ over horizontal chains
    harvested from canonical E-view geodesics of same-level pairs."""
    best = 0
    chains_seen = 0
    for n in range(1, g.depth + 1):
        idxs = list(g.table.iter_indices(n))
        pairs = 0
        for a in range(len(idxs)):
            for b in range(a + 1, len(idxs)):
                if pairs >= max_pairs_per_level:
                    break
                geo = canonical_geodesic(g, View.E, idxs[a], idxs[b])
                if geo.horizontal_len < 1:
                    continue
                pairs += 1
                # locate the horizontal run inside the canonical path
                lev = levels_array(g)
                run = [v for v in geo.vertices if int(lev[v]) == geo.top_level]
                hadj = _horizontal_adj(g, geo.top_level)
                chain = set(run)
                # shortest touching path between the run's endpoints using
                # only chain members
                src, dst = run[0], run[-1]
                dist = {src: 1}  # count vertices, not edges
                queue = deque([src])
                while queue:
                    u = queue.popleft()
                    for v in hadj[u]:
                        if v in chain and v not in dist:
                            dist[v] = dist[u] + 1
                            queue.append(v)
                best = max(best, dist.get(dst, len(run)))
                chains_seen += 1
            if pairs >= max_pairs_per_level:
                break
    return {"max_l0": best, "chains": chains_seen}


# -- report ----------------------------------------------------------------------


@dataclass
class HyperbolicityReport:
    delta: Fraction
    delta_diamond: Fraction
    L_per_level: list[int]
    delta_prime: int
    quasi_C: int
    lemma35_violations: int
    diamond_ok: bool
    a_max: float
    a_default: float

    def to_dict(self) -> dict:
        return {
            "delta_E": str(self.delta),
            "delta_Ed": str(self.delta_diamond),
            "L_per_level": self.L_per_level,
            "delta_prime": self.delta_prime,
            "quasi_C": self.quasi_C,
            "lemma_dd_le_d_plus1_violations": self.lemma35_violations,
            "diamond_ok": self.diamond_ok,
            "a_max": self.a_max,
            "a_default": self.a_default,
        }


def compute_report(g: AugmentedGraph) -> HyperbolicityReport:
    delta = delta_hyperbolicity(g, View.E)
    delta_d = delta_hyperbolicity(g, View.E_DIAMOND)
    qi = quasi_isometry_check(g)
    ok, _ = diamond_check(g)
    return HyperbolicityReport(
        delta=delta,
        delta_diamond=delta_d,
        L_per_level=horizontal_geodesic_bound(g),
        delta_prime=geodesic_fan_divergence(g),
        quasi_C=qi["quasi_C"],
        lemma35_violations=len(qi["violations"]),
        diamond_ok=ok,
        a_max=a_max_from_delta(delta),
        a_default=default_a(delta),
    )
