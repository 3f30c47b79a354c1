"""Augmented graphs (X, E) and (X, E◇) over the symbolic quotient.

Vertices are map-equality classes of level words (see :mod:`.symbolic`).
Edge kinds:

* Vertical: class at level n-1 is the parent (prefix truncation) of some
  member of the class at level n — purely combinatorial, no oracle;
* VerticalPlus: consecutive levels, cylinders intersect, not a parent;
* Horizontal: same level, distinct classes, cylinders intersect.

The E view is Vertical ∪ Horizontal; the E◇ view is Vertical ∪ VerticalPlus.
Strict mode aborts on any Unknown intersection verdict; optimistic mode
includes the edge and flags it.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .intersect import Caps, Certificate, IntersectionOracle, Verdict
from .similitude import Ball, IfsSpec
from .symbolic import LevelTable, VertexClass, truncate_to_level


class EdgeKind(enum.Enum):
    VERTICAL = "vertical"
    VERTICAL_PLUS = "vertical_plus"
    HORIZONTAL = "horizontal"


class View(enum.Enum):
    E = "E"
    E_DIAMOND = "Ed"

    @property
    def kinds(self) -> frozenset[EdgeKind]:
        if self is View.E:
            return frozenset({EdgeKind.VERTICAL, EdgeKind.HORIZONTAL})
        return frozenset({EdgeKind.VERTICAL, EdgeKind.VERTICAL_PLUS})


class UnknownVerdictError(RuntimeError):
    """Raised in strict mode when the oracle cannot decide a pair."""

    def __init__(self, pairs):
        self.pairs = pairs
        super().__init__(f"{len(pairs)} cylinder pair(s) undecided at configured caps")


@dataclass(frozen=True)
class Edge:
    """Canonically oriented edge: lower level first, then lexicographic."""

    a: int  # vertex index
    b: int
    kind: EdgeKind
    certain: bool = True


@dataclass
class AugmentedGraph:
    ifs: IfsSpec
    table: LevelTable
    edges: list[Edge]
    uncertain: list[Edge] = field(default_factory=list)
    certificates: dict[tuple[int, int], tuple[Verdict, Certificate]] = field(
        default_factory=dict
    )

    @property
    def depth(self) -> int:
        return self.table.depth

    @property
    def nvertices(self) -> int:
        return self.table.nvertices

    def adjacency(self, view: View) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.nvertices)]
        kinds = view.kinds
        for e in self.edges:
            if e.kind in kinds:
                adj[e.a].append(e.b)
                adj[e.b].append(e.a)
        for nbrs in adj:
            nbrs.sort()
        return adj

    def edges_in_view(self, view: View) -> list[Edge]:
        return [e for e in self.edges if e.kind in view.kinds]

    def vertex(self, index: int) -> VertexClass:
        return self.table.vertex(index)

    def label(self, index: int) -> str:
        return self.vertex(index).label(self.ifs.label_base)


def build_graph(
    ifs: IfsSpec,
    depth: int,
    mode: str = "strict",
    caps: Caps | None = None,
    max_classes: int | None = 2_000_000,
) -> AugmentedGraph:
    """Construct both edge families up to ``depth`` levels."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if mode not in ("strict", "optimistic"):
        raise ValueError(f"unknown mode {mode!r}")
    table = LevelTable(ifs, depth, max_classes=max_classes)
    oracle = IntersectionOracle(ifs, caps)
    edges: list[Edge] = []
    uncertain: list[Edge] = []
    unknown_pairs: list[tuple[int, int]] = []
    certs: dict[tuple[int, int], tuple[Verdict, Certificate]] = {}

    # Vertical: purely combinatorial prefix truncation over all members.
    vertical: set[tuple[int, int]] = set()
    for n in range(1, depth + 1):
        for i in table.iter_indices(n):
            for w in table.vertex(i).words:
                p = table.index_of_word(truncate_to_level(ifs, w, n - 1))
                vertical.add((p, i))
    edges.extend(Edge(p, i, EdgeKind.VERTICAL) for p, i in sorted(vertical))

    inverses: dict[int, object] = {}

    def decide(i: int, j: int, kind: EdgeKind):
        si = inverses.get(i)
        if si is None:
            si = inverses[i] = table.composed_map(i).inverse()
        verdict, cert = oracle.decide_neighbor(si.compose(table.composed_map(j)))
        oracle.stats["decisions"] += 1
        certs[(i, j)] = (verdict, cert)
        if verdict is Verdict.INTERSECTS:
            edges.append(Edge(i, j, kind))
        elif verdict is Verdict.UNKNOWN:
            if mode == "strict":
                unknown_pairs.append((i, j))
            else:
                e = Edge(i, j, kind, certain=False)
                edges.append(e)
                uncertain.append(e)

    # Horizontal: same-level pairs, grid-prefiltered by enclosing balls.
    for n in range(1, depth + 1):
        idxs = list(table.iter_indices(n))
        for i, j in _candidate_pairs(ifs, table, idxs, idxs):
            decide(i, j, EdgeKind.HORIZONTAL)

    # VerticalPlus: consecutive levels, excluding parent pairs.
    for n in range(1, depth + 1):
        upper = list(table.iter_indices(n - 1))
        lower = list(table.iter_indices(n))
        for i, j in _candidate_pairs(ifs, table, upper, lower):
            if (i, j) in vertical:
                continue
            decide(i, j, EdgeKind.VERTICAL_PLUS)

    if unknown_pairs:
        raise UnknownVerdictError(unknown_pairs)
    edges.sort(key=lambda e: (e.a, e.b, e.kind.value))
    return AugmentedGraph(ifs, table, edges, uncertain, certs)


def _candidate_pairs(ifs: IfsSpec, table: LevelTable, left, right, margin: Fraction = Fraction(0)):
    """Sound prefilter: only pairs whose enclosing cylinder balls can meet
    (after inflating each radius by margin/2).

    Classes are bucketed on an exact rational grid with cell size at least
    the maximum possible center distance of qualifying pairs, so checking
    same and adjacent cells misses nothing.
    """
    same = left is right
    base = ifs.invariant_ball
    balls_l = {i: base.image_under(table.composed_map(i)) for i in left}
    balls_r = balls_l if same else {i: base.image_under(table.composed_map(i)) for i in right}
    if margin:
        half = margin / 2
        balls_l = {i: Ball(b.center, b.radius + half) for i, b in balls_l.items()}
        balls_r = (
            balls_l if same else {i: Ball(b.center, b.radius + half) for i, b in balls_r.items()}
        )
    max_l = max(b.radius for b in balls_l.values())
    max_r = max(b.radius for b in balls_r.values())
    cell = max_l + max_r
    if cell == 0:  # pragma: no cover - radii are positive
        cell = Fraction(1)
    dim = ifs.dimension
    grid: dict[tuple[int, ...], list[int]] = {}
    for i in left:
        c = balls_l[i].center
        key = tuple(int(coord / cell) if coord >= 0 else -int(-coord / cell) - 1 for coord in c)
        grid.setdefault(key, []).append(i)
    offsets = [()]
    for _ in range(dim):
        offsets = [o + (d,) for o in offsets for d in (-1, 0, 1)]
    out = []
    for j in right:
        c = balls_r[j].center
        key = tuple(int(coord / cell) if coord >= 0 else -int(-coord / cell) - 1 for coord in c)
        seen = set()
        for off in offsets:
            for i in grid.get(tuple(k + o for k, o in zip(key, off)), ()):  # noqa: B905
                if i in seen:
                    continue
                seen.add(i)
                if same and i >= j:
                    continue
                if not balls_l[i].separated_from(balls_r[j]):
                    out.append((i, j))
    out.sort()
    return out


def conjugate_pairs(g: AugmentedGraph, n: int) -> list[tuple[int, int]]:
    """Horizontal level-n pairs whose parent class sets are disjoint."""
    if n > g.depth:
        raise ValueError("level exceeds built depth")
    parents: dict[int, set[int]] = {}

    def parent_set(i: int) -> set[int]:
        ps = parents.get(i)
        if ps is None:
            ps = {
                g.table.index_of_word(truncate_to_level(g.ifs, w, n - 1))
                for w in g.vertex(i).words
            }
            parents[i] = ps
        return ps

    out = []
    for e in g.edges:
        if e.kind is EdgeKind.HORIZONTAL and g.table.level_of(e.a) == n:
            if parent_set(e.a).isdisjoint(parent_set(e.b)):
                out.append((e.a, e.b))
    return out


def wsc_gamma_estimate(ifs: IfsSpec, depth: int, max_classes: int | None = 2_000_000):
    """Per-level lower-bound witnesses for the separation multiplicity γ.

    Probe points are all level-n cylinder-ball centers plus pairwise
    midpoints of nearby centers; the count at a probe is the number of
    distinct level-n map classes whose cylinder ball contains it.
    """
    table = LevelTable(ifs, depth, max_classes=max_classes)
    per_level: list[int] = []
    for n in range(depth + 1):
        idxs = list(table.iter_indices(n))
        balls = {i: ifs.cylinder_ball(table.vertex(i).rep) for i in idxs}
        probes = [b.center for b in balls.values()]
        for i, j in _candidate_pairs(ifs, table, idxs, idxs):
            ci, cj = balls[i].center, balls[j].center
            probes.append(tuple((a + b) / 2 for a, b in zip(ci, cj)))  # noqa: B905
        best = 0
        for p in probes:
            count = sum(1 for b in balls.values() if b.contains_point(p))
            best = max(best, count)
        per_level.append(best)
    return per_level


def degree_report(g: AugmentedGraph, view: View) -> dict:
    """Per-level min/max degree statistics with a growth flag."""
    adj = g.adjacency(view)
    levels: list[dict] = []
    for n in range(g.depth + 1):
        degs = [len(adj[i]) for i in g.table.iter_indices(n)]
        by_kind: dict[str, int] = {}
        for kind in view.kinds:
            counts = {i: 0 for i in g.table.iter_indices(n)}
            for e in g.edges:
                if e.kind is not kind:
                    continue
                if e.a in counts:
                    counts[e.a] += 1
                if e.b in counts:
                    counts[e.b] += 1
            by_kind[kind.value] = max(counts.values()) if counts else 0
        levels.append(
            {
                "level": n,
                "min_degree": min(degs) if degs else 0,
                "max_degree": max(degs) if degs else 0,
                "max_by_kind": by_kind,
            }
        )
    maxima = [row["max_degree"] for row in levels[1:]]
    growth = bool(maxima) and len(maxima) >= 3 and maxima[-1] > maxima[-2] > maxima[-3]
    return {"view": view.value, "levels": levels, "degree_growth_warning": growth}


# -- exports -------------------------------------------------------------------


def to_dot(g: AugmentedGraph, view: View) -> str:
    style = {
        EdgeKind.VERTICAL: "solid",
        EdgeKind.VERTICAL_PLUS: "dashed",
        EdgeKind.HORIZONTAL: "dotted",
    }
    lines = [f'graph "{g.ifs.name or "ifs"}_{view.value}" {{']
    for i in range(g.nvertices):
        lines.append(f'  v{i} [label="{g.label(i)}"];')
    for e in g.edges_in_view(view):
        attrs = f"style={style[e.kind]}"
        if not e.certain:
            attrs += ', color=red, tooltip="uncertain"'
        lines.append(f"  v{e.a} -- v{e.b} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_edge_csv(g: AugmentedGraph, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["level_x", "key_x", "level_y", "key_y", "kind", "certainty"])
    for e in g.edges:
        w.writerow(
            [
                g.table.level_of(e.a),
                g.label(e.a),
                g.table.level_of(e.b),
                g.label(e.b),
                e.kind.value,
                "certain" if e.certain else "uncertain",
            ]
        )


def summary_json(g: AugmentedGraph) -> str:
    kinds = {k.value: 0 for k in EdgeKind}
    for e in g.edges:
        kinds[e.kind.value] += 1
    data = {
        "ifs": g.ifs.name,
        "depth": g.depth,
        "vertices": g.nvertices,
        "classes_per_level": [len(lvl) for lvl in g.table.levels],
        "edges_by_kind": kinds,
        "uncertain_edges": len(g.uncertain),
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
