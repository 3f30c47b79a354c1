"""Graph construction against a brute-force oracle, views and exports."""

import io
import json

import pytest

from ifsgraph.graph import (
    EdgeKind,
    UnknownVerdictError,
    View,
    build_graph,
    conjugate_pairs,
    degree_report,
    summary_json,
    to_dot,
    to_edge_csv,
    wsc_gamma_estimate,
)
from ifsgraph.intersect import Caps, IntersectionOracle, Verdict
from ifsgraph.presets import get_preset
from ifsgraph.symbolic import LevelTable, truncate_to_level


def brute_edges(ifs, depth):
    """Independent construction: decide every same-level and consecutive-level
    class pair directly from representative words, no prefilter."""
    table = LevelTable(ifs, depth)
    oracle = IntersectionOracle(ifs)
    edges = set()
    for n in range(1, depth + 1):
        idxs = list(table.iter_indices(n))
        parents = {
            i: {
                table.index_of_word(truncate_to_level(ifs, w, n - 1))
                for w in table.vertex(i).words
            }
            for i in idxs
        }
        for i in idxs:
            for p in parents[i]:
                edges.add((p, i, EdgeKind.VERTICAL))
        for a in range(len(idxs)):
            for b in range(a + 1, len(idxs)):
                i, j = idxs[a], idxs[b]
                v, _ = oracle.decide(table.vertex(i).rep, table.vertex(j).rep)
                if v is Verdict.INTERSECTS:
                    edges.add((i, j, EdgeKind.HORIZONTAL))
        for p in table.iter_indices(n - 1):
            for i in idxs:
                if p in parents[i]:
                    continue
                v, _ = oracle.decide(table.vertex(p).rep, table.vertex(i).rep)
                if v is Verdict.INTERSECTS:
                    edges.add((p, i, EdgeKind.VERTICAL_PLUS))
    return edges


@pytest.mark.parametrize("name,depth", [("interval3", 3), ("gasket3", 3), ("mixed-ratio", 4)])
def test_build_matches_bruteforce(name, depth, built):
    g = built(name, depth)
    got = {(e.a, e.b, e.kind) for e in g.edges}
    assert got == brute_edges(get_preset(name), depth)


def test_views_partition_edges(built):
    g = built("interval3", 3)
    e = {(x.a, x.b) for x in g.edges_in_view(View.E)}
    d = {(x.a, x.b) for x in g.edges_in_view(View.E_DIAMOND)}
    vertical = {(x.a, x.b) for x in g.edges if x.kind is EdgeKind.VERTICAL}
    assert vertical <= e and vertical <= d
    assert {(x.a, x.b) for x in g.edges} == e | d


def test_adjacency_is_symmetric_sorted(built):
    g = built("interval3", 3)
    adj = g.adjacency(View.E)
    for u, nbrs in enumerate(adj):
        assert nbrs == sorted(nbrs)
        for v in nbrs:
            assert u in adj[v]
            assert u != v


def test_vertical_edges_are_parent_links(built):
    g = built("mixed-ratio", 4)
    for e in g.edges:
        if e.kind is EdgeKind.VERTICAL:
            assert g.table.level_of(e.b) == g.table.level_of(e.a) + 1


def _starved_overlapping_ifs():
    # automaton-ineligible (ratio 2/5) with overlapping cylinders: no stage
    # can certify anything once every cap is zero.
    from ifsgraph.similitude import IfsSpec, similitude

    return IfsSpec(
        maps=(
            similitude("2/5", ["0"]),
            similitude("2/5", ["3/10"]),
            similitude("2/5", ["3/5"]),
        ),
        name="overlap25",
    )


def test_strict_mode_raises_on_unknown():
    caps = Caps(refine_depth=0, witness_pre=0, witness_per=0, map_witness_len=0)
    with pytest.raises(UnknownVerdictError):
        build_graph(_starved_overlapping_ifs(), 1, caps=caps)


def test_optimistic_mode_marks_uncertain():
    caps = Caps(refine_depth=0, witness_pre=0, witness_per=0, map_witness_len=0)
    g = build_graph(_starved_overlapping_ifs(), 1, mode="optimistic", caps=caps)
    assert g.uncertain
    assert all(not e.certain for e in g.uncertain)


def test_build_validation():
    ifs = get_preset("interval3")
    with pytest.raises(ValueError):
        build_graph(ifs, -1)
    with pytest.raises(ValueError):
        build_graph(ifs, 1, mode="bogus")
    with pytest.raises(ResourceWarning):
        build_graph(ifs, 3, max_classes=4)


def test_conjugate_pairs(built):
    g = built("interval3", 3)
    for i, j in conjugate_pairs(g, 2):
        assert g.table.level_of(i) == g.table.level_of(j) == 2
    with pytest.raises(ValueError):
        conjugate_pairs(g, 9)


def test_wsc_gamma_monotone_bounded():
    # overlapping interval3 has multiplicity >= 2 from level 1 on.
    gammas = wsc_gamma_estimate(get_preset("interval3"), 3)
    assert gammas[0] == 1
    assert all(x >= 2 for x in gammas[1:])


def test_exports_smoke(built):
    g = built("interval3", 2)
    dot = to_dot(g, View.E)
    assert dot.startswith("graph") and f"v{g.nvertices - 1}" in dot
    buf = io.StringIO()
    to_edge_csv(g, buf)
    lines = buf.getvalue().strip().splitlines()
    assert len(lines) == len(g.edges) + 1
    payload = json.loads(summary_json(g))
    assert payload["vertices"] == g.nvertices


def test_labels(built):
    g = built("mixed-ratio", 2)  # label_base 1
    assert g.label(0) == "()"
    # label_base shifts digits by one, so every non-root label uses 1/2 only
    labels = {g.label(i) for i in range(1, g.nvertices)}
    assert labels and all(set(lab) <= {"1", "2"} for lab in labels)
    assert "2" in labels  # the word (1,) sits at level 1
