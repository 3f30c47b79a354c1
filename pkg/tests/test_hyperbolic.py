"""Metric machinery vs independent BFS oracles; kernel backend agreement."""

import math
from collections import deque
from fractions import Fraction

import numpy as np
import pytest

from ifsgraph.graph import View
from ifsgraph.hyperbolic import (
    a_max_from_delta,
    a_prime,
    adjacency,
    canonical_geodesic,
    condition_c_diagnostic,
    delta_hyperbolicity,
    diamond_check,
    distance,
    distance_matrix,
    geodesic_fan_divergence,
    gromov_product,
    horizontal_geodesic_bound,
    levels_array,
    quasi_isometry_check,
    rho_a,
    theta_a,
    compute_report,
)
from ifsgraph.kernels import _pure


def dict_bfs(adj, src):
    """Independent shortest-path oracle using a plain dict/deque BFS."""
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


@pytest.mark.parametrize("view", [View.E, View.E_DIAMOND])
def test_distances_match_dict_bfs(built, view):
    g = built("interval3", 4)
    adj = adjacency(g, view)
    dm = distance_matrix(g, view)
    for src in range(0, g.nvertices, 7):
        oracle = dict_bfs(adj, src)
        for t in range(g.nvertices):
            assert int(dm[src, t]) == oracle[t]
            assert distance(g, view, src, t) == oracle[t]


def test_distance_without_cache(built):
    g = built("gasket3", 3)
    adj = adjacency(g, View.E)
    oracle = dict_bfs(adj, 1)
    # fresh graph dict: force the per-pair BFS path
    g.__dict__.pop("_hyp_cache", None)
    assert distance(g, View.E, 1, g.nvertices - 1) == oracle[g.nvertices - 1]


def test_root_distance_equals_level(built):
    g = built("mixed-ratio", 4)
    lev = levels_array(g)
    for view in (View.E, View.E_DIAMOND):
        dm = distance_matrix(g, view)
        for i in range(g.nvertices):
            assert int(dm[0, i]) == int(lev[i])


def test_gromov_product_definition(built):
    g = built("interval3", 3)
    lev = levels_array(g)
    for x in range(g.nvertices):
        for y in range(g.nvertices):
            gp = gromov_product(g, View.E, x, y)
            assert gp == Fraction(
                int(lev[x]) + int(lev[y]) - distance(g, View.E, x, y), 2
            )


@pytest.mark.parametrize("view", [View.E, View.E_DIAMOND])
def test_canonical_geodesic_shape(built, view):
    g = built("interval3", 3)
    lev = levels_array(g)
    adj = adjacency(g, view)
    for x in range(0, g.nvertices, 3):
        for y in range(x, g.nvertices, 5):
            geo = canonical_geodesic(g, view, x, y)
            assert geo.length == distance(g, view, x, y)
            assert geo.vertices[0] == x and geo.vertices[-1] == y
            for u, v in zip(geo.vertices, geo.vertices[1:]):
                assert v in adj[u]
            levels = [int(lev[v]) for v in geo.vertices]
            assert min(levels) == geo.top_level
            # descend / (horizontal run) / ascend shape
            k = levels.index(geo.top_level)
            down, rest = levels[: k + 1], levels[k:]
            assert down == sorted(down, reverse=True)
            run = [l for l in levels if l == geo.top_level]
            assert len(run) == geo.horizontal_len + 1
            up = rest[geo.horizontal_len:]
            assert up == sorted(up)


def test_delta_matches_bruteforce_triples(built):
    g = built("interval3", 3)
    dm = distance_matrix(g, View.E)
    lev = levels_array(g)

    def gp(x, y):
        return Fraction(int(lev[x]) + int(lev[y]) - int(dm[x, y]), 2)

    n = g.nvertices
    best = Fraction(0)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                best = max(best, min(gp(x, z), gp(z, y)) - gp(x, y))
    assert delta_hyperbolicity(g, View.E) == best


def test_delta_sampled_path(built):
    g = built("interval3", 4)
    full = delta_hyperbolicity(g, View.E)
    sampled = delta_hyperbolicity(g, View.E, sample_cap=20)
    assert Fraction(0) <= sampled <= full


def test_kernel_backends_agree(built):
    g = built("gasket3", 4)
    adj = adjacency(g, View.E)
    indptr = np.zeros(len(adj) + 1, dtype=np.int64)
    for i, nbrs in enumerate(adj):
        indptr[i + 1] = indptr[i] + len(nbrs)
    indices = np.fromiter((v for nbrs in adj for v in nbrs), dtype=np.int64)
    pure = _pure.all_pairs_bfs(indptr, indices, len(adj))
    from ifsgraph import kernels

    active = kernels.all_pairs_bfs(indptr, indices, len(adj))
    assert np.array_equal(pure, active)
    lev = levels_array(g)
    d2 = (lev[:, None] + lev[None, :] - active).astype(np.int32)
    d2 = np.ascontiguousarray(d2)
    assert _pure.max_gromov_defect(d2, len(adj)) == kernels.max_gromov_defect(d2, len(adj))


def test_quasi_isometry_law(built):
    g = built("interval3", 4)
    qi = quasi_isometry_check(g)
    assert qi["max_dd_minus_d_minus_1"] <= 0
    assert not qi["violations"]
    assert qi["quasi_C"] >= 0


def test_diamond_check(built):
    g = built("interval3", 4)
    ok, witness = diamond_check(g)
    assert ok and witness is None


def test_horizontal_geodesic_bound_interval3(built):
    g = built("interval3", 5)
    assert horizontal_geodesic_bound(g) == [0, 1, 3, 5, 5, 5]


def test_fan_divergence_interval3(built):
    assert geodesic_fan_divergence(built("interval3", 4)) == 2


def test_visual_metric_parameters():
    assert a_max_from_delta(Fraction(0)) == pytest.approx(math.log(2))
    a = a_max_from_delta(Fraction(1))
    assert a == pytest.approx(math.log(2) / 2)
    assert math.exp(Fraction(1) * a) - 1 == pytest.approx(a_prime(a, Fraction(1)))
    assert a_prime(a, Fraction(1)) < math.sqrt(2) - 1


def test_rho_theta_sandwich(built):
    g = built("interval3", 4)
    delta = delta_hyperbolicity(g, View.E)
    a = a_max_from_delta(delta) / 2
    with pytest.raises(ValueError):
        rho_a(g, View.E, 0, 1, -1.0)
    assert rho_a(g, View.E, 3, 3, a).value == 0.0
    subset = list(range(0, g.nvertices, 4))
    res = theta_a(g, View.E, subset, a, delta)
    assert res["sandwich_ok"]
    for pair, t in res["theta"].items():
        assert t <= res["rho"][pair] * (1 + 1e-12)


def test_condition_c_diagnostic(built):
    g = built("interval3", 4)
    res = condition_c_diagnostic(g)
    assert res["chains"] > 0
    assert res["max_l0"] >= 2


def test_report_roundtrip(built):
    g = built("interval3", 3)
    rep = compute_report(g)
    d = rep.to_dict()
    assert d["diamond_ok"] is True
    assert d["lemma_dd_le_d_plus1_violations"] == 0
