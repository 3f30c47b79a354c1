"""Benchmark the compiled kernel backend against the pure-Python fallback.

Builds a few preset graphs, then times ``all_pairs_bfs`` and
``max_gromov_defect`` on both backends and reports the speedup.  Results are
also cross-checked for equality so a mismatch fails loudly.

Run from the repository root::

    python3 benchmarks/bench_kernels.py [--depth-scale 0]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ifsgraph.graph import View, build_graph
from ifsgraph.hyperbolic import _csr, adjacency, levels_array
from ifsgraph.kernels import BACKEND, get_backend
from ifsgraph.presets import get_preset

CASES = [
    ("interval3", 6),
    ("gasket3", 5),
    ("example2-1d(4)", 6),
]


def _time(fn, *args, repeats: int = 3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--depth-scale",
        type=int,
        default=0,
        help="add this to every case depth (negative for a quicker run)",
    )
    args = parser.parse_args()

    compiled = get_backend("compiled")
    pure = get_backend("pure")
    print(f"active backend: {BACKEND}")
    header = f"{'case':<22}{'n':>7}  {'kernel':<18}{'compiled':>10}{'pure':>10}{'speedup':>9}"
    print(header)
    print("-" * len(header))

    for name, depth in CASES:
        depth += args.depth_scale
        g = build_graph(get_preset(name), depth)
        adj = adjacency(g, View.E)
        indptr, indices = _csr(adj)
        n = len(adj)

        tc, dist_c = _time(compiled.all_pairs_bfs, indptr, indices, n)
        tp, dist_p = _time(pure.all_pairs_bfs, indptr, indices, n)
        assert np.array_equal(dist_c, dist_p), f"all_pairs_bfs mismatch on {name}"
        print(f"{name:<22}{n:>7}  {'all_pairs_bfs':<18}{tc:>9.4f}s{tp:>9.4f}s{tp / tc:>8.1f}x")

        levels = levels_array(g)
        dist2 = (levels[:, None] + levels[None, :] - dist_c).astype(np.int32)
        tc, dc = _time(compiled.max_gromov_defect, dist2, n)
        tp, dp = _time(pure.max_gromov_defect, dist2, n)
        assert dc == dp, f"max_gromov_defect mismatch on {name}: {dc} != {dp}"
        print(f"{name:<22}{n:>7}  {'max_gromov_defect':<18}{tc:>9.4f}s{tp:>9.4f}s{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
