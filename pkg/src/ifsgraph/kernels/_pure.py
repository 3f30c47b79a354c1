"""Pure NumPy/Python implementations of the hot kernels."""

from __future__ import annotations

from collections import deque

import numpy as np


def all_pairs_bfs(indptr: np.ndarray, indices: np.ndarray, n: int) -> np.ndarray:
    """All-pairs shortest paths by BFS on a CSR undirected graph.

    Returns an (n, n) int32 matrix; -1 marks unreachable pairs.
    """
    dist = np.full((n, n), -1, dtype=np.int32)
    for src in range(n):
        row = dist[src]
        row[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for v in indices[indptr[u] : indptr[u + 1]]:
                if row[v] < 0:
                    row[v] = du
                    queue.append(v)
    return dist


def max_gromov_defect(dist2: np.ndarray, n: int) -> int:
    """Largest doubled hyperbolicity defect over all triples.

    ``dist2`` is the doubled Gromov product matrix; the defect of a triple
    (x, y, z) is min(dist2[x, z], dist2[z, y]) - dist2[x, y].
    """
    best = 0
    for z in range(n):
        col = dist2[:, z]
        # pairwise minimum of doubled products through z, minus direct product
        m = np.minimum(col[:, None], col[None, :]) - dist2
        best = max(best, int(m.max()))
    return best
