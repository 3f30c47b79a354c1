# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled implementations of the hot kernels (see kernels/__init__.py)."""

import numpy as np

cimport numpy as cnp


def all_pairs_bfs(indptr, indices, int n):
    """All-pairs BFS distances for a CSR undirected graph; -1 unreachable."""
    cdef cnp.int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    dist_arr = np.full((n, n), -1, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] dist = dist_arr
    queue_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef Py_ssize_t src, head, tail, u, v, k
    cdef cnp.int32_t du
    for src in range(n):
        dist[src, src] = 0
        queue[0] = src
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[src, u] + 1
            for k in range(ip[u], ip[u + 1]):
                v = idx[k]
                if dist[src, v] < 0:
                    dist[src, v] = du
                    queue[tail] = v
                    tail += 1
    return dist_arr


def max_gromov_defect(dist2, int n):
    """Largest doubled hyperbolicity defect over all vertex triples."""
    cdef cnp.int32_t[:, ::1] g = np.ascontiguousarray(dist2, dtype=np.int32)
    cdef Py_ssize_t x, y, z
    cdef cnp.int32_t best = 0, gxz, gzy, m, defect
    for z in range(n):
        for x in range(n):
            gxz = g[x, z]
            for y in range(n):
                gzy = g[z, y]
                m = gxz if gxz < gzy else gzy
                defect = m - g[x, y]
                if defect > best:
                    best = defect
    return int(best)
