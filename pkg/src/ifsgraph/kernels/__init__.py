"""Hot numeric kernels with a compiled (Cython) and a pure-Python backend.

The compiled extension is preferred when it imported successfully; set
``IFSGRAPH_PURE=1`` to force the pure backend (used by the benchmark and by
tests that compare the two).

Both backends expose:

* ``all_pairs_bfs(indptr, indices, n)`` -> (n, n) int32 distance matrix for
  an undirected graph in CSR form, -1 for unreachable;
* ``max_gromov_defect(dist2, n)`` -> largest doubled hyperbolicity defect
  over all vertex triples, where ``dist2[i, j] = |i| + |j| - d(i, j)`` is the
  doubled Gromov product matrix (int32).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("IFSGRAPH_PURE"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build environment
        _impl = _pure
        BACKEND = "pure"

all_pairs_bfs = _impl.all_pairs_bfs
max_gromov_defect = _impl.max_gromov_defect


def get_backend(name: str | None = None):
    """Return a backend module by name ("pure", "compiled" or None=active)."""
    if name is None:
        return _impl
    if name == "pure":
        return _pure
    if name == "compiled":
        from . import _core  # noqa: PLC0415

        return _core
    raise ValueError(f"unknown backend {name!r}")
