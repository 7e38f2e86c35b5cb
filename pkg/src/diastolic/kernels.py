"""Kernel backend selection.

The compiled extension is used when it imported cleanly and the environment
variable DIAS_PURE_PYTHON is unset; otherwise the pure Python twin takes
over.  Both expose greedy_order(nbr, n) and cheeger_scan(nbr, n) with
identical results, which the test suite checks.
"""

import os

import numpy as np

from . import _kernels_py

try:
    from . import _kernels
except ImportError:  # pragma: no cover - build environment dependent
    _kernels = None

if _kernels is not None and not os.environ.get("DIAS_PURE_PYTHON"):
    _impl = _kernels
    BACKEND = "compiled"
else:
    _impl = _kernels_py
    BACKEND = "pure"


def backends():
    """name -> module, for parity tests and benchmarks."""
    out = {"pure": _kernels_py}
    if _kernels is not None:
        out["compiled"] = _kernels
    return out


def _flat_neighbors(surface):
    return np.asarray(surface.triangle_neighbors, dtype=np.int32).reshape(-1)


def greedy_order(surface):
    nbr = _flat_neighbors(surface)
    return list(_impl.greedy_order(nbr, len(surface.triangles)))


def cheeger_scan(surface):
    nbr = _flat_neighbors(surface)
    return _impl.cheeger_scan(nbr, len(surface.triangles))
