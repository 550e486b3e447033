"""Backend selection for the hot loops.

The compiled extension is used when it imports cleanly; setting
``GRSLAB_PURE=1`` forces the numpy fallback. ``GRSLAB_THREADS`` caps the
number of OpenMP threads the compiled kernels may use.
"""
import os

import numpy as np

from . import _fallback

try:
    if os.environ.get("GRSLAB_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _kernels as _impl
    BACKEND = "compiled"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

BACKENDS = {"python": _fallback}
if BACKEND == "compiled":
    BACKENDS["compiled"] = _impl


def thread_cap():
    """GRSLAB_THREADS if set, else every available core."""
    default = os.cpu_count() or 1
    try:
        n = int(os.environ.get("GRSLAB_THREADS", default))
    except ValueError:
        n = default
    return max(n, 1)


def pair_excess(lsum, la, lb, pts, offset, backend=None):
    """Maximise ``lsum[p+q] - la[p] - lb[q]`` over pairs of lattice points.

    ``pts`` is an (P,) array of integer coordinates (d=1) or a (P, 2) array
    (d=2); tables are indexed by coordinate + ``offset``. Returns
    ``(value, i, j)`` where ``i, j`` index into ``pts``.
    """
    impl = BACKENDS[backend] if backend else _impl
    pts = np.ascontiguousarray(pts, dtype=np.int64)
    lsum = np.ascontiguousarray(lsum, dtype=float)
    la = np.ascontiguousarray(la, dtype=float)
    lb = np.ascontiguousarray(lb, dtype=float)
    if pts.ndim == 1:
        return impl.pair_excess_1d(lsum, la, lb, pts, int(offset), thread_cap())
    if pts.ndim == 2 and pts.shape[1] == 2:
        return impl.pair_excess_2d(lsum, la, lb, pts, int(offset), thread_cap())
    raise ValueError("pair scans support d=1 and d=2 lattices only")


def diag_sup(mag, backend=None):
    """Per-diagonal maxima of a nonnegative square array, offsets -(n-1)..n-1."""
    impl = BACKENDS[backend] if backend else _impl
    return impl.diag_sup(np.ascontiguousarray(mag, dtype=float), thread_cap())
