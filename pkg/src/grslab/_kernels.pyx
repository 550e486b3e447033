# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the O(P^2) pair scans and the diagonal-sup reduction.

Every kernel has a numpy twin in ``_fallback`` with identical semantics,
including the tie-breaking order of witnesses.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()

cdef double NEG_INF = -np.inf


def pair_excess_1d(const double[::1] lsum, const double[::1] la,
                   const double[::1] lb, const long[::1] idx,
                   long offset, int nthreads=1):
    """max over (i, j) of lsum[p_i + p_j] - la[p_i] - lb[p_j].

    Tables are indexed by lattice coordinate + offset. Returns
    (value, i, j) with the lexicographically smallest (i, j) on ties.
    """
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t i, j
    cdef double[::1] row_best = np.full(n, -np.inf)
    cdef long[::1] row_arg = np.zeros(n, dtype=np.int64)
    cdef double val, best
    cdef long arg, pi
    if n == 0:
        return NEG_INF, -1, -1
    for i in prange(n, nogil=True, num_threads=nthreads, schedule="static"):
        pi = idx[i]
        best = NEG_INF
        arg = 0
        for j in range(n):
            val = lsum[pi + idx[j] + offset] - la[pi + offset] - lb[idx[j] + offset]
            if val > best:
                best = val
                arg = j
        row_best[i] = best
        row_arg[i] = arg
    return _reduce_rows(row_best, row_arg)


def pair_excess_2d(const double[:, ::1] lsum, const double[:, ::1] la,
                   const double[:, ::1] lb, const long[:, ::1] pts,
                   long offset, int nthreads=1):
    """Two-dimensional version of :func:`pair_excess_1d`; ``pts`` is (P, 2)."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i, j
    cdef double[::1] row_best = np.full(n, -np.inf)
    cdef long[::1] row_arg = np.zeros(n, dtype=np.int64)
    cdef double val, best, base
    cdef long arg, a0, a1
    if n == 0:
        return NEG_INF, -1, -1
    for i in prange(n, nogil=True, num_threads=nthreads, schedule="static"):
        a0 = pts[i, 0]
        a1 = pts[i, 1]
        base = la[a0 + offset, a1 + offset]
        best = NEG_INF
        arg = 0
        for j in range(n):
            val = (lsum[a0 + pts[j, 0] + offset, a1 + pts[j, 1] + offset]
                   - base - lb[pts[j, 0] + offset, pts[j, 1] + offset])
            if val > best:
                best = val
                arg = j
        row_best[i] = best
        row_arg[i] = arg
    return _reduce_rows(row_best, row_arg)


cdef tuple _reduce_rows(double[::1] row_best, long[::1] row_arg):
    # serial reduction keeps the witness independent of thread scheduling
    cdef Py_ssize_t i, n = row_best.shape[0]
    cdef double best = row_best[0]
    cdef Py_ssize_t arg = 0
    for i in range(1, n):
        if row_best[i] > best:
            best = row_best[i]
            arg = i
    return best, arg, row_arg[arg]


def diag_sup(const double[:, ::1] mag, int nthreads=1):
    """d[k + n - 1] = max_j mag[j, j - k] for k in -(n-1)..(n-1)."""
    cdef Py_ssize_t n = mag.shape[0]
    cdef Py_ssize_t t, j, lo, hi
    cdef long k
    cdef double best
    out_arr = np.zeros(2 * n - 1 if n > 0 else 0)
    cdef double[::1] out = out_arr
    for t in prange(2 * n - 1, nogil=True, num_threads=nthreads, schedule="static"):
        k = t - (n - 1)
        if k >= 0:
            lo = k
            hi = n
        else:
            lo = 0
            hi = n + k
        best = 0.0
        for j in range(lo, hi):
            if mag[j, j - k] > best:
                best = mag[j, j - k]
        out[t] = best
    return out_arr
