"""Pure-numpy twins of the compiled kernels in ``_kernels.pyx``."""
import numpy as np

_CHUNK = 256


def _reduce(row_best, row_arg):
    if row_best.size == 0:
        return -np.inf, -1, -1
    i = int(np.argmax(row_best))
    return float(row_best[i]), i, int(row_arg[i])


def pair_excess_1d(lsum, la, lb, idx, offset, nthreads=1):
    idx = np.asarray(idx, dtype=np.int64)
    n = idx.size
    row_best = np.empty(n)
    row_arg = np.empty(n, dtype=np.int64)
    lb_j = lb[idx + offset]
    for start in range(0, n, _CHUNK):
        rows = idx[start:start + _CHUNK]
        vals = lsum[rows[:, None] + idx[None, :] + offset] - la[rows + offset][:, None] - lb_j[None, :]
        row_arg[start:start + rows.size] = np.argmax(vals, axis=1)
        row_best[start:start + rows.size] = vals[np.arange(rows.size), row_arg[start:start + rows.size]]
    return _reduce(row_best, row_arg)


def pair_excess_2d(lsum, la, lb, pts, offset, nthreads=1):
    pts = np.asarray(pts, dtype=np.int64).reshape(-1, 2)
    n = pts.shape[0]
    row_best = np.empty(n)
    row_arg = np.empty(n, dtype=np.int64)
    lb_j = lb[pts[:, 0] + offset, pts[:, 1] + offset]
    for start in range(0, n, _CHUNK):
        rows = pts[start:start + _CHUNK]
        s0 = rows[:, 0][:, None] + pts[:, 0][None, :] + offset
        s1 = rows[:, 1][:, None] + pts[:, 1][None, :] + offset
        base = la[rows[:, 0] + offset, rows[:, 1] + offset]
        vals = lsum[s0, s1] - base[:, None] - lb_j[None, :]
        sl = slice(start, start + rows.shape[0])
        row_arg[sl] = np.argmax(vals, axis=1)
        row_best[sl] = vals[np.arange(rows.shape[0]), row_arg[sl]]
    return _reduce(row_best, row_arg)


def diag_sup(mag, nthreads=1):
    mag = np.asarray(mag, dtype=float)
    n = mag.shape[0]
    out = np.zeros(max(2 * n - 1, 0))
    for t in range(2 * n - 1):
        k = t - (n - 1)
        # a[j, j-k] lies on numpy's diagonal number -k
        diag = np.diagonal(mag, offset=-k)
        out[t] = max(float(diag.max()), 0.0) if diag.size else 0.0
    return out
