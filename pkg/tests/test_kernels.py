import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grslab import kernels
from grslab.weightlab import Weight, _ball_points, _cube_logtable

BACKENDS = sorted(kernels.BACKENDS)


def brute_pair_excess(lsum, la, lb, pts, offset):
    best, arg = -np.inf, (0, 0)
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            key = tuple(np.atleast_1d(p + q + offset))
            val = lsum[key] - la[tuple(np.atleast_1d(p + offset))] - lb[tuple(np.atleast_1d(q + offset))]
            if val > best:
                best, arg = val, (i, j)
    return best, arg


def test_compiled_backend_selected_when_built():
    assert kernels.BACKEND in ("compiled", "python")
    assert "python" in kernels.BACKENDS


@pytest.mark.parametrize("backend", BACKENDS)
def test_pair_excess_1d_matches_brute_force(backend):
    rng = np.random.default_rng(1)
    m = 6
    tab = rng.standard_normal(4 * m + 1)
    pts = np.arange(-m, m + 1)
    val, i, j = kernels.pair_excess(tab, tab, tab, pts, 2 * m, backend=backend)
    ref, (ri, rj) = brute_pair_excess(tab, tab, tab, pts, 2 * m)
    assert val == pytest.approx(ref, abs=1e-15)
    assert (i, j) == (ri, rj)


@pytest.mark.parametrize("backend", BACKENDS)
def test_pair_excess_2d_matches_brute_force(backend):
    rng = np.random.default_rng(2)
    m = 3
    tab = rng.standard_normal((4 * m + 1, 4 * m + 1))
    pts, _ = _ball_points(2, m, 1.0)
    val, i, j = kernels.pair_excess(tab, tab, tab, pts, 2 * m, backend=backend)
    ref, (ri, rj) = brute_pair_excess(tab, tab, tab, pts, 2 * m)
    assert val == pytest.approx(ref, abs=1e-15)
    assert (i, j) == (ri, rj)


@pytest.mark.parametrize("backend", BACKENDS)
def test_ties_resolve_to_first_pair(backend):
    tab = np.zeros(21)
    pts = np.arange(-5, 6)
    assert kernels.pair_excess(tab, tab, tab, pts, 10, backend=backend) == (0.0, 0, 0)


@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_diag_sup_backends_agree(n, seed):
    mag = np.abs(np.random.default_rng(seed).standard_normal((n, n)))
    outs = [kernels.diag_sup(mag, backend=b) for b in BACKENDS]
    ref = np.array([np.diagonal(mag, offset=-k).max() for k in range(-(n - 1), n)])
    for out in outs:
        np.testing.assert_array_equal(out, ref)


@given(st.integers(0, 2**32 - 1), st.integers(2, 30))
def test_pair_excess_backends_agree(seed, m):
    tab = np.random.default_rng(seed).standard_normal(4 * m + 1)
    pts = np.arange(-m, m + 1)
    outs = {kernels.pair_excess(tab, tab, tab, pts, 2 * m, backend=b) for b in BACKENDS}
    assert len(outs) == 1


def test_thread_count_does_not_change_result(monkeypatch):
    w = Weight.subexp(1.0, 0.5, 2)
    pts, m = _ball_points(2, 12, 1.0)
    tab = _cube_logtable(w, m, 1.0)
    results = set()
    for n in ("1", "2", "4"):
        monkeypatch.setenv("GRSLAB_THREADS", n)
        results.add(kernels.pair_excess(tab, tab, tab, pts, 2 * m))
    assert len(results) == 1


def test_bad_point_shape_rejected():
    with pytest.raises(ValueError):
        kernels.pair_excess(np.zeros(5), np.zeros(5), np.zeros(5), np.zeros((3, 3), dtype=int), 2)
