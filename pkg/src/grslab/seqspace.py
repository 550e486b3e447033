"""Weighted l^p norms on finite sections of Z^d and the l^1 identity probe."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .weightlab import (FAIL, INCONCLUSIVE, PASS, Weight, check_grs_via_limit,
                        check_grs_via_subexp)

SUMMABLE, DIVERGENT = "summable", "divergent"

# dense-storage caps per dimension
MAX_HALF_WIDTH = {1: 512, 2: 64}
SEQ_IDENTITY_EPS = (1.0, 0.5, 0.1, 0.05)


@dataclass(frozen=True)
class LatticeSeq:
    """Real values on the centred cube {-K..K}^d, stored densely."""

    dim: int
    K: int
    values: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self):
        cap = MAX_HALF_WIDTH.get(self.dim, 16)
        if self.dim < 1 or self.K < 0:
            raise ValueError("dim must be positive and K non-negative")
        if self.K > cap:
            raise ValueError(f"half width {self.K} exceeds the d={self.dim} cap of {cap}")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (2 * self.K + 1,) * self.dim:
            raise ValueError("values must cover the centred cube exactly")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sequence values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, fn, K: int, dim: int = 1) -> "LatticeSeq":
        """Sample ``fn`` at the lattice points (array of shape (..., dim))."""
        return cls(dim, K, np.asarray(fn(lattice_points(dim, K)), dtype=float))

    @classmethod
    def delta(cls, K: int, dim: int = 1) -> "LatticeSeq":
        vals = np.zeros((2 * K + 1,) * dim)
        vals[(K,) * dim] = 1.0
        return cls(dim, K, vals)

    def scaled(self, lam: float) -> "LatticeSeq":
        return LatticeSeq(self.dim, self.K, lam * self.values)


def lattice_points(dim: int, K: int) -> np.ndarray:
    """Integer points of {-K..K}^d as floats, shape (2K+1,)*d + (d,)."""
    ax = np.arange(-K, K + 1, dtype=float)
    return np.stack(np.meshgrid(*([ax] * dim), indexing="ij"), axis=-1)


def _log_terms(a: LatticeSeq, w: Weight) -> np.ndarray:
    if w.dim != a.dim:
        raise ValueError("weight and sequence dimensions differ")
    with np.errstate(divide="ignore"):
        return np.log(np.abs(a.values)) + w.log_eval(lattice_points(a.dim, a.K))


def _check_p(p: float) -> float:
    p = float(p)
    if not p > 0:
        raise ValueError("p must lie in (0, inf]")
    return p


def weighted_lp_norm(a: LatticeSeq, w: Weight, p: float) -> float:
    """(sum_k |a(k) w(k)|^p)^(1/p); the sup for p = inf.

    Summation runs in the log domain, so the result only overflows when
    the true value does.
    """
    p = _check_p(p)
    lt = _log_terms(a, w)
    if np.all(lt == -np.inf):
        return 0.0
    if math.isinf(p):
        log_norm = float(lt.max())
    else:
        log_norm = float(logsumexp(p * lt)) / p
    return math.exp(log_norm) if log_norm < 709.7 else math.inf


def _shell_logmass(lt: np.ndarray, K: int, radii, p: float) -> list[float]:
    """log of the p-mass (or log max for p = inf) of each |k|_inf shell."""
    dim = lt.ndim
    grid = np.abs(lattice_points(dim, K)).max(axis=-1)
    out, inner = [], -1
    for r in radii:
        sel = lt[(grid > inner) & (grid <= r)]
        if sel.size == 0 or np.all(sel == -np.inf):
            out.append(-math.inf)
        elif math.isinf(p):
            out.append(float(sel.max()))
        else:
            out.append(float(logsumexp(p * sel)))
        inner = r
    return out


def tail_growth_probe(a: LatticeSeq, w: Weight, p: float, windows: int = 8) -> str:
    """Finite-section surrogate for ``a in l^p_(w)``.

    Partial masses are taken on nested cubes of half width K/windows,
    2K/windows, ..., K. Only the increments from the outer half of the
    windows are judged: ``summable`` when each is at most 0.9 times the
    previous one (or the tail is identically zero), ``divergent`` when
    they never decrease, ``inconclusive`` otherwise.
    """
    p = _check_p(p)
    if windows < 3:
        raise ValueError("windows must be >= 3")
    radii = sorted({max(1, round(i * a.K / windows)) for i in range(1, windows + 1)})
    if len(radii) < 3:
        raise ValueError("section too small for the requested windows")
    logmass = _shell_logmass(_log_terms(a, w), a.K, radii, p)
    shells = logmass[1:]
    tail = shells[min(len(shells) // 2, len(shells) - 2):]
    if all(m == -math.inf for m in tail):
        return SUMMABLE
    log_ratio = math.log(0.9)
    steps = list(zip(tail[:-1], tail[1:]))
    if all(b == -math.inf or (a_ > -math.inf and b - a_ <= log_ratio) for a_, b in steps):
        return SUMMABLE
    if all(b >= a_ for a_, b in steps):
        return DIVERGENT
    return INCONCLUSIVE


def _grs_ok(w: Weight) -> bool:
    return check_grs_via_limit(w).verdict == PASS and check_grs_via_subexp(w).verdict == PASS


def identity_experiment(test_seqs, grs_battery, eps_list=SEQ_IDENTITY_EPS, p: float = 1.0,
                        windows: int = 8) -> list[dict]:
    """Compare membership in the union of l^1_(v_eps) with the intersection over a GRS battery.

    ``test_seqs`` is a list of (sequence_id, LatticeSeq) pairs and
    ``grs_battery`` a list of (weight_id, Weight) pairs. Each row reports
    ``verdict_left`` (some v_eps summable), ``verdict_right`` (every battery
    weight summable) and whether the two agree.
    """
    battery = list(grs_battery)
    for wid, w in battery:
        if not _grs_ok(w):
            raise ValueError(f"battery weight {wid} does not pass the GRS checks")
    rows = []
    for sid, a in test_seqs:
        per_eps = {}
        for eps in eps_list:
            per_eps[f"v_eps={eps!r}"] = tail_growth_probe(a, Weight.subexp(eps, 1.0, a.dim), p, windows)
        per_weight = {wid: tail_growth_probe(a, w, p, windows) for wid, w in battery}
        left_vals = list(per_eps.values())
        if SUMMABLE in left_vals:
            left = PASS
        elif all(v == DIVERGENT for v in left_vals):
            left = FAIL
        else:
            left = INCONCLUSIVE
        right_vals = list(per_weight.values())
        if DIVERGENT in right_vals:
            right = FAIL
        elif all(v == SUMMABLE for v in right_vals):
            right = PASS
        else:
            right = INCONCLUSIVE
        decided = INCONCLUSIVE not in (left, right)
        rows.append({
            "sequence_id": sid,
            "verdict_left": left,
            "verdict_right": right,
            "agree": (left == right) if decided else None,
            "per_eps": per_eps,
            "per_weight": per_weight,
        })
    return rows


def agreement_rate(rows) -> float:
    decided = [r for r in rows if r["agree"] is not None]
    if not decided:
        return math.nan
    return sum(r["agree"] for r in decided) / len(decided)


def load_seq_csv(path) -> LatticeSeq:
    """Columns ``k_1..k_d,value``; the index set must be a full centred cube."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[-1].strip() != "value":
            raise ValueError(f"{path}: header k_1..k_d,value required")
        rows = [row for row in reader if row]
    dim = len(header) - 1
    idx = np.array([[int(v) for v in row[:-1]] for row in rows], dtype=np.int64)
    vals = np.array([float(row[-1]) for row in rows])
    K = int(np.abs(idx).max()) if idx.size else 0
    out = np.full((2 * K + 1,) * dim, np.nan)
    out[tuple((idx + K).T)] = vals
    if np.isnan(out).any():
        raise ValueError(f"{path}: index set is not the full cube")
    return LatticeSeq(dim, K, out)


def save_seq_csv(a: LatticeSeq, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow([f"k_{j + 1}" for j in range(a.dim)] + ["value"])
        for index in np.ndindex(*a.values.shape):
            out.writerow([i - a.K for i in index] + [repr(float(a.values[index]))])
