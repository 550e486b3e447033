"""Mixed modulation norms, unit-cube STFT coefficients and the cube membership probe."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from ..seqspace import DIVERGENT, SUMMABLE, LatticeSeq, tail_growth_probe
from ..weightlab import Weight
from .signals import SampledSignal, STFTGrid, stft

FINITE = "finite"
_PROBE_VERDICT = {SUMMABLE: FINITE, DIVERGENT: DIVERGENT}


def _check_exponent(p: float, name: str) -> float:
    p = float(p)
    if not p > 0:
        raise ValueError(f"{name} must lie in (0, inf]")
    return p


def _log_abs(values: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values))


def _log_lp(logs: np.ndarray, p: float, h: float, axis: int) -> np.ndarray:
    """log of (h * sum exp(p * logs))^(1/p) along ``axis``, or the max for p = inf."""
    if math.isinf(p):
        return logs.max(axis=axis)
    with np.errstate(invalid="ignore"):
        out = (logsumexp(p * logs, axis=axis) + math.log(h)) / p
    return np.where(np.all(logs == -np.inf, axis=axis), -np.inf, out)


def modulation_norm(V: STFTGrid, omega: Weight, p: float, q: float) -> float:
    """Discrete (p, q) mixed norm of V * omega: x inner, xi outer, Riemann weights."""
    p = _check_exponent(p, "p")
    q = _check_exponent(q, "q")
    if omega.dim != 2:
        raise ValueError("omega must be a weight on R^2")
    pts = np.stack(np.meshgrid(V.xs, V.xis, indexing="ij"), axis=-1)
    logs = _log_abs(V.values) + omega.log_eval(pts)
    inner = _log_lp(logs, p, V.h_x, axis=0)
    total = float(_log_lp(inner, q, V.h_xi, axis=0))
    if total == -math.inf:
        return 0.0
    return math.exp(total) if total < 709.7 else math.inf


@dataclass(frozen=True)
class CubeCoeffSeq:
    """Unit-cube coefficients on {-cap..cap}^2; ``values[i, j]`` sits at n = (i - cap, j - cap)."""

    cap: int
    p: float
    values: np.ndarray = field(repr=False)

    def as_lattice(self) -> LatticeSeq:
        return LatticeSeq(2, self.cap, self.values)

    def weighted_norm(self, omega: Weight) -> float:
        """l^p norm of the coefficients weighted by omega(n)."""
        from ..seqspace import weighted_lp_norm
        return weighted_lp_norm(self.as_lattice(), omega, self.p)


def _cells_per_unit(h: float) -> int:
    k = round(1.0 / h)
    if k < 1 or abs(k * h - 1.0) > 1e-9:
        raise ValueError(f"grid spacing {h} does not divide 1")
    return k


def cube_coefficients(V: STFTGrid, p: float, cap: int | None = None) -> CubeCoeffSeq:
    """(int over n + [0,1)^2 of |V|^p)^(1/p) by Riemann sums; sup over the cube for p = inf.

    Grid points are assigned to the half-open cube containing them, so cubes
    never overlap. The default cap keeps every cube inside the STFT extent.
    """
    p = _check_exponent(p, "p")
    _cells_per_unit(V.h_x)
    _cells_per_unit(V.h_xi)
    if cap is None:
        cap = int(math.floor(min(V.R_x, V.R_xi))) - 1
    if cap < 0:
        raise ValueError("STFT extent too small for a unit cube")
    size = 2 * cap + 1
    ix = np.floor(V.xs + 1e-9).astype(np.int64) + cap
    iy = np.floor(V.xis + 1e-9).astype(np.int64) + cap
    keep_x = (ix >= 0) & (ix < size)
    keep_y = (iy >= 0) & (iy < size)
    mag = np.abs(V.values)[np.ix_(keep_x, keep_y)]
    bx, by = ix[keep_x], iy[keep_y]
    out = np.zeros((size, size))
    if math.isinf(p):
        np.maximum.at(out, (bx[:, None], by[None, :]), mag)
    else:
        np.add.at(out, (bx[:, None], by[None, :]), mag ** p * (V.h_x * V.h_xi))
        out = out ** (1.0 / p)
    return CubeCoeffSeq(cap, p, out)


def membership_probe_modulation(f: SampledSignal, phi: SampledSignal, omega: Weight, p: float,
                                stft_kwargs: dict | None = None) -> str:
    """``finite``, ``divergent`` or ``inconclusive`` for f in M^{p,p}_(omega).

    The weighted cube-coefficient sequence is judged by the nested-window
    tail probe with one window per unit of the cap.
    """
    V = stft(f, phi, **(stft_kwargs or {}))
    coeffs = cube_coefficients(V, p)
    verdict = tail_growth_probe(coeffs.as_lattice(), omega, p, windows=coeffs.cap)
    return _PROBE_VERDICT.get(verdict, verdict)
