"""Sampled signals, the trapezoid Fourier transform and the short-time Fourier transform."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

_NORM = (2 * np.pi) ** -0.5
_COMMENSURATE_TOL = 1e-9

DEFAULT_EXTENT = 12.0
DEFAULT_SPACING = 0.05
DEFAULT_STFT_EXTENT = 8.0
DEFAULT_STFT_SPACING = 0.25


def _grid_count(extent: float, spacing: float) -> int:
    ratio = 2 * extent / spacing
    n = int(round(ratio))
    if abs(ratio - n) > _COMMENSURATE_TOL * max(1.0, ratio):
        raise ValueError(f"extent {extent} is not a multiple of spacing {spacing} / 2")
    return n + 1


def symmetric_grid(extent: float, spacing: float) -> np.ndarray:
    n = _grid_count(extent, spacing)
    return spacing * (np.arange(n) - (n - 1) // 2)


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples on the symmetric grid -R, -R + h, ..., R."""

    samples: np.ndarray = field(repr=False)
    spacing: float
    extent: float

    def __post_init__(self):
        if self.spacing <= 0 or self.extent <= 0:
            raise ValueError("spacing and extent must be positive")
        n = _grid_count(self.extent, self.spacing)
        vals = np.asarray(self.samples, dtype=complex)
        if vals.shape != (n,):
            raise ValueError(f"expected {n} samples, got shape {vals.shape}")
        object.__setattr__(self, "samples", vals)

    @classmethod
    def from_function(cls, fn, extent: float = DEFAULT_EXTENT,
                      spacing: float = DEFAULT_SPACING) -> "SampledSignal":
        return cls(np.asarray(fn(symmetric_grid(extent, spacing)), dtype=complex), spacing, extent)

    @property
    def grid(self) -> np.ndarray:
        return symmetric_grid(self.extent, self.spacing)

    def l2_norm(self) -> float:
        """Trapezoid approximation of the L^2 norm."""
        w = _trapezoid_weights(self.samples.size, self.spacing)
        return math.sqrt(float(np.sum(w * np.abs(self.samples) ** 2)))

    def shifted(self, shift: float) -> "SampledSignal":
        """Translation f(. - shift) by a whole number of samples, zero-filled."""
        k = _as_steps(shift, self.spacing)
        out = np.zeros_like(self.samples)
        n = out.size
        if k >= 0:
            out[k:] = self.samples[:n - k]
        else:
            out[:n + k] = self.samples[-k:]
        return SampledSignal(out, self.spacing, self.extent)

    def __add__(self, other: "SampledSignal") -> "SampledSignal":
        _check_same_grid(self, other)
        return SampledSignal(self.samples + other.samples, self.spacing, self.extent)

    def __mul__(self, scalar) -> "SampledSignal":
        return SampledSignal(scalar * self.samples, self.spacing, self.extent)

    __rmul__ = __mul__


def _check_same_grid(f: SampledSignal, g: SampledSignal) -> None:
    if f.samples.size != g.samples.size or not math.isclose(f.spacing, g.spacing):
        raise ValueError("signals live on different grids")


def _as_steps(length: float, spacing: float) -> int:
    ratio = length / spacing
    k = int(round(ratio))
    if abs(ratio - k) > _COMMENSURATE_TOL * max(1.0, abs(ratio)):
        raise ValueError(f"{length} is not a multiple of the signal spacing {spacing}")
    return k


def _trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    if n > 1:
        w[0] = w[-1] = h / 2
    return w


def dft(f: SampledSignal, xi_spacing: float | None = None,
        xi_extent: float | None = None) -> SampledSignal:
    """(2 pi)^(-1/2) int f(x) e^{-i x xi} dx by the trapezoid rule.

    The frequency grid defaults to the input grid (same spacing and extent).
    """
    hxi = f.spacing if xi_spacing is None else xi_spacing
    rxi = f.extent if xi_extent is None else xi_extent
    x = f.grid
    xi = symmetric_grid(rxi, hxi)
    weighted = _trapezoid_weights(x.size, f.spacing) * f.samples
    out = _NORM * (np.exp(-1j * np.outer(xi, x)) @ weighted)
    return SampledSignal(out, hxi, rxi)


@dataclass(frozen=True)
class STFTGrid:
    """V(x_m, xi_n) on symmetric grids; ``values[m, n]``."""

    values: np.ndarray = field(repr=False)
    h_x: float
    h_xi: float
    R_x: float
    R_xi: float
    window_id: str = "window"

    def __post_init__(self):
        shape = (_grid_count(self.R_x, self.h_x), _grid_count(self.R_xi, self.h_xi))
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != shape:
            raise ValueError(f"STFT values have shape {vals.shape}, grids imply {shape}")
        object.__setattr__(self, "values", vals)

    @property
    def xs(self) -> np.ndarray:
        return symmetric_grid(self.R_x, self.h_x)

    @property
    def xis(self) -> np.ndarray:
        return symmetric_grid(self.R_xi, self.h_xi)

    def meta(self) -> dict:
        return {"h_x": self.h_x, "h_xi": self.h_xi, "R_x": self.R_x, "R_xi": self.R_xi,
                "window_id": self.window_id, "shape": list(self.values.shape)}


def stft(f: SampledSignal, phi: SampledSignal, h_x: float = DEFAULT_STFT_SPACING,
         h_xi: float = DEFAULT_STFT_SPACING, R_x: float = DEFAULT_STFT_EXTENT,
         R_xi: float = DEFAULT_STFT_EXTENT, window_id: str = "window") -> STFTGrid:
    """V_phi f(x, xi) = (2 pi)^(-1/2) int f(y) conj(phi(y - x)) e^{-i y xi} dy.

    Window translates are exact grid shifts (zero outside the signal
    grid), so the x spacing must be a multiple of the signal spacing.
    """
    _check_same_grid(f, phi)
    if not np.any(phi.samples):
        raise ValueError("window is identically zero")
    step = _as_steps(h_x, f.spacing)
    m = _as_steps(R_x, h_x)
    n = f.samples.size
    shifts = step * np.arange(-m, m + 1)
    src = np.arange(n)[None, :] - shifts[:, None]
    valid = (src >= 0) & (src < n)
    window = np.where(valid, np.conj(phi.samples)[np.clip(src, 0, n - 1)], 0.0)
    G = window * (f.samples * _trapezoid_weights(n, f.spacing))[None, :]
    xi = symmetric_grid(R_xi, h_xi)
    E = np.exp(-1j * np.outer(f.grid, xi))
    return STFTGrid(_NORM * (G @ E), h_x, h_xi, R_x, R_xi, window_id)


def gaussian_window(width: float = 1.0, extent: float = DEFAULT_EXTENT,
                    spacing: float = DEFAULT_SPACING) -> SampledSignal:
    """L^2-normalised Gaussian with standard deviation ``width``."""
    c = (np.pi * width ** 2) ** -0.25
    return SampledSignal.from_function(lambda y: c * np.exp(-y ** 2 / (2 * width ** 2)), extent, spacing)


def load_signal_csv(path) -> SampledSignal:
    """Columns ``x,re,im`` on a symmetric uniform grid."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "re", "im"]:
            raise ValueError(f"{path}: header x,re,im required")
        rows = np.array([[float(v) for v in r] for r in reader if r])
    x = rows[:, 0]
    h = float(np.mean(np.diff(x)))
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0) or not math.isclose(x[0], -x[-1], abs_tol=1e-9 * h):
        raise ValueError(f"{path}: grid must be uniform and symmetric")
    extent = float(x[-1])
    h = 2 * extent / (x.size - 1)
    return SampledSignal(rows[:, 1] + 1j * rows[:, 2], h, extent)


def save_signal_csv(f: SampledSignal, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["x", "re", "im"])
        for x, v in zip(f.grid, f.samples):
            out.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])


def save_stft(V: STFTGrid, path) -> tuple[str, str]:
    """Write ``x,xi,re,im`` rows plus a JSON sidecar with spacings and extents."""
    path = str(path)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["x", "xi", "re", "im"])
        for i, x in enumerate(V.xs):
            for j, xi in enumerate(V.xis):
                v = V.values[i, j]
                out.writerow([repr(float(x)), repr(float(xi)), repr(float(v.real)), repr(float(v.imag))])
    sidecar = stft_sidecar_path(path)
    with open(sidecar, "w") as fh:
        json.dump(V.meta(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path, sidecar


def stft_sidecar_path(path) -> str:
    """``name.csv`` pairs with ``name.json``; any other name gets ``.json`` appended."""
    path = str(path)
    return path[:-4] + ".json" if path.lower().endswith(".csv") else path + ".json"


def load_stft(path) -> STFTGrid:
    path = str(path)
    with open(stft_sidecar_path(path)) as fh:
        meta = json.load(fh)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        rows = np.array([[float(v) for v in r] for r in reader if r])
    vals = (rows[:, 2] + 1j * rows[:, 3]).reshape(meta["shape"])
    return STFTGrid(vals, meta["h_x"], meta["h_xi"], meta["R_x"], meta["R_xi"], meta["window_id"])
