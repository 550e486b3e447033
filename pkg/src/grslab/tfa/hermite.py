"""Finite Hermite expansions and Gelfand-Shilov seminorm probes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .signals import SampledSignal, symmetric_grid

MAX_DEGREE = 64
MAX_ORDER = 12
MEMBER, NON_MEMBER = "member", "non-member"
DEFAULT_H_GRID = (0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
STABILITY_TOL = 0.05
GROWTH_TOL = 0.05


def hermite_functions(n: int, x) -> np.ndarray:
    """L^2-normalised Hermite functions h_0..h_{n-1} at x, shape (n,) + x.shape.

    Uses the three-term recurrence on the functions themselves, which stays
    in range far beyond the point where H_m(x) e^{-x^2/2} would overflow.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((max(n, 1),) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-x ** 2 / 2)
    if n > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for m in range(1, n - 1):
        out[m + 1] = math.sqrt(2.0 / (m + 1)) * x * out[m] - math.sqrt(m / (m + 1)) * out[m - 1]
    return out[:n]


def derivative_coefficients(c: np.ndarray) -> np.ndarray:
    """Hermite coefficients of f' from those of f (length grows by one)."""
    c = np.asarray(c, dtype=float)
    ext = np.concatenate([c, [0.0, 0.0]])
    k = np.arange(c.size + 1)
    up = ext[1:c.size + 2] * np.sqrt((k + 1) / 2)
    down = np.concatenate([[0.0], c]) * np.sqrt(k / 2)
    return up - down


@dataclass(frozen=True)
class GSFunction:
    """f = sum_m c_m h_m with M <= 64."""

    coefficients: np.ndarray = field(repr=False)
    label: str = "f"

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty vector")
        if c.size - 1 > MAX_DEGREE:
            raise ValueError(f"degree {c.size - 1} exceeds {MAX_DEGREE}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def hermite(cls, m: int, scale: float = 1.0) -> "GSFunction":
        c = np.zeros(m + 1)
        c[m] = scale
        return cls(c, f"h{m}")

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def derivative(self, order: int = 1) -> np.ndarray:
        c = self.coefficients
        for _ in range(order):
            c = derivative_coefficients(c)
        return c

    def __call__(self, x, order: int = 0) -> np.ndarray:
        c = self.derivative(order)
        return np.tensordot(c, hermite_functions(c.size, x), axes=1)

    def sample(self, extent: float = 12.0, spacing: float = 0.05) -> SampledSignal:
        return SampledSignal(self(symmetric_grid(extent, spacing)).astype(complex), spacing, extent)


def _check_orders(alpha_max: int, beta_max: int) -> None:
    for name, v in (("alpha_max", alpha_max), ("beta_max", beta_max)):
        if not 0 <= v <= MAX_ORDER:
            raise ValueError(f"{name} must lie in [0, {MAX_ORDER}]")


def log_moment_table(f: GSFunction, alpha_max: int = MAX_ORDER, beta_max: int = MAX_ORDER,
                     R: float = 8.0, h_x: float = 0.05) -> np.ndarray:
    """T[a, b] = log sup_{|x| <= R} |x^b f^(a)(x)| over the sampling grid."""
    _check_orders(alpha_max, beta_max)
    x = symmetric_grid(R, h_x)
    with np.errstate(divide="ignore"):
        logx = np.log(np.abs(x))
        table = np.empty((alpha_max + 1, beta_max + 1))
        for a in range(alpha_max + 1):
            logd = np.log(np.abs(f(x, a)))
            for b in range(beta_max + 1):
                # x^0 = 1 everywhere, including x = 0
                table[a, b] = np.max(logd + b * logx) if b else np.max(logd)
    return table


def _seminorm_from_table(table: np.ndarray, s: float, h: float) -> float:
    a = np.arange(table.shape[0])[:, None]
    b = np.arange(table.shape[1])[None, :]
    denom = (a + b) * math.log(h) + s * (gammaln(a + 1) + gammaln(b + 1))
    val = float(np.max(table - denom))
    if val == -math.inf:
        return 0.0
    return math.exp(val) if val < 709.7 else math.inf


def gs_seminorm(f: GSFunction, s: float, h: float, alpha_max: int = 4, beta_max: int = 4,
                R: float = 8.0, h_x: float = 0.05) -> float:
    """sup |x^b f^(a)(x)| / (h^(a+b) a!^s b!^s) over a <= alpha_max, b <= beta_max, |x| <= R."""
    if h <= 0:
        raise ValueError("h must be positive")
    return _seminorm_from_table(log_moment_table(f, alpha_max, beta_max, R, h_x), s, h)


def growth_exponent(table: np.ndarray, lo: int = 4) -> float:
    """Least-squares Gevrey exponent of the moment table.

    Fits T[a, b] ~ k0 + k1 (a + b) + sigma (log a! + log b!) over
    lo <= a, b; sigma estimates the smallest s for which the seminorms can
    stay bounded.
    """
    a, b = np.meshgrid(np.arange(lo, table.shape[0]), np.arange(lo, table.shape[1]), indexing="ij")
    t = table[lo:, lo:]
    ok = np.isfinite(t)
    if ok.sum() < 4:
        return math.nan
    design = np.column_stack([np.ones(ok.sum()), (a + b)[ok], (gammaln(a + 1) + gammaln(b + 1))[ok]])
    coef, *_ = np.linalg.lstsq(design, t[ok], rcond=None)
    return float(coef[2])


@dataclass(frozen=True)
class GSProbeResult:
    verdict: str
    h_min: float | None
    growth_exponent: float
    stable: dict

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "h_min": self.h_min,
                "growth_exponent": self.growth_exponent, "stable": dict(self.stable)}


def gs_membership_probe(f: GSFunction, s: float, h_grid=DEFAULT_H_GRID, order_cap: int = MAX_ORDER,
                        R: float = 8.0, h_x: float = 0.05, tol: float = STABILITY_TOL,
                        growth_tol: float = GROWTH_TOL) -> GSProbeResult:
    """Desk-scale test of f in S_s.

    At each h the seminorm over orders <= order_cap/2 is compared with the
    one over orders <= order_cap; h counts as stable when the relative
    change is at most ``tol``. Truncated orders cannot expose growth that
    only a large h absorbs, so membership also requires the fitted growth
    exponent of the moment table to be at most s + growth_tol.
    """
    grid = [float(h) for h in h_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("h_grid must be non-empty and increasing")
    if f.is_zero:
        return GSProbeResult(MEMBER, grid[0], -math.inf, {repr(h): True for h in grid})
    table = log_moment_table(f, order_cap, order_cap, R, h_x)
    half = table[:order_cap // 2 + 1, :order_cap // 2 + 1]
    stable = {}
    for h in grid:
        lo, hi = _seminorm_from_table(half, s, h), _seminorm_from_table(table, s, h)
        stable[repr(h)] = bool(math.isfinite(hi) and hi <= lo * (1 + tol))
    sigma = growth_exponent(table, lo=order_cap // 3)
    h_min = next((h for h in grid if stable[repr(h)]), None)
    ok = h_min is not None and not sigma > s + growth_tol
    return GSProbeResult(MEMBER if ok else NON_MEMBER, h_min, sigma, stable)
