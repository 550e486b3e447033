"""Finite sections of lattice matrices, the A_v norm, decay profiles and inversion."""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, stats
from scipy.special import logsumexp

from . import kernels
from .weightlab import Weight

MAX_N = 512


class SingularSectionError(ArithmeticError):
    """The finite section is numerically singular."""


@dataclass(frozen=True)
class LatticeMatrix:
    """Entries a(j, k) for j, k in {-N..N} (d = 1), stored densely.

    Row/column position ``i`` corresponds to lattice index ``i - N``.
    """

    N: int
    data: np.ndarray = field(compare=False, repr=False)
    dim: int = 1

    def __post_init__(self):
        if self.dim != 1:
            raise NotImplementedError("only d = 1 index lattices are supported")
        a = np.asarray(self.data)
        if not np.iscomplexobj(a):
            a = a.astype(float)
        n = 2 * self.N + 1
        if a.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} section, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        object.__setattr__(self, "data", a)

    @property
    def size(self) -> int:
        return 2 * self.N + 1

    @classmethod
    def identity(cls, N: int) -> "LatticeMatrix":
        return cls(N, np.eye(2 * N + 1))

    @classmethod
    def toeplitz(cls, N: int, symbol) -> "LatticeMatrix":
        """a(j, k) = symbol(j - k), ``symbol`` vectorised over integer offsets."""
        idx = np.arange(-N, N + 1)
        return cls(N, np.asarray(symbol(idx[:, None] - idx[None, :]), dtype=float))

    def padded(self, N: int) -> "LatticeMatrix":
        """Embed into the larger section {-N..N} with zeros outside."""
        if N < self.N:
            raise ValueError("padding cannot shrink a section")
        out = np.zeros((2 * N + 1, 2 * N + 1), dtype=self.data.dtype)
        lo = N - self.N
        out[lo:lo + self.size, lo:lo + self.size] = self.data
        return LatticeMatrix(N, out)

    def central(self, N: int) -> "LatticeMatrix":
        """The sub-section {-N..N} of this section."""
        if N > self.N:
            raise ValueError("central block larger than the section")
        lo = self.N - N
        return LatticeMatrix(N, self.data[lo:lo + 2 * N + 1, lo:lo + 2 * N + 1])

    def __matmul__(self, other: "LatticeMatrix") -> "LatticeMatrix":
        if other.N != self.N:
            raise ValueError("sections differ")
        return LatticeMatrix(self.N, self.data @ other.data)


def diagonal_sups(A: LatticeMatrix, rows: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Offsets k = -2N..2N and d_k = sup_j |a(j, j - k)| over pairs inside the section.

    With ``rows`` given, j is restricted to |j| <= rows (central band).
    """
    mag = np.abs(A.data)
    n = A.size
    offsets = np.arange(-(n - 1), n)
    if rows is None:
        return offsets, kernels.diag_sup(mag)
    masked = np.zeros_like(mag)
    lo, hi = A.N - rows, A.N + rows + 1
    masked[lo:hi] = mag[lo:hi]
    return offsets, kernels.diag_sup(masked)


def av_norm(A: LatticeMatrix, v: Weight) -> float:
    """sum_k (sup_j |a(j, j - k)|) v(k) over the section's offsets."""
    if v.dim != A.dim:
        raise ValueError("weight and matrix dimensions differ")
    k, d = diagonal_sups(A)
    with np.errstate(divide="ignore"):
        terms = np.log(d) + v.log_eval(k.astype(float))
    if np.all(terms == -np.inf):
        return 0.0
    out = float(logsumexp(terms))
    return math.exp(out) if out < 709.7 else math.inf


@dataclass
class DecayProfile:
    offsets: np.ndarray
    sups: np.ndarray
    rate: float
    amplitude: float | None
    r_squared: float | None
    fit_band: tuple[int, int]

    @property
    def has_fit(self) -> bool:
        return math.isfinite(self.rate)

    def to_dict(self) -> dict:
        return {"rate": self.rate, "amplitude": self.amplitude, "r_squared": self.r_squared,
                "fit_band": list(self.fit_band)}


def fit_exponential(k, d) -> tuple[float, float, float]:
    """Least squares of log d on |k|: returns (rate, amplitude, r^2)."""
    k = np.abs(np.asarray(k, dtype=float))
    d = np.asarray(d, dtype=float)
    keep = d > 0
    k, logd = k[keep], np.log(d[keep])
    if k.size < 2 or np.ptp(k) == 0:
        raise ValueError("need at least two distinct offsets with nonzero entries")
    fit = stats.linregress(k, logd)
    if np.ptp(logd) == 0:
        r2 = 1.0
    else:
        r2 = float(fit.rvalue ** 2)
    return float(-fit.slope), float(math.exp(fit.intercept)), r2


def decay_profile(A: LatticeMatrix, central: bool = False, band=None) -> DecayProfile:
    """Diagonal sups of ``A`` and an exponential envelope fitted on |k| in [N/4, 3N/4].

    ``central=True`` restricts the sups to rows |j| <= N/2, which keeps
    finite-section boundary effects out of inverse-decay measurements.
    An all-zero band yields ``rate = inf`` and no fit.
    """
    rows = A.N // 2 if central else None
    k, d = diagonal_sups(A, rows)
    lo, hi = band if band is not None else (A.N // 4, (3 * A.N) // 4)
    sel = (np.abs(k) >= lo) & (np.abs(k) <= hi) & (d > 0)
    if np.count_nonzero(sel) < 2 or np.ptp(np.abs(k[sel])) == 0:
        return DecayProfile(k, d, math.inf, None, None, (lo, hi))
    rate, amp, r2 = fit_exponential(k[sel], d[sel])
    return DecayProfile(k, d, rate, amp, r2, (lo, hi))


def off_diagonal_mass(c: float, s: float, reach: int = 2 * MAX_N) -> float:
    """sum_{k != 0} exp(-c |k|^s) over |k| <= reach."""
    k = np.arange(1, reach + 1, dtype=float)
    return 2.0 * float(np.sum(np.exp(-c * k ** s)))


def generate_decay_matrix(kind: str, N: int, c: float, s: float = 1.0, seed: int = 0,
                          dominance: float = 0.5) -> LatticeMatrix:
    """Test matrices with |a(j, k)| <= exp(-c |j - k|^s).

    ``toeplitz``: a(j, k) = exp(-c |j - k|^s).
    ``random_sign``: the same magnitudes with seeded signs.
    ``diag_dominant``: unit diagonal plus seeded-sign off-diagonal entries
    scaled so every row's off-diagonal l^1 mass is ``dominance`` < 1.

    Signs are drawn for the largest section and cut down, so the section
    for N is the central block of the section for any larger N.
    """
    if N > MAX_N:
        raise ValueError(f"N = {N} exceeds the cap {MAX_N}")
    if c <= 0 or not 0 < s <= 1:
        raise ValueError("need c > 0 and s in (0, 1]")
    idx = np.arange(-N, N + 1)
    diff = np.abs(idx[:, None] - idx[None, :]).astype(float)
    env = np.exp(-c * diff ** s)
    if kind == "toeplitz":
        return LatticeMatrix(N, env)
    signs = _sign_field(seed, N)
    if kind == "random_sign":
        return LatticeMatrix(N, signs * env)
    if kind == "diag_dominant":
        if not 0 < dominance < 1:
            raise ValueError("dominance must lie in (0, 1)")
        theta = min(1.0, dominance / off_diagonal_mass(c, s))
        a = theta * signs * env
        np.fill_diagonal(a, 1.0)
        return LatticeMatrix(N, a)
    raise ValueError(f"unknown matrix kind {kind!r}")


def _sign_field(seed: int, N: int) -> np.ndarray:
    full = 2 * MAX_N + 1
    rng = np.random.default_rng(seed)
    signs = rng.choice(np.array([-1.0, 1.0]), size=(full, full))
    lo = MAX_N - N
    return signs[lo:lo + 2 * N + 1, lo:lo + 2 * N + 1]


@dataclass
class Inverse:
    matrix: LatticeMatrix
    residual: float


def invert_section(A: LatticeMatrix, pivot_tol: float = 1e-13) -> Inverse:
    """Inverse of the finite section by LU with partial pivoting.

    Raises :class:`SingularSectionError` when a pivot falls below
    ``pivot_tol * max|a|`` or when the residual max|A A^-1 - I| exceeds
    1e-8 (2N + 1).
    """
    a = A.data
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0:
        raise SingularSectionError("zero matrix")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < pivot_tol * scale:
        raise SingularSectionError(f"pivot {pivots.min():.3e} below {pivot_tol:g} * max|a|")
    inv = linalg.lu_solve((lu, piv), np.eye(A.size, dtype=a.dtype), check_finite=False)
    residual = float(np.max(np.abs(a @ inv - np.eye(A.size))))
    if residual > 1e-8 * A.size:
        raise SingularSectionError(f"residual {residual:.3e} exceeds {1e-8 * A.size:.3e}")
    return Inverse(LatticeMatrix(A.N, inv), residual)


def inverse_closedness_experiment(A: LatticeMatrix, c1: float, grs_battery, eps_list=(1.0, 0.5, 0.1)) -> dict:
    """A_v norms of A and A^-1 over a weight battery, plus the decay rate of A^-1.

    ``grs_battery`` is a list of (weight_id, Weight). Flags record whether
    the inverse decays exponentially (c2 > 0), no faster than c1 + 0.1, and
    whether every finite norm of A is matched by a finite norm of A^-1.
    """
    prof_a = decay_profile(A)
    if prof_a.rate < c1 - 0.1:
        raise ValueError(f"A decays at rate {prof_a.rate:.4f}, below c1 - 0.1")
    inv = invert_section(A)
    prof = decay_profile(inv.matrix, central=True)
    weights = list(grs_battery) + [(f"v_eps={e!r}", Weight.subexp(e, 1.0)) for e in eps_list]
    norms = []
    for wid, w in weights:
        norms.append({"weight_id": wid, "norm_A": av_norm(A, w), "norm_Ainv": av_norm(inv.matrix, w)})
    c2 = prof.rate
    flags = {
        "c2_positive": bool(c2 > 0),
        "c2_le_c1_plus_0.1": bool(c2 <= c1 + 0.1) if math.isfinite(c2) else None,
        "finite_pattern_consistent": all(
            math.isfinite(n["norm_Ainv"]) for n in norms if math.isfinite(n["norm_A"])),
        "c2_sentinel": not math.isfinite(c2),
    }
    return {
        "N": A.N,
        "c1": c1,
        "c1_fitted": prof_a.rate,
        "c2": c2,
        "r2": prof.r_squared,
        "fit_band": list(prof.fit_band),
        "residual": inv.residual,
        "norms": norms,
        "flags": flags,
    }


def load_matrix_csv(path) -> LatticeMatrix:
    """Rows ``j,k,value`` with indices in -N..N; missing entries are zero."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) != 3:
            raise ValueError(f"{path}: header row,col,value required")
        rows = [(int(r[0]), int(r[1]), float(r[2])) for r in reader if r]
    N = max(max(abs(j), abs(k)) for j, k, _ in rows) if rows else 0
    a = np.zeros((2 * N + 1, 2 * N + 1))
    for j, k, val in rows:
        a[j + N, k + N] = val
    return LatticeMatrix(N, a)


def save_matrix_csv(A: LatticeMatrix, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["row", "col", "value"])
        for i in range(A.size):
            for j in range(A.size):
                out.writerow([i - A.N, j - A.N, repr(float(A.data[i, j]))])
