"""Weight functions on R^d and finite-scan tests of their growth conditions.

All weights are evaluated in the log domain. Exponential-type weights at
arguments of size 1e4 and beyond overflow otherwise, and the GRS tests
below deliberately push arguments far out.

Finite scans can never *prove* boundedness or a limit, so every condition
test returns a three-way verdict (pass / fail / inconclusive) together
with the witness that realised the extremal quantity.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import kernels

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

FAMILIES = ("constant", "polynomial", "subexp", "product", "tabulated")

DEFAULT_LIMIT_TOL = 0.01
DEFAULT_EXACT_TOL = 1e-9
DEFAULT_EPS = (1.0, 0.5, 0.1, 0.05, 0.01)
# log-domain evaluation keeps arguments up to this size finite
DEFAULT_HORIZON = 1e60


class OutOfHullError(ValueError):
    """A tabulated weight was evaluated outside its grid."""


class WeightSequenceError(ValueError):
    """A weight sequence is not pointwise non-increasing."""


@dataclass(frozen=True)
class _Table:
    steps: tuple[float, ...]
    counts: tuple[int, ...]
    logvalues: np.ndarray = field(compare=False, repr=False)

    @property
    def extent(self) -> tuple[float, ...]:
        return tuple(h * (n - 1) / 2 for h, n in zip(self.steps, self.counts))

    def axes(self):
        return [h * (np.arange(n) - (n - 1) / 2) for h, n in zip(self.steps, self.counts)]


@dataclass(frozen=True)
class Weight:
    """A positive, even weight on R^d from a closed parametric family.

    Use the classmethod constructors rather than the raw fields:
    :meth:`constant`, :meth:`polynomial`, :meth:`subexp`, :meth:`product`,
    :meth:`tabulated`.
    """

    family: str
    dim: int = 1
    r: float = 0.0
    c: float = 0.0
    s: float = 1.0
    factors: tuple["Weight", ...] = ()
    table: _Table | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}")
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        if self.r < 0 or self.c < 0:
            raise ValueError("weight parameters r and c must be >= 0")
        if not 0.0 <= self.s <= 1.0:
            raise ValueError("subexp exponent s must lie in [0, 1]")

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, dim: int = 1) -> "Weight":
        return cls("constant", dim)

    @classmethod
    def polynomial(cls, r: float, dim: int = 1) -> "Weight":
        """(1 + |x|)^r."""
        return cls("polynomial", dim, r=float(r))

    @classmethod
    def subexp(cls, c: float, s: float = 1.0, dim: int = 1) -> "Weight":
        """exp(c |x|^s); s = 1 is the exponential weight."""
        return cls("subexp", dim, c=float(c), s=float(s))

    @classmethod
    def product(cls, factors: Sequence["Weight"]) -> "Weight":
        factors = tuple(factors)
        if not factors:
            raise ValueError("product needs at least one factor")
        dims = {f.dim for f in factors}
        if len(dims) != 1:
            raise ValueError("product factors must share dim")
        return cls("product", dims.pop(), factors=factors)

    @classmethod
    def tabulated(cls, steps, values) -> "Weight":
        """Weight sampled on a uniform grid centred at the origin.

        ``steps`` holds one spacing per axis and ``values`` the positive
        samples (shape = one odd-or-even count per axis). Values are
        symmetrised as (w(x) + w(-x)) / 2 so the weight is exactly even.
        """
        values = np.asarray(values, dtype=float)
        steps = tuple(float(h) for h in np.atleast_1d(steps))
        if values.ndim != len(steps) or values.ndim not in (1, 2):
            raise ValueError("tabulated weights are 1-d or 2-d grids")
        if np.any(~np.isfinite(values)) or np.any(values <= 0):
            raise ValueError("tabulated values must be finite and positive")
        sym = 0.5 * (values + values[(slice(None, None, -1),) * values.ndim])
        table = _Table(steps, tuple(values.shape), np.log(sym))
        return cls("tabulated", values.ndim, table=table)

    @classmethod
    def tabulated_from(cls, fn, extent: float, step: float, dim: int = 1) -> "Weight":
        """Tabulate ``fn`` on [-extent, extent]^dim.

        ``fn`` gets the axis grid itself for dim 1 and an array of points
        of shape (..., dim) otherwise.
        """
        n = int(round(2 * extent / step)) + 1
        ax = step * (np.arange(n) - (n - 1) / 2)
        if dim == 1:
            vals = fn(ax)
        else:
            xx = np.stack(np.meshgrid(*([ax] * dim), indexing="ij"), axis=-1)
            vals = fn(xx)
        return cls.tabulated((step,) * dim, vals)

    # -- evaluation ---------------------------------------------------
    @property
    def extensible(self) -> bool:
        """True when the weight can be evaluated arbitrarily far out."""
        if self.family == "tabulated":
            return False
        if self.family == "product":
            return all(f.extensible for f in self.factors)
        return True

    @property
    def hull_radius(self) -> float:
        """Largest radius of a centred ball contained in the domain."""
        if self.family == "tabulated":
            return min(self.table.extent)
        if self.family == "product":
            return min(f.hull_radius for f in self.factors)
        return math.inf

    def _points(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        if x.shape[-1] != self.dim:
            raise ValueError(f"expected points in R^{self.dim}, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("evaluation points must be finite")
        return x

    def log_eval(self, x) -> np.ndarray:
        """log w(x); ``x`` is a scalar (d=1) or an array with trailing axis d."""
        pts = self._points(x)
        return self._log(pts)

    def _log(self, pts: np.ndarray) -> np.ndarray:
        fam = self.family
        if fam == "constant":
            return np.zeros(pts.shape[:-1])
        if fam == "product":
            out = np.zeros(pts.shape[:-1])
            for f in self.factors:
                out = out + f._log(pts)
            return out
        if fam == "tabulated":
            return self._log_table(pts)
        norm = np.sqrt(np.sum(pts * pts, axis=-1))
        if fam == "polynomial":
            return self.r * np.log1p(norm)
        # convention |0|^0 = 0 keeps w(0) = 1 for s = 0
        powered = np.where(norm > 0, norm ** self.s, 0.0) if self.s == 0 else norm ** self.s
        return self.c * powered

    def _log_table(self, pts):
        t = self.table
        ext = np.asarray(t.extent)
        if np.any(np.abs(pts) > ext * (1 + 1e-12)):
            raise OutOfHullError(f"tabulated weight evaluated outside [-{ext}, {ext}]")
        pts = np.clip(pts, -ext, ext)
        interp = RegularGridInterpolator(t.axes(), t.logvalues, method="linear")
        flat = pts.reshape(-1, self.dim)
        return interp(flat).reshape(pts.shape[:-1])

    def __call__(self, x) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_eval(x))

    @property
    def label(self) -> str:
        suffix = f",dim={self.dim}" if self.dim != 1 else ""
        if self.family == "constant":
            return "constant" + (f":dim={self.dim}" if self.dim != 1 else "")
        if self.family == "polynomial":
            return f"poly:r={_fmt(self.r)}{suffix}"
        if self.family == "subexp":
            return f"subexp:c={_fmt(self.c)},s={_fmt(self.s)}{suffix}"
        if self.family == "product":
            return "*".join(f.label for f in self.factors)
        return f"tabulated:shape={'x'.join(map(str, self.table.counts))}"


def _fmt(v: float) -> str:
    text = repr(float(v))
    return text[:-2] if text.endswith(".0") else text


def eval_weight(w: Weight, x) -> float | np.ndarray:
    """Value of ``w`` at ``x`` (scalar result for a single point)."""
    val = w(x)
    return float(val) if np.ndim(val) == 0 else val


def axis_restrict(w: Weight, j: int = 0) -> Weight:
    """The one-dimensional weight t -> w(t e_j)."""
    if not 0 <= j < w.dim:
        raise ValueError(f"axis {j} out of range for dim {w.dim}")
    if w.dim == 1:
        return w
    if w.family == "constant":
        return Weight.constant()
    if w.family in ("polynomial", "subexp"):
        return Weight(w.family, 1, r=w.r, c=w.c, s=w.s)
    if w.family == "product":
        return Weight.product([axis_restrict(f, j) for f in w.factors])
    t = w.table
    counts = t.counts
    if any(n % 2 == 0 for n in counts):
        raise ValueError("axis restriction of a tabulated weight needs the origin on the grid")
    index = [n // 2 for n in counts]
    index[j] = slice(None)
    return Weight.tabulated((t.steps[j],), np.exp(t.logvalues[tuple(index)]))


# -- weight literals ----------------------------------------------------

_ALIASES = {"const": "constant", "constant": "constant", "poly": "polynomial",
            "polynomial": "polynomial", "subexp": "subexp", "exp": "exp",
            "tabulated": "tabulated"}


def parse_weight(text: str) -> Weight:
    """Parse the compact grammar ``family:key=value,...`` joined by ``*``.

    Examples: ``constant``, ``poly:r=2``, ``subexp:c=1,s=0.5,dim=2``,
    ``exp:c=1`` (same as subexp with s=1), ``poly:r=1*subexp:c=0.5,s=0.5``,
    ``tabulated:file=weights.csv``.
    """
    parts = [p.strip() for p in text.split("*") if p.strip()]
    if not parts:
        raise ValueError("empty weight literal")
    factors = [_parse_factor(p) for p in parts]
    return factors[0] if len(factors) == 1 else Weight.product(factors)


def _parse_factor(text: str) -> Weight:
    name, _, rest = text.partition(":")
    family = _ALIASES.get(name.strip().lower())
    if family is None:
        raise ValueError(f"unknown weight family {name!r}")
    kv = {}
    for item in filter(None, (x.strip() for x in rest.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"malformed weight parameter {item!r}")
        kv[key.strip()] = val.strip()
    if family == "tabulated":
        if set(kv) != {"file"}:
            raise ValueError("tabulated weights take exactly one key: file")
        return load_weight_csv(kv["file"])
    allowed = {"constant": {"dim"}, "polynomial": {"r", "dim"},
               "subexp": {"c", "s", "dim"}, "exp": {"c", "dim"}}[family]
    unknown = set(kv) - allowed
    if unknown:
        raise ValueError(f"unknown keys {sorted(unknown)} for {family}")
    dim = int(kv.get("dim", 1))
    if family == "constant":
        return Weight.constant(dim)
    if family == "polynomial":
        return Weight.polynomial(float(kv["r"]), dim)
    if family == "exp":
        return Weight.subexp(float(kv["c"]), 1.0, dim)
    return Weight.subexp(float(kv["c"]), float(kv.get("s", 1.0)), dim)


def load_weight_csv(path) -> Weight:
    """Read a tabulated weight: header ``x_1,...,x_d,value``, one row per grid point."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[-1].strip() != "value":
            raise ValueError(f"{path}: header x_1..x_d,value required")
        rows = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    dim = len(header) - 1
    if dim not in (1, 2) or rows.size == 0:
        raise ValueError(f"{path}: expected a 1-d or 2-d grid")
    axes = [np.unique(rows[:, k]) for k in range(dim)]
    steps = []
    for ax in axes:
        d = np.diff(ax)
        if ax.size < 2 or not np.allclose(d, d[0], rtol=1e-9, atol=0):
            raise ValueError(f"{path}: grid is not uniform")
        if not np.isclose(ax[0], -ax[-1], atol=1e-9 * d[0]):
            raise ValueError(f"{path}: grid must be symmetric about 0")
        steps.append(float(d[0]))
    values = np.full([ax.size for ax in axes], np.nan)
    idx = tuple(np.searchsorted(ax, rows[:, k]) for k, ax in enumerate(axes))
    values[idx] = rows[:, -1]
    if np.isnan(values).any():
        raise ValueError(f"{path}: grid has holes")
    return Weight.tabulated(steps, values)


def save_weight_csv(w: Weight, path) -> None:
    if w.family != "tabulated":
        raise ValueError("only tabulated weights serialise to CSV")
    axes = w.table.axes()
    vals = np.exp(w.table.logvalues)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow([f"x_{k + 1}" for k in range(w.dim)] + ["value"])
        for index in np.ndindex(*vals.shape):
            out.writerow([repr(float(axes[k][i])) for k, i in enumerate(index)] + [repr(float(vals[index]))])


# -- reports ------------------------------------------------------------

@dataclass
class ConditionReport:
    verdict: str
    witness: list = field(default_factory=list)
    scan_radius: float = 0.0
    tolerance: float = 0.0
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == FAIL and not self.witness:
            raise ValueError("a failing report needs a witness")

    def diag(self, name: str):
        for key, val in self.diagnostics:
            if key == name:
                return val
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness,
            "scan_radius": self.scan_radius,
            "tolerance": self.tolerance,
            "diagnostics": [[k, v] for k, v in self.diagnostics],
        }


def combine(verdicts) -> str:
    """All must pass; any failure fails."""
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if all(v == PASS for v in verdicts):
        return PASS
    return INCONCLUSIVE


# -- scans ----------------------------------------------------------------

def _ball_points(dim: int, radius: float, step: float) -> tuple[np.ndarray, int]:
    m = int(math.floor(radius / step + 1e-9))
    ax = np.arange(-m, m + 1)
    if dim == 1:
        return ax, m
    if dim != 2:
        raise ValueError("pair scans support d <= 2")
    g = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    keep = np.hypot(g[:, 0], g[:, 1]) * step <= radius * (1 + 1e-12)
    return g[keep], m


def _cube_logtable(w: Weight, m: int, step: float) -> np.ndarray:
    """log w on the cube {-2m..2m}^d, -inf outside the ball of radius 2m."""
    ax = step * np.arange(-2 * m, 2 * m + 1)
    if w.dim == 1:
        return w.log_eval(ax[:, None])
    xx = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)
    table = np.full(xx.shape[:2], -np.inf)
    inside = np.hypot(xx[..., 0], xx[..., 1]) <= 2 * m * step * (1 + 1e-12)
    table[inside] = w.log_eval(xx[inside])
    return table


def _pair_scan(lsum: Weight, la: Weight, lb: Weight, radius: float, step: float):
    if radius <= 0 or step <= 0:
        raise ValueError("radius and step must be positive")
    pts, m = _ball_points(lsum.dim, radius, step)
    t_sum = _cube_logtable(lsum, m, step)
    t_a = t_sum if la is lsum else _cube_logtable(la, m, step)
    t_b = t_sum if lb is lsum else (t_a if lb is la else _cube_logtable(lb, m, step))
    val, i, j = kernels.pair_excess(t_sum, t_a, t_b, pts, 2 * m)
    x = np.atleast_1d(pts[i] * step).astype(float)
    y = np.atleast_1d(pts[j] * step).astype(float)
    return val, x, y


def check_submultiplicative(w: Weight, radius: float, step: float,
                            tol: float = DEFAULT_EXACT_TOL) -> ConditionReport:
    """Scan log w(x+y) - log w(x) - log w(y) over grid pairs in a ball."""
    excess, x, y = _pair_scan(w, w, w, radius, step)
    verdict = PASS if excess <= tol else FAIL
    witness = [{"x": x.tolist(), "y": y.tolist(), "log_excess": excess}]
    return ConditionReport(verdict, witness, radius, tol,
                           [("max_log_excess", excess), ("step", step)])


def check_moderate(omega: Weight, v: Weight, radius: float, step: float,
                   tol: float = DEFAULT_LIMIT_TOL) -> ConditionReport:
    """Estimate C = sup omega(x+y) / (omega(x) v(y)) and test that it settles.

    The sup over the ball of radius R is compared with the sup over the
    ball of radius R/2: growth below ``tol`` (log scale) passes, growth
    above ``10 * tol`` fails.
    """
    if omega.dim != v.dim:
        raise ValueError("omega and v must share dim")
    log_c, x, y = _pair_scan(omega, omega, v, radius, step)
    log_c_half, _, _ = _pair_scan(omega, omega, v, radius / 2, step)
    growth = log_c - log_c_half
    if growth <= tol:
        verdict = PASS
    elif growth > 10 * tol:
        verdict = FAIL
    else:
        verdict = INCONCLUSIVE
    witness = [{"x": x.tolist(), "y": y.tolist(), "log_ratio": log_c}]
    return ConditionReport(verdict, witness, radius, tol, [
        ("C", _safe_exp(log_c)), ("log_C", log_c), ("log_C_half_radius", log_c_half)])


def _safe_exp(v: float) -> float:
    return math.exp(v) if v < 709 else math.inf


def grs_limit_sequence(w: Weight, x, ell_max: int) -> np.ndarray:
    """(w(l x)^(1/l)) for l = 1..ell_max, via exp(log w(l x) / l)."""
    if ell_max < 1:
        raise ValueError("ell_max must be >= 1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ell = np.arange(1, ell_max + 1, dtype=float)
    return np.exp(w.log_eval(ell[:, None] * x[None, :]) / ell)


def _axis_directions(dim: int) -> list[np.ndarray]:
    out = []
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        out.extend([e, -e])
    return out


def _nonincreasing(vals, rel=1e-12) -> bool:
    vals = np.asarray(vals)
    return bool(np.all(np.diff(vals) <= rel * np.abs(vals[:-1])))


def _limit_probe(w: Weight, x: np.ndarray, ell_max: int, tol: float, horizon: float):
    """Verdict for lim_l w(l x)^(1/l) = 1 along one direction.

    Returns (verdict, final_value, final_ell). When the uniform tail at
    ``ell_max`` is undecided, l keeps doubling (log domain) until the value
    is within ``tol`` of 1 or l |x| reaches ``horizon``.
    """
    seq = grs_limit_sequence(w, x, ell_max)
    tail = seq[-max(ell_max // 4, 1):]
    monotone = _nonincreasing(tail)
    final, ell = float(seq[-1]), float(ell_max)
    if abs(final - 1) <= tol and monotone:
        return PASS, final, ell
    norm = float(np.linalg.norm(x))
    if not (w.extensible and norm > 0):
        return (FAIL if tail.min() >= 1 + 10 * tol else INCONCLUSIVE), final, ell
    extended = [final]
    while 2 * ell * norm <= horizon:
        ell *= 2
        final = float(np.exp(w.log_eval(ell * x) / ell))
        extended.append(final)
        if not _nonincreasing(extended):
            monotone = False
        if abs(final - 1) <= tol and monotone:
            return PASS, final, ell
    if final >= 1 + 10 * tol:
        return FAIL, final, ell
    return INCONCLUSIVE, final, ell


def check_grs_via_limit(w: Weight, directions=None, ell_max: int = 10_000,
                        tol: float = DEFAULT_LIMIT_TOL,
                        horizon: float = DEFAULT_HORIZON) -> ConditionReport:
    """Test lim_l w(l x)^(1/l) = 1 along each direction (default: +-e_j)."""
    if directions is None:
        directions = _axis_directions(w.dim)
    directions = [np.atleast_1d(np.asarray(d, dtype=float)) for d in directions]
    if not directions:
        raise ValueError("directions must be non-empty")
    verdicts, witness, diags = [], [], []
    reach = 0.0
    for d in directions:
        verdict, value, ell = _limit_probe(w, d, ell_max, tol, horizon)
        verdicts.append(verdict)
        reach = max(reach, ell * float(np.linalg.norm(d)))
        diags.append((f"limit[{d.tolist()}]", value))
        diags.append((f"ell[{d.tolist()}]", ell))
        if verdict == FAIL:
            witness.append({"direction": d.tolist(), "ell": ell, "value": value})
    return ConditionReport(combine(verdicts), witness, reach, tol, diags)


def _subexp_probe(w: Weight, eps: float, axis: int, radius: float, step: float,
                  horizon: float, per_octave: int = 8):
    """Is g(t) = log w(t e_j) - eps t bounded on t >= 0?

    Uniform scan to ``radius``: bounded-tail heuristic (the running max
    does not grow over the outer half). If it still grows, the scan
    continues on a geometric grid, octave by octave, until an octave adds
    no new maximum or t reaches ``horizon``.
    Returns (verdict, max_g, argmax_t).
    """
    m = int(math.floor(radius / step + 1e-9))
    t = step * np.arange(0, m + 1)
    e = np.zeros(w.dim)
    e[axis] = 1.0
    g = w.log_eval(t[:, None] * e) - eps * t
    half = t <= radius / 2
    best_half = float(g[half].max())
    k = int(np.argmax(g))
    best, t_best = float(g[k]), float(t[k])
    if best <= best_half + 1e-12 * max(1.0, abs(best_half)):
        return PASS, best, t_best
    if not w.extensible:
        return INCONCLUSIVE, best, t_best
    lo = float(t[-1])
    while lo * 2 <= horizon:
        ts = lo * 2.0 ** (np.arange(1, per_octave + 1) / per_octave)
        gs = w.log_eval(ts[:, None] * e) - eps * ts
        j = int(np.argmax(gs))
        prev = best
        if gs[j] > best:
            best, t_best = float(gs[j]), float(ts[j])
        if best <= prev + 1e-12 * max(1.0, abs(prev)):
            return PASS, best, t_best
        lo = float(ts[-1])
    return FAIL, best, t_best


def check_grs_via_subexp(w: Weight, eps_list=DEFAULT_EPS, radius: float = 1000.0,
                         step: float = 1.0, horizon: float = DEFAULT_HORIZON) -> ConditionReport:
    """Test w(x) <= C_eps exp(eps |x|) for each eps, along the coordinate axes."""
    eps_list = [float(e) for e in eps_list]
    if not eps_list or min(eps_list) <= 0:
        raise ValueError("eps_list must hold positive reals")
    if radius <= 0 or step <= 0:
        raise ValueError("radius and step must be positive")
    per_eps, witness, diags = [], [], []
    for eps in eps_list:
        verdicts, best, t_best, axis_best = [], -math.inf, 0.0, 0
        for j in range(w.dim):
            verdict, val, t_at = _subexp_probe(w, eps, j, radius, step, horizon)
            verdicts.append(verdict)
            if val > best:
                best, t_best, axis_best = val, t_at, j
            if verdict == FAIL:
                point = np.zeros(w.dim)
                point[j] = t_at
                witness.append({"eps": eps, "x": point.tolist(), "g": val})
        per_eps.append(combine(verdicts))
        diags.append((f"log_C[eps={eps!r}]", best))
        diags.append((f"C[eps={eps!r}]", _safe_exp(best)))
        diags.append((f"argmax[eps={eps!r}]", t_best))
        diags.append((f"argmax_axis[eps={eps!r}]", axis_best))
        diags.append((f"verdict[eps={eps!r}]", per_eps[-1]))
    return ConditionReport(combine(per_eps), witness, radius, 0.0, diags)


def min_exp_envelope(w: Weight, radius: float, step: float = 1.0) -> tuple[float, float]:
    """Smallest c with w(x) <= C exp(c|x|) on the outer band radius/2 <= |x| <= radius.

    Returns (c_hat, C_hat); C_hat = max over the axis grid of w(x) exp(-c_hat|x|).
    """
    m = int(math.floor(radius / step + 1e-9))
    if m + 1 < 16:
        raise ValueError("axis grid needs at least 16 points")
    t = step * np.arange(0, m + 1)
    c_hat, logs = 0.0, []
    for j in range(w.dim):
        e = np.zeros(w.dim)
        e[j] = 1.0
        lv = w.log_eval(t[:, None] * e)
        logs.append(lv)
        band = t >= radius / 2 - 1e-9 * step
        c_hat = max(c_hat, float(np.max(lv[band] / t[band])))
    log_big = max(float(np.max(lv - c_hat * t)) for lv in logs)
    return c_hat, _safe_exp(log_big)


def _check_decreasing(ws: Sequence[Weight], radius: float, step: float) -> None:
    m = int(math.floor(radius / step + 1e-9))
    t = step * np.arange(0, m + 1)
    for j in range(ws[0].dim):
        e = np.zeros(ws[0].dim)
        e[j] = 1.0
        prev = None
        for n, w in enumerate(ws):
            lv = w.log_eval(t[:, None] * e)
            if prev is not None and np.any(lv > prev + 1e-12 * np.maximum(1.0, np.abs(prev))):
                raise WeightSequenceError(f"w_{n + 1} exceeds w_{n} somewhere on axis {j}")
            prev = lv


def seq_weights_condition(ws: Sequence[Weight], eps_list=DEFAULT_EPS, ell_max: int = 10_000,
                          radius: float = 1000.0, step: float = 1.0,
                          tol: float = DEFAULT_LIMIT_TOL,
                          horizon: float = DEFAULT_HORIZON) -> tuple[ConditionReport, ConditionReport]:
    """Probe the two equivalent conditions on a decreasing weight sequence.

    cond1: inf_n lim_l w_n(l x)^(1/l) = 1 on every axis, resolved to the
    finest eps in ``eps_list``: it passes when the smallest limit is at
    most exp(eps_min) (1 + tol) and fails above exp(eps_min) (1 + 10 tol).
    cond2: for every eps some w_n(x) exp(-eps|x|) is bounded.
    """
    ws = list(ws)
    if not ws:
        raise ValueError("ws must be non-empty")
    if len({w.dim for w in ws}) != 1:
        raise ValueError("weights must share dim")
    eps_list = [float(e) for e in eps_list]
    _check_decreasing(ws, radius, step)
    dim = ws[0].dim
    eps_min = min(eps_list)
    bound = math.exp(eps_min)

    axis_verdicts, witness1, diag1 = [], [], []
    for d in _axis_directions(dim)[::2]:
        limits = [_limit_probe(w, d, ell_max, tol, horizon)[1] for w in ws]
        lo = min(limits)
        if lo <= bound * (1 + tol):
            verdict = PASS
        elif lo >= bound * (1 + 10 * tol):
            verdict = FAIL
            witness1.append({"direction": d.tolist(), "n": int(np.argmin(limits)) + 1, "inf_limit": lo})
        else:
            verdict = INCONCLUSIVE
        axis_verdicts.append(verdict)
        diag1.append((f"inf_limit[{d.tolist()}]", lo))
    cond1 = ConditionReport(combine(axis_verdicts), witness1, radius, tol,
                            diag1 + [("resolution_eps", eps_min)])

    eps_verdicts, witness2, diag2 = [], [], []
    for eps in eps_list:
        found = None
        verdicts = []
        for n, w in enumerate(ws, start=1):
            v = combine(_subexp_probe(w, eps, j, radius, step, horizon)[0] for j in range(dim))
            verdicts.append(v)
            if v == PASS:
                found = n
                break
        if found is not None:
            eps_verdicts.append(PASS)
        elif all(v == FAIL for v in verdicts):
            eps_verdicts.append(FAIL)
            witness2.append({"eps": eps, "n_tried": len(ws)})
        else:
            eps_verdicts.append(INCONCLUSIVE)
        diag2.append((f"n[eps={eps!r}]", found))
    cond2 = ConditionReport(combine(eps_verdicts), witness2, radius, 0.0, diag2)
    agree = cond1.verdict == cond2.verdict
    cond1.diagnostics.append(("agrees_with_cond2", agree))
    cond2.diagnostics.append(("agrees_with_cond1", agree))
    return cond1, cond2
