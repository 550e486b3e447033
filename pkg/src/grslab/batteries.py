"""Built-in weight batteries and test sets shared by the experiments and the CLI."""
from __future__ import annotations

import numpy as np

from .seqspace import LatticeSeq
from .weightlab import Weight

W = Weight


def weight_battery(dim: int = 1) -> list[tuple[str, Weight, bool]]:
    """The 14 reference weights as (id, weight, is_grs).

    GRS members: constant, (1+|x|)^r for r in {0, 1, 5}, exp(c|x|^s) for
    c in {0.5, 2} and s in {0.3, 0.5, 0.9}, and two products of members.
    Controls: the exponential weights exp(0.1|x|) and exp(|x|).
    """
    grs = [W.constant(dim)]
    grs += [W.polynomial(r, dim) for r in (0, 1, 5)]
    grs += [W.subexp(c, s, dim) for c in (0.5, 2.0) for s in (0.3, 0.5, 0.9)]
    grs += [
        W.product([W.polynomial(1, dim), W.subexp(2.0, 0.9, dim)]),
        W.product([W.subexp(0.5, 0.3, dim), W.subexp(2.0, 0.5, dim)]),
    ]
    controls = [W.subexp(0.1, 1.0, dim), W.subexp(1.0, 1.0, dim)]
    return [(w.label, w, True) for w in grs] + [(w.label, w, False) for w in controls]


def grs_battery(dim: int = 1) -> list[tuple[str, Weight]]:
    return [(wid, w) for wid, w, ok in weight_battery(dim) if ok]


def grs_battery_2d() -> list[tuple[str, Weight]]:
    """GRS weights on R^2 = (x, xi) used by the modulation-space probe.

    Kept to growth the experiment's 12 x 12 STFT window can resolve.
    """
    ws = [W.constant(2), W.polynomial(1, 2), W.polynomial(5, 2),
          W.subexp(0.5, 0.5, 2), W.subexp(1.0, 0.5, 2)]
    return [(w.label, w) for w in ws]


def sequence_test_set(K: int = 512) -> list[tuple[str, LatticeSeq]]:
    """Six d=1 sequences for the l^1 identity probe."""
    def f(fn):
        return LatticeSeq.from_function(lambda k: fn(np.abs(k[..., 0])), K)
    return [
        ("delta0", LatticeSeq.delta(K)),
        ("box10", f(lambda k: (k <= 10).astype(float))),
        ("exp_decay_2", f(lambda k: np.exp(-2.0 * k))),
        ("gaussian_50", f(lambda k: np.exp(-k ** 2 / 50.0))),
        ("poly_decay_2", f(lambda k: (1.0 + k) ** -2.0)),
        ("stretched_exp_half", f(lambda k: np.exp(-np.sqrt(k)))),
    ]
