"""Modulation-space versus Gelfand-Shilov identity experiment."""
from __future__ import annotations

import numpy as np

from ..batteries import grs_battery_2d
from ..seqspace import DIVERGENT
from ..weightlab import FAIL, INCONCLUSIVE, PASS, Weight, check_grs_via_limit, check_grs_via_subexp
from .hermite import MEMBER, GSFunction, gs_membership_probe
from .modulation import FINITE, membership_probe_modulation
from .signals import SampledSignal, gaussian_window

# the polynomial-decay sample needs room on both sides of the STFT extent
EXPERIMENT_SIGNAL_EXTENT = 20.0
EXPERIMENT_STFT_EXTENT = 12.0
MODSPACE_EPS = (1.0, 0.5)


def modspace_test_functions(extent: float = EXPERIMENT_SIGNAL_EXTENT) -> list[tuple[str, object]]:
    """The shipped five-function battery; GSFunctions carry exact derivatives."""
    return [
        ("zero", GSFunction([0.0], "zero")),
        ("h0", GSFunction.hermite(0)),
        ("h0+0.5h2", GSFunction([1.0, 0.0, 0.5], "h0+0.5h2")),
        ("h3", GSFunction.hermite(3)),
        ("poly_decay_3", SampledSignal.from_function(lambda y: (1 + np.abs(y)) ** -3.0, extent)),
    ]


def shipped_windows(extent: float = EXPERIMENT_SIGNAL_EXTENT) -> list[tuple[str, SampledSignal]]:
    return [("gauss_1", gaussian_window(1.0, extent)), ("gauss_2", gaussian_window(2.0, extent))]


def _as_signal(f, extent: float) -> SampledSignal:
    return f.sample(extent) if isinstance(f, GSFunction) else f


def _finite_all(verdicts) -> str:
    if DIVERGENT in verdicts:
        return FAIL
    return PASS if all(v == FINITE for v in verdicts) else INCONCLUSIVE


def _finite_some(verdicts) -> str:
    if FINITE in verdicts:
        return PASS
    return FAIL if all(v == DIVERGENT for v in verdicts) else INCONCLUSIVE


def modspace_identity_experiment(test_fns=None, battery=None, eps_list=MODSPACE_EPS, p: float = 1.0,
                                 q: float | None = None, windows=None,
                                 stft_extent: float = EXPERIMENT_STFT_EXTENT) -> list[dict]:
    """Per test function: verdict_GS1, verdict_all_GRS and verdict_some_eps.

    The cube criterion only covers p = q. The headline verdicts use the
    first window; every window's per-weight verdicts are reported and
    ``window_agree`` records whether they coincide.
    """
    if q is not None and q != p:
        raise ValueError("the cube criterion needs p == q")
    test_fns = modspace_test_functions() if test_fns is None else list(test_fns)
    battery = grs_battery_2d() if battery is None else list(battery)
    for wid, w in battery:
        if w.dim != 2:
            raise ValueError(f"battery weight {wid} is not a weight on R^2")
        if not (check_grs_via_limit(w).verdict == PASS and check_grs_via_subexp(w).verdict == PASS):
            raise ValueError(f"battery weight {wid} does not pass the GRS checks")
    windows = shipped_windows() if windows is None else list(windows)
    kw = {"R_x": stft_extent, "R_xi": stft_extent}
    rows = []
    for fid, f in test_fns:
        per_window = {}
        for win_id, phi in windows:
            sig = _as_signal(f, phi.extent)
            per_window[win_id] = {
                "battery": {wid: membership_probe_modulation(sig, phi, w, p, kw) for wid, w in battery},
                "eps": {f"v_eps={e!r}": membership_probe_modulation(sig, phi, Weight.subexp(e, 1.0, 2), p, kw)
                        for e in eps_list},
            }
        head = per_window[windows[0][0]]
        all_grs = _finite_all(list(head["battery"].values()))
        some_eps = _finite_some(list(head["eps"].values()))
        if isinstance(f, GSFunction):
            gs = gs_membership_probe(f, 1.0)
            gs1, gs_info = (PASS if gs.verdict == MEMBER else FAIL), gs.to_dict()
        else:
            gs1, gs_info = None, None
        decided = INCONCLUSIVE not in (all_grs, some_eps)
        rows.append({
            "function_id": fid,
            "verdict_GS1": gs1,
            "verdict_all_GRS": all_grs,
            "verdict_some_eps": some_eps,
            "agree": (all_grs == some_eps) if decided else None,
            "window_agree": all(v == head for v in per_window.values()),
            "gs_probe": gs_info,
            "per_window": per_window,
        })
    return rows
