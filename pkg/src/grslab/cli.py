"""Command-line driver: one experiment per invocation, JSON or CSV report out.

Weight literals use the grammar ``family:key=value,...`` with factors joined
by ``*``, e.g. ``subexp:c=1,s=0.5``, ``poly:r=2*subexp:c=0.5,s=0.3`` or
``tabulated:file=w.csv``. Families: constant (const), polynomial (poly, r),
subexp (exp, c, s), tabulated (file). ``dim=`` sets the dimension.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__, kernels
from .batteries import grs_battery, sequence_test_set, weight_battery
from .matalg import (LatticeMatrix, decay_profile, generate_decay_matrix, invert_section,
                     inverse_closedness_experiment)
from .seqspace import agreement_rate, identity_experiment, load_seq_csv
from .tfa import (GSFunction, gaussian_window, gs_membership_probe, load_signal_csv,
                  modspace_identity_experiment, save_stft, stft)
from .tfa.experiment import EXPERIMENT_SIGNAL_EXTENT
from .weightlab import PASS, check_grs_via_limit, check_grs_via_subexp, parse_weight

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
# resolved-config keys that describe where output goes, not what was computed
_NOT_CONFIG = {"out", "config", "command"}


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _exponent(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("exponent must lie in (0, inf]")
    return v


def _exponent_list(text: str) -> list[float]:
    vals = _float_list(text)
    if min(vals) <= 0:
        raise argparse.ArgumentTypeError("exponents must lie in (0, inf]")
    return vals


def _common(sub: argparse.ArgumentParser, tol: float, radius: float) -> None:
    g = sub.add_argument_group("common")
    g.add_argument("--out", help="report path (stdout when omitted)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tol", type=float, default=tol)
    g.add_argument("--radius", type=float, default=radius)
    g.add_argument("--config", help="file of key=value lines; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grslab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"grslab {__version__}")
    subs = parser.add_subparsers(dest="command", metavar="COMMAND")
    subs.required = True

    p = subs.add_parser("grs-check", help="limit and sub-exponential GRS checks on weights")
    p.add_argument("--weight", action="append", default=[], help="weight literal (repeatable)")
    p.add_argument("--battery", choices=("grs", "full", "none"), default="grs",
                   help="built-in battery when no --weight is given")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--ell-max", type=int, default=10_000)
    p.add_argument("--eps", type=_float_list, default=[1.0, 0.5, 0.1, 0.05, 0.01])
    _common(p, tol=0.01, radius=1000.0)

    p = subs.add_parser("seq-identity", help="union/intersection l^1 identity on the sequence test set")
    p.add_argument("--K", type=int, default=512)
    p.add_argument("--p", type=_exponent, default=1.0)
    p.add_argument("--windows", type=int, default=8)
    p.add_argument("--eps", type=_float_list, default=[1.0, 0.5, 0.1, 0.05])
    p.add_argument("--seq-file", action="append", default=[], help="extra sequence CSV (repeatable)")
    _common(p, tol=0.01, radius=1000.0)

    p = subs.add_parser("inverse-closedness", help="decay of inverses of seeded finite sections")
    p.add_argument("--kind", choices=("diag_dominant", "random_sign", "toeplitz", "tridiagonal"),
                   default="diag_dominant")
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--off", type=float, default=0.25, help="off-diagonal value for tridiagonal")
    p.add_argument("--instances", type=int, default=1, help="seeds seed..seed+instances-1")
    p.add_argument("--doubling", action="store_true", help="also fit the rate at 2N")
    p.add_argument("--eps", type=_float_list, default=[1.0, 0.5, 0.1])
    _common(p, tol=0.1, radius=0.0)

    p = subs.add_parser("modspace-identity", help="modulation-space / Gelfand-Shilov identity probe")
    p.add_argument("--p", type=_exponent_list, default=[1.0, math.inf],
                   help="exponents p = q to run (comma-separated, 'inf' allowed)")
    p.add_argument("--stft-extent", type=float, default=12.0)
    p.add_argument("--eps", type=_float_list, default=[1.0, 0.5])
    _common(p, tol=0.05, radius=EXPERIMENT_SIGNAL_EXTENT)

    p = subs.add_parser("gs-probe", help="Gelfand-Shilov membership of a Hermite expansion")
    p.add_argument("--coeffs", type=_float_list, default=[1.0], help="Hermite coefficients c_0..c_M")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--h-grid", type=_float_list, default=[0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
    p.add_argument("--order-cap", type=int, default=12)
    p.add_argument("--h-x", type=float, default=0.05)
    _common(p, tol=0.05, radius=8.0)

    p = subs.add_parser("stft-dump", help="STFT of a signal as CSV plus JSON sidecar")
    p.add_argument("--signal", help="x,re,im CSV (default: unit Gaussian)")
    p.add_argument("--window-width", type=float, default=1.0)
    p.add_argument("--spacing", type=float, default=0.05, help="signal spacing for the default signal")
    p.add_argument("--h-x", type=float, default=0.25)
    p.add_argument("--h-xi", type=float, default=0.25)
    p.add_argument("--R-x", type=float, default=8.0)
    p.add_argument("--R-xi", type=float, default=8.0)
    _common(p, tol=0.0, radius=12.0)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _read_config(path: str, sub: argparse.ArgumentParser) -> dict:
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    out: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (t.strip() for t in line.split("=", 1))
            dest = key.replace("-", "_")
            if dest not in actions:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            action = actions[dest]
            try:
                if isinstance(action, argparse._StoreTrueAction):
                    if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                        raise ValueError(value)
                    conv = value.lower() in ("true", "1", "yes")
                else:
                    conv = action.type(value) if action.type else value
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}")
            if action.choices is not None and conv not in action.choices:
                raise UsageError(f"{path}:{lineno}: {key} must be one of {sorted(action.choices)}")
            if isinstance(action, argparse._AppendAction):
                out.setdefault(dest, []).append(conv)
            else:
                out[dest] = conv
    return out


def resolve_config(argv) -> dict:
    """Defaults, then the config file, then explicitly given flags."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    sub = _subparser(parser, ns.command)
    explicit = _explicit_dests(sub, argv[argv.index(ns.command) + 1:])
    resolved = vars(ns)
    if ns.config:
        try:
            file_vals = _read_config(ns.config, sub)
        except OSError as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}")
        for dest, val in file_vals.items():
            if dest not in explicit:
                resolved[dest] = val
    return resolved


def _explicit_dests(sub: argparse.ArgumentParser, args) -> set:
    seen = set()
    for a in sub._actions:
        for opt in a.option_strings:
            if any(t == opt or t.startswith(opt + "=") for t in args):
                seen.add(a.dest)
    return seen


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _flatten(row: dict, prefix: str = "") -> dict:
    flat = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            flat[key] = json.dumps(v, sort_keys=True)
        else:
            flat[key] = v
    return flat


def render(report: dict, fmt: str) -> str:
    report = _jsonable(report)
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    rows = [_flatten(r) for r in report["rows"]]
    cols = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in cols})
    return buf.getvalue()


def _weights_for(cfg: dict):
    if cfg["weight"]:
        return [(text, parse_weight(text)) for text in cfg["weight"]]
    if cfg["battery"] == "grs":
        return grs_battery(cfg["dim"])
    if cfg["battery"] == "full":
        return [(wid, w) for wid, w, _ in weight_battery(cfg["dim"])]
    raise UsageError("no weights: pass --weight or choose a battery")


def run_grs_check(cfg: dict):
    rows, bad = [], False
    for wid, w in _weights_for(cfg):
        lim = check_grs_via_limit(w, ell_max=cfg["ell_max"], tol=cfg["tol"])
        sub = check_grs_via_subexp(w, eps_list=cfg["eps"], radius=cfg["radius"])
        agree = lim.verdict == sub.verdict
        bad |= not agree or PASS != lim.verdict or PASS != sub.verdict
        rows.append({"weight_id": wid, "verdict_limit": lim.verdict, "verdict_subexp": sub.verdict,
                     "agree": agree, "limit": lim.to_dict(), "subexp": sub.to_dict()})
    summary = {"n_weights": len(rows), "n_agree": sum(r["agree"] for r in rows),
               "n_pass_both": sum(r["verdict_limit"] == PASS == r["verdict_subexp"] for r in rows)}
    return rows, summary, bad


def run_seq_identity(cfg: dict):
    seqs = sequence_test_set(cfg["K"])
    for path in cfg["seq_file"]:
        seqs.append((os.path.basename(path), load_seq_csv(path)))
    rows = identity_experiment(seqs, grs_battery(1), cfg["eps"], cfg["p"], cfg["windows"])
    rate = agreement_rate(rows)
    summary = {"agreement_rate": rate, "n_rows": len(rows),
               "n_inconclusive": sum(r["agree"] is None for r in rows)}
    return rows, summary, any(r["agree"] is False for r in rows)


def _build_matrix(cfg: dict, N: int, seed: int) -> LatticeMatrix:
    if cfg["kind"] == "tridiagonal":
        off = cfg["off"]
        return LatticeMatrix.toeplitz(N, lambda k: np.where(k == 0, 1.0, np.where(np.abs(k) == 1, off, 0.0)))
    return generate_decay_matrix(cfg["kind"], N, cfg["c1"], cfg["s"], seed)


def run_inverse_closedness(cfg: dict):
    rows, bad = [], False
    for seed in range(cfg["seed"], cfg["seed"] + cfg["instances"]):
        A = _build_matrix(cfg, cfg["N"], seed)
        res = inverse_closedness_experiment(A, cfg["c1"], grs_battery(1), cfg["eps"])
        res["seed"] = seed
        if cfg["doubling"]:
            big = _build_matrix(cfg, 2 * cfg["N"], seed)
            rate = decay_profile(invert_section(big).matrix, central=True).rate
            res["c2_doubled"] = rate
            res["rate_change"] = abs(rate - res["c2"]) / abs(res["c2"]) if res["c2"] else math.inf
            res["flags"]["doubling_stable"] = bool(res["rate_change"] < cfg["tol"])
        bad |= not (res["flags"]["c2_positive"] and res["flags"]["finite_pattern_consistent"])
        bad |= res["flags"].get("doubling_stable") is False
        rows.append(res)
    summary = {"n_instances": len(rows), "c2_min": min(r["c2"] for r in rows),
               "c2_max": max(r["c2"] for r in rows)}
    return rows, summary, bad


def run_modspace_identity(cfg: dict):
    from .tfa.experiment import modspace_test_functions, shipped_windows
    extent = cfg["radius"]
    rows = []
    for p in cfg["p"]:
        for row in modspace_identity_experiment(modspace_test_functions(extent), eps_list=cfg["eps"], p=p,
                                                windows=shipped_windows(extent),
                                                stft_extent=cfg["stft_extent"]):
            rows.append({"p": p, **row})
    summary = {"n_disagree": sum(r["agree"] is False for r in rows),
               "n_inconclusive": sum(r["agree"] is None for r in rows),
               "windows_agree": all(r["window_agree"] for r in rows)}
    return rows, summary, summary["n_disagree"] > 0


def run_gs_probe(cfg: dict):
    f = GSFunction(cfg["coeffs"])
    res = gs_membership_probe(f, cfg["s"], cfg["h_grid"], cfg["order_cap"], cfg["radius"],
                              cfg["h_x"], tol=cfg["tol"])
    row = {"coefficients": list(cfg["coeffs"]), "s": cfg["s"], **res.to_dict()}
    return [row], {"verdict": res.verdict}, res.verdict != "member"


def run_stft_dump(cfg: dict):
    if cfg["signal"]:
        f = load_signal_csv(cfg["signal"])
    else:
        f = gaussian_window(1.0, cfg["radius"], cfg["spacing"])
    phi = gaussian_window(cfg["window_width"], f.extent, f.spacing)
    V = stft(f, phi, cfg["h_x"], cfg["h_xi"], cfg["R_x"], cfg["R_xi"],
             window_id=f"gauss_{cfg['window_width']!r}")
    return V


RUNNERS = {
    "grs-check": run_grs_check,
    "seq-identity": run_seq_identity,
    "inverse-closedness": run_inverse_closedness,
    "modspace-identity": run_modspace_identity,
    "gs-probe": run_gs_probe,
}


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _write_meta(out: str, started: float) -> None:
    meta = {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
            "elapsed_s": round(time.time() - started, 3), "backend": kernels.BACKEND,
            "threads": kernels.thread_cap(), "version": __version__}
    with open(out + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = resolve_config(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except UsageError as exc:
        print(f"grslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    np.random.seed(cfg["seed"])
    started = time.time()
    try:
        if cfg["command"] == "stft-dump":
            V = run_stft_dump(cfg)
            if cfg["format"] == "csv":
                if not cfg["out"]:
                    raise UsageError("stft-dump --format csv needs --out")
                save_stft(V, cfg["out"])
                _write_meta(cfg["out"], started)
                return EXIT_OK
            rows = [{"x": float(x), "xi": float(xi), "re": float(v.real), "im": float(v.imag)}
                    for x, line in zip(V.xs, V.values) for xi, v in zip(V.xis, line)]
            summary, bad = V.meta(), False
        else:
            rows, summary, bad = RUNNERS[cfg["command"]](cfg)
    except UsageError as exc:
        print(f"grslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"grslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code = EXIT_FAIL if bad else EXIT_OK
    report = {
        "tool": "grslab",
        "version": __version__,
        "subcommand": cfg["command"],
        "config": {k: v for k, v in sorted(cfg.items()) if k not in _NOT_CONFIG},
        "status": "fail" if bad else "pass",
        "exit_code": code,
        "summary": summary,
        "rows": rows,
    }
    _write(render(report, cfg["format"]), cfg["out"])
    if cfg["out"]:
        _write_meta(cfg["out"], started)
    return code


if __name__ == "__main__":
    sys.exit(main())
