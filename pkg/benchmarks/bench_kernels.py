"""Time the compiled kernels against the numpy fallback and check they agree.

    python benchmarks/bench_kernels.py [--radius 1000] [--n 1025] [--repeat 3]
"""
import argparse
import json
import time

import numpy as np

from grslab import kernels
from grslab.weightlab import Weight, _ball_points, _cube_logtable


def _best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(radius, radius_2d, n):
    w1 = Weight.subexp(1.0, 0.5)
    pts1, m1 = _ball_points(1, radius, 1.0)
    t1 = _cube_logtable(w1, m1, 1.0)
    w2 = Weight.subexp(1.0, 0.5, 2)
    pts2, m2 = _ball_points(2, radius_2d, 1.0)
    t2 = _cube_logtable(w2, m2, 1.0)
    rng = np.random.default_rng(0)
    idx = np.arange(n)
    mag = np.abs(rng.standard_normal((n, n))) * np.exp(-np.abs(idx[:, None] - idx[None, :]) / 8)
    return {
        f"pair_excess d=1 R={radius:g}": lambda b: kernels.pair_excess(t1, t1, t1, pts1, 2 * m1, backend=b),
        f"pair_excess d=2 R={radius_2d:g}": lambda b: kernels.pair_excess(t2, t2, t2, pts2, 2 * m2, backend=b),
        f"diag_sup n={n}": lambda b: kernels.diag_sup(mag, backend=b),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--radius", type=float, default=1000.0)
    ap.add_argument("--radius-2d", type=float, default=24.0)
    ap.add_argument("--n", type=int, default=1025)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="print results as JSON")
    args = ap.parse_args()

    backends = sorted(kernels.BACKENDS)
    results = []
    for name, fn in cases(args.radius, args.radius_2d, args.n).items():
        row = {"case": name}
        outs = {}
        for b in backends:
            row[b], outs[b] = _best_of(lambda: fn(b), args.repeat)
        ref = outs["python"]
        row["match"] = all(np.array_equal(np.asarray(o, dtype=float), np.asarray(ref, dtype=float))
                           for o in outs.values())
        if "compiled" in row:
            row["speedup"] = row["python"] / row["compiled"]
        results.append(row)

    if args.json:
        print(json.dumps({"threads": kernels.thread_cap(), "results": results}, indent=2))
        return
    print(f"threads={kernels.thread_cap()} backends={','.join(backends)}")
    for r in results:
        line = f"{r['case']:<28} python {r['python']:8.4f}s"
        if "compiled" in r:
            line += f"  compiled {r['compiled']:8.4f}s  x{r['speedup']:6.1f}"
        print(line + f"  match={r['match']}")


if __name__ == "__main__":
    main()
