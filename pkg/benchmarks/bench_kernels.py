"""Compare the compiled kernels with the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]

Each kernel runs on the same inputs under both implementations; the table
reports the best wall time of ``--repeat`` runs and whether the outputs
agree (bit for bit for the linear-domain kernels).
"""

import argparse
import json
import time

import numpy as np

from dchaos import kernels


def _inputs(m, n_max, seed=0):
    rng = np.random.default_rng(seed)
    width = 4 * m
    idx = np.sort(rng.choice(np.arange(n_max + 1, n_max + 1 + width), size=m, replace=False)).astype(np.int64)
    vals = rng.random(n_max + 1 + width + 1)
    coef = rng.random(m) + 0.1
    return vals, idx, coef


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    for m, n_max in ((50, 100_000), (400, 20_000), (2_000, 5_000)):
        vals, idx, coef = _inputs(m, n_max)
        logs = np.log(vals)
        yield f"shifted_sums m={m} N={n_max}", lambda impl, a=(vals, idx, coef, n_max): kernels.shifted_sums(
            a[0], 0, a[1], a[2], a[3], -1, impl=impl
        ), True
        yield f"log_shifted_sums m={m} N={n_max}", lambda impl, a=(logs, idx, np.log(coef), n_max): kernels.log_shifted_sums(
            a[0], 0, a[1], a[2], a[3], -1, impl=impl
        ), False
    big = np.random.default_rng(1).random(5_000_000)
    yield "below_prefix_counts n=5e6", lambda impl: kernels.below_prefix_counts(big, 0.5, impl=impl), True


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    args = ap.parse_args()
    impls = kernels.implementations()
    if "cython" not in impls:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation` first")
    rows = []
    for name, fn, bitwise in cases():
        tp, op = _best(lambda: fn(impls["python"]), args.repeat)
        tc, oc = _best(lambda: fn(impls["cython"]), args.repeat)
        agree = bool(np.array_equal(op, oc)) if bitwise else bool(np.allclose(op, oc, rtol=1e-14))
        rows.append({"case": name, "python_s": tp, "cython_s": tc, "speedup": tp / tc, "agree": agree})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'case':<36}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}  agree")
    for r in rows:
        print(f"{r['case']:<36}{r['python_s']:>12.4f}{r['cython_s']:>12.4f}{r['speedup']:>10.2f}  {r['agree']}")


if __name__ == "__main__":
    main()
