#!/usr/bin/env python3
"""Benchmark the compiled lattice kernels against the numpy fallback.

Runs the full closed-testing pipeline (combination-test rejections over all
2**n subsets plus the closure sweep) and the individual kernels at a few
problem sizes, printing one table per backend pair.

Usage: python benchmarks/bench_lattice.py [--sizes 16,20,22] [--repeats 3]
"""

import argparse
import time

import numpy as np

from cherrypick import _lattice, make_hypotheses, run_closure
from cherrypick.localtests import FisherTest


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(impl, n, repeats):
    rng = np.random.default_rng(1)
    w = rng.normal(size=n)
    u = rng.random(1 << n) < 0.7
    u[0] = False
    v = rng.integers(-1, n, size=1 << n).astype(np.int8)
    return {
        "popcounts": time_call(lambda: impl.popcounts(n), repeats),
        "subset_sum": time_call(lambda: impl.subset_sum(w), repeats),
        "superset_and": time_call(lambda: impl.superset_and(u.copy()), repeats),
        "subset_max": time_call(lambda: impl.subset_max(v.copy()), repeats),
    }


def bench_closure(n, repeats):
    rng = np.random.default_rng(2)
    hyps = make_hypotheses([f"H{i}" for i in range(n)],
                           pvalues=np.clip(rng.random(n), 1e-9, 1))
    test = FisherTest()
    return time_call(lambda: run_closure(hyps, test, 0.05), repeats)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="16,20,22")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = [("numpy", _lattice.numpy_impl)]
    if _lattice.active_impl is not _lattice.numpy_impl:
        backends.append((_lattice.backend_name(), _lattice.active_impl))
    else:
        print("note: compiled extension not available, benchmarking numpy only")

    for n in sizes:
        print(f"\n== n = {n} ({1 << n} subsets) ==")
        rows = {}
        for name, impl in backends:
            rows[name] = bench_kernels(impl, n, args.repeats)
        kernels = list(next(iter(rows.values())))
        header = f"{'kernel':<14}" + "".join(f"{name:>12}" for name in rows)
        if len(rows) == 2:
            header += f"{'speedup':>10}"
        print(header)
        for kernel in kernels:
            line = f"{kernel:<14}"
            vals = [rows[name][kernel] for name in rows]
            for v in vals:
                line += f"{v * 1e3:>10.2f}ms"
            if len(vals) == 2 and vals[1] > 0:
                line += f"{vals[0] / vals[1]:>9.1f}x"
            print(line)
        print(f"{'closure (e2e)':<14}{bench_closure(n, args.repeats) * 1e3:>10.2f}ms"
              "   (active backend)")


if __name__ == "__main__":
    main()
