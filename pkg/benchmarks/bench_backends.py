#!/usr/bin/env python3
"""Benchmark: compiled kernel vs numpy fallback on the three hot paths.

  1. F_p Gaussian-elimination rank (the n=10 input matrix, 1024 x 1024)
  2. seeded SetInc tester trials (the agreement-case sampler dominates)
  3. batched uniform difference samples

Usage: python benchmarks/bench_backends.py [--trials N]
"""

import argparse
import time

import numpy as np

from ccx import backend
from ccx._kernel_py import pack_bits
from ccx.bits import plant_pair
from ccx.pif import PIFunctionTable, achievable_c
from ccx.rng import Stream


def _random_total_table(n: int, seed: int) -> PIFunctionTable:
    st = Stream(seed)
    ent = {}
    for a in range(n + 1):
        for b in range(n + 1):
            for c in achievable_c(n, a, b):
                ent[(a, b, c)] = 1 if st.bit() else -1
    return PIFunctionTable(n, ent)


def bench(fn, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def impl_list():
    impls = [("numpy-fallback", backend.py_impl)]
    ck = backend.compiled_impl()
    if ck is not None:
        impls.append(("ckernel", ck))
    return impls


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=400)
    args = ap.parse_args()

    from ccx.bounds.fieldmatrix import pif_matrix

    table = _random_total_table(10, 4)
    mat = np.asarray(pif_matrix(table, "pm1").data)

    n, a, b, c2, g2 = 64, 24, 24, 6, 2
    xs, ys = [], []
    st = Stream(1)
    for _ in range(args.trials):
        x, y = plant_pair(n, a, b, 2, st)
        from ccx.bits import complement

        xs.append(pack_bits(complement(x, n), n))
        ys.append(pack_bits(y, n))
    xs = np.array(xs, dtype=np.uint64)
    ys = np.array(ys, dtype=np.uint64)
    seeds = np.arange(args.trials, dtype=np.uint64) + np.uint64(10**6)

    x1, y1 = plant_pair(32, 20, 12, 8, Stream(7))

    rows = []
    for name, impl in impl_list():
        t_rank, r = bench(lambda: impl.rank_mod_p(mat.copy()), repeat=1)
        t_trials, out = bench(
            lambda: impl.setinc_trial_batch(3, n, 1, 5, 40, 11, xs, ys, seeds), repeat=1
        )
        t_sample, _ = bench(lambda: impl.sample_diff_batch(x1, y1, 32, 99, 20000), repeat=1)
        rows.append((name, t_rank, t_trials, t_sample, int(r), int(out[0].sum())))

    print(f"{'backend':16s} {'rank(1024^2)':>13s} {'trials':>9s} {'20k samples':>12s}")
    for name, tr, tt, ts, r, hi in rows:
        print(f"{name:16s} {tr:12.3f}s {tt:8.3f}s {ts:11.3f}s   (rank={r}, high={hi})")
    if len(rows) == 2:
        print(
            f"{'speedup':16s} {rows[0][1] / rows[1][1]:12.1f}x {rows[0][2] / rows[1][2]:8.1f}x "
            f"{rows[0][3] / rows[1][3]:11.1f}x"
        )
        assert rows[0][4] == rows[1][4] and rows[0][5] == rows[1][5], "backends disagree!"


if __name__ == "__main__":
    main()
