"""Point-counting throughput: numba kernel against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--curves 200] [--repeat 3]

Both paths must return identical counts; the script exits non-zero otherwise.
With GFERMAT_DISABLE_NUMBA=1 the "numba" column runs the same kernel as plain
Python and is reported as such.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from gfermat import gfq
from gfermat._accel import numba_active
from gfermat.kernels import count_points_batch, field_tables

FIELDS = [(3, 3), (5, 3), (31, 2), (101, 1), (7, 4)]


def first_irreducible(q, f):
    if f == 1:
        return (0, 1)
    for n in range(q**f):
        g = tuple((n // q**i) % q for i in range(f)) + (1,)
        if g[0] and gfq.is_irreducible(g, q):
            return g
    raise ValueError


def random_curves(t, m, rng):
    curves = np.zeros((m, 5), dtype=np.int64)
    curves[:, 1] = rng.integers(0, t.order, m)
    curves[:, 3] = rng.integers(1, t.order, m)
    return curves


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--curves", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    label = "numba" if numba_active() else "python-kernel"
    print(f"{'field':>10} {'curves':>7} {label:>14} {'numpy':>10} {'speedup':>8}")
    ok = True
    for q, f in FIELDS:
        t = field_tables(q, first_irreducible(q, f))
        curves = random_curves(t, args.curves, rng)
        count_points_batch(t, curves[:1], use_numba=True)  # compile outside the timing
        tn, a = best_of(lambda: count_points_batch(t, curves, use_numba=True), args.repeat)
        tp, b = best_of(lambda: count_points_batch(t, curves, use_numba=False), args.repeat)
        ok = ok and np.array_equal(a, b)
        print(f"{f'F_{q}^{f}':>10} {args.curves:>7} {tn:>13.4f}s {tp:>9.4f}s {tp / tn:>7.1f}x")
    if not ok:
        print("MISMATCH between kernels")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
