#!/usr/bin/env python3
"""Benchmark the jitted kernels against their numpy fallbacks.

The package picks the path at import time from the XLINGUA_NUMBA env
flag; this script times both implementations side by side on synthetic
workloads shaped like real profile training / assignment batches.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import math
import time

import numpy as np

from xlingua.kernels import HAS_NUMBA, _csr_cosine_numpy, _g2_batch_numpy

if HAS_NUMBA:
    from xlingua.kernels import _csr_cosine_njit, _g2_batch_njit


def timeit(fn, args, repeats):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_g2(n_tables, repeats):
    rng = np.random.default_rng(42)
    args = tuple(rng.integers(0, 10_000, n_tables).astype(np.float64) for _ in range(4))
    rows = [("numpy", timeit(_g2_batch_numpy, args, repeats))]
    if HAS_NUMBA:
        _g2_batch_njit(*(a[:8] for a in args))  # compile
        rows.append(("numba", timeit(_g2_batch_njit, args, repeats)))
    return rows


def bench_cosine(n_rows, n_dims, nnz_per_row, repeats):
    rng = np.random.default_rng(7)
    indptr = np.arange(0, n_rows * nnz_per_row + 1, nnz_per_row, dtype=np.int64)
    indices = rng.integers(0, n_dims, n_rows * nnz_per_row).astype(np.int64)
    data = rng.uniform(0.1, 5.0, n_rows * nnz_per_row)
    norms = np.sqrt(np.add.reduceat(data * data, indptr[:-1]))
    query = rng.uniform(0.0, 1.0, n_dims)
    qnorm = float(np.sqrt(query @ query))
    args = (indptr, indices, data, norms, query, qnorm)
    rows = [("numpy", timeit(_csr_cosine_numpy, args, repeats))]
    if HAS_NUMBA:
        _csr_cosine_njit(*args)  # compile
        rows.append(("numba", timeit(_csr_cosine_njit, args, repeats)))
    return rows


def report(title, rows):
    print(f"\n{title}")
    base = rows[0][1]
    for name, secs in rows:
        speedup = base / secs if secs else float("inf")
        print(f"  {name:6s} {secs * 1000:9.3f} ms   x{speedup:5.2f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not HAS_NUMBA:
        print("numba unavailable or disabled (XLINGUA_NUMBA=0): timing numpy path only")

    for n in (10_000, 200_000, 1_000_000):
        report(f"g2_batch, {n:,} tables", bench_g2(n, args.repeats))

    for n_rows, nnz in ((1_000, 50), (10_000, 100), (50_000, 100)):
        report(
            f"csr_cosine_scores, {n_rows:,} rows x {nnz} nnz",
            bench_cosine(n_rows, 6_000, nnz, args.repeats),
        )


if __name__ == "__main__":
    main()
