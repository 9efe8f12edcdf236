#!/usr/bin/env python3
"""Benchmark the compiled eigensolver core against the pure-Python fallback.

Runs the full decomposition and the eigenvalues-only path on random dense
symmetric matrices and on tridiagonal matrices, and reports the speedup.

    python benchmarks/bench_kernel.py --sizes 200 500 1000
"""

import argparse
import time

import numpy as np

from speclim._kernel import load_backend


def _solve(mod, a, want_vectors):
    buf = a.copy()
    d, e = mod.tridiagonalize(buf, want_vectors)
    zt = np.ascontiguousarray(buf.T) if want_vectors else None
    fail = mod.ql(d, e, zt, 50 * a.shape[0])
    assert fail == -1
    return d


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400, 800])
    parser.add_argument("--repeats", type=int, default=1)
    args = parser.parse_args()

    compiled = load_backend("compiled")
    fallback = load_backend("python")
    rng = np.random.default_rng(7)

    print(f"{'n':>6} {'mode':<12} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for n in args.sizes:
        a = rng.standard_normal((n, n))
        a = a + a.T
        for label, vectors in (("full", True), ("values", False)):
            wc = _solve(compiled, a, vectors)
            wp = _solve(fallback, a, vectors)
            assert np.abs(np.sort(wc) - np.sort(wp)).max() < 1e-10 * n
            tc = _time(lambda: _solve(compiled, a, vectors), args.repeats)
            tp = _time(lambda: _solve(fallback, a, vectors), args.repeats)
            print(f"{n:>6} {label:<12} {tc:>9.3f}s {tp:>9.3f}s {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
