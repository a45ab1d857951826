#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot kernels (row-sum accumulation of transformed variates and
the coupled-gap counter) on realistic shapes, plus uniform generation as a
baseline, and reports the speedup.  Run from the repository root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --rows 4000 --terms 100 1000 10000
"""

import argparse
import time

import numpy as np

from cltkit import _kernels
from cltkit._backend import active_backend


def _mixed_params(terms: int):
    kinds = np.array([i % 6 for i in range(terms)], dtype=np.int64)
    p0 = np.linspace(-1.0, 1.0, terms)
    p1 = np.linspace(0.5, 2.0, terms)
    p2 = np.full(terms, 0.2)
    return kinds, p0, p1, p2


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(rows: int, terms_list, repeats: int) -> None:
    print(f"active backend: {active_backend()}")
    print(f"{'kernel':<18} {'shape':<16} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    for terms in terms_list:
        kinds, p0, p1, p2 = _mixed_params(terms)
        u = np.random.Generator(np.random.Philox(key=7)).random((rows, terms))
        t_gen = _time(lambda: np.random.Generator(
            np.random.Philox(key=7)).random((rows, terms)), repeats)
        shape = f"{rows}x{terms}"
        print(f"{'philox uniforms':<18} {shape:<16} {'':>10} {t_gen:>9.4f}s {'':>9}")

        cases = [
            ("row sums", _kernels.sum_rows_numba, _kernels.sum_rows_numpy,
             lambda impl: impl(u, kinds, p0, p1, p2)),
            ("gap counter", _kernels.gap_exceed_count_numba,
             _kernels.gap_exceed_count_numpy,
             lambda impl: impl(u, kinds, p0, p1, p2, max(1, terms // 2),
                               0.5, 1.0, 0.9, 0.7, 0.25)),
        ]
        for label, jit_impl, np_impl, call in cases:
            t_np = _time(lambda: call(np_impl), repeats)
            if jit_impl is None:
                print(f"{label:<18} {shape:<16} {'n/a':>10} {t_np:>9.4f}s {'':>9}")
                continue
            call(jit_impl)  # compile outside the timed region
            t_nb = _time(lambda: call(jit_impl), repeats)
            print(f"{label:<18} {shape:<16} {t_nb:>9.4f}s {t_np:>9.4f}s "
                  f"{t_np / t_nb:>8.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=2000,
                        help="replicates per timed batch (default 2000)")
    parser.add_argument("--terms", type=int, nargs="+",
                        default=[100, 1000, 10_000],
                        help="terms per replicate (default 100 1000 10000)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repetitions, best-of (default 3)")
    args = parser.parse_args()
    run(args.rows, args.terms, args.repeats)


if __name__ == "__main__":
    main()
