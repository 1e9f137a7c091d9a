"""Benchmark the compiled kernels against the pure-numpy fallbacks.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Covers the two hot paths: tolerance-based row matching (the quadratic core
of the privacy metrics) and the two-sample KS statistic. Both backends are
imported directly, so the comparison runs even when the package selected
the native kernels at import time.
"""

import argparse
import time

import numpy as np

from synthtab._kernels import BACKEND, _fallback

try:
    from synthtab._kernels import _native
except ImportError:
    _native = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_case(label, native_fn, fallback_fn, repeats):
    t_fb = timeit(fallback_fn, repeats)
    if native_fn is None:
        print(f"{label:34s} python {t_fb * 1e3:9.2f} ms   native (not built)")
        return
    t_nat = timeit(native_fn, repeats)
    print(f"{label:34s} python {t_fb * 1e3:9.2f} ms   "
          f"native {t_nat * 1e3:9.2f} ms   speedup {t_fb / t_nat:6.1f}x")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"selected backend at import: {BACKEND}\n")

    for n_rows, n_pool, k in ((414, 414, 6), (1000, 414, 6),
                              (1000, 1000, 6)):
        rows = rng.uniform(0, 100, (n_rows, k))
        pool = rng.uniform(0, 100, (n_pool, k))
        tol = np.full(k, 0.01)  # scarce matches: worst case, no early exit
        bench_case(
            f"match_any_row {n_rows}x{n_pool}x{k}",
            (lambda r=rows, p=pool, t=tol: _native.match_any_row(r, p, t))
            if _native else None,
            lambda r=rows, p=pool, t=tol: _fallback.match_any_row(r, p, t),
            args.repeats,
        )

    for n in (10_000, 100_000, 1_000_000):
        x = np.sort(rng.normal(0, 1, n))
        y = np.sort(rng.normal(0.1, 1.1, n))
        bench_case(
            f"ks_statistic n={n}",
            (lambda a=x, b=y: _native.ks_statistic(a, b)) if _native else None,
            lambda a=x, b=y: _fallback.ks_statistic(a, b),
            args.repeats,
        )

    if _native is not None:
        rows = rng.uniform(0, 1, (200, 4))
        pool = rng.uniform(0, 1, (200, 4))
        tol = np.full(4, 0.05)
        assert np.array_equal(_native.match_any_row(rows, pool, tol),
                              _fallback.match_any_row(rows, pool, tol))
        x = np.sort(rng.normal(0, 1, 999))
        y = np.sort(rng.normal(0, 1, 1234))
        assert _native.ks_statistic(x, y) == _fallback.ks_statistic(x, y)
        print("\nparity check: backends agree")


if __name__ == "__main__":
    main()
