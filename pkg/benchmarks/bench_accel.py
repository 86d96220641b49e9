"""Benchmark the jitted kernel backend against the pure-numpy fallback.

Loads both implementations directly (bypassing the env-flag selection),
checks they agree on shared inputs, then reports per-call times and the
speedup. Sizes mirror a realistic episode: a few hundred training
triples scored against an arm pool.

Usage: python3 benchmarks/bench_accel.py [--repeats N]
"""

import argparse
import time

import numpy as np

from expbandit.accel import _numpy_impl

try:
    from expbandit.accel import _numba_impl
except ImportError:
    _numba_impl = None


def make_workloads(rng):
    ranks_a = np.ascontiguousarray([rng.permutation(10) for _ in range(200)])
    ranks_b = np.ascontiguousarray([rng.permutation(10) for _ in range(80)])
    gt_ids = np.arange(10, dtype=np.int64)
    pred_ids = rng.integers(0, 14, size=(80, 10)).astype(np.int64)
    pred_lens = rng.integers(1, 11, size=80).astype(np.int64)
    return {
        "rbf_cross": (
            rng.normal(size=(200, 100)), rng.normal(size=(80, 100)), 0.01),
        "linear_cross": (
            rng.normal(size=(200, 100)), rng.normal(size=(80, 100))),
        "jaccard_cross": (
            (rng.random((200, 25)) < 0.3).astype(np.float64),
            (rng.random((80, 25)) < 0.3).astype(np.float64)),
        "kendall_cross": (ranks_a.astype(np.int64), ranks_b.astype(np.int64)),
        "lcs_batch": (gt_ids, pred_ids, pred_lens),
    }


def time_call(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=30,
                        help="timing repetitions per op (best-of)")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    workloads = make_workloads(rng)

    if _numba_impl is None:
        print("numba unavailable; timing the numpy fallback only")
    else:
        import numba
        print(f"numba {numba.__version__} vs numpy {np.__version__}, "
              f"best of {args.repeats} calls")
        # trigger jit compilation outside the timed region
        for name, inputs in workloads.items():
            got = getattr(_numba_impl, name)(*inputs)
            want = getattr(_numpy_impl, name)(*inputs)
            if not np.allclose(got, want, atol=1e-12):
                raise SystemExit(f"{name}: backend outputs disagree")

    header = f"{'op':<16}{'numpy':>12}{'numba':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, inputs in workloads.items():
        t_np = time_call(getattr(_numpy_impl, name), inputs, args.repeats)
        if _numba_impl is None:
            print(f"{name:<16}{t_np * 1e3:>10.3f}ms{'-':>12}{'-':>10}")
            continue
        t_nb = time_call(getattr(_numba_impl, name), inputs, args.repeats)
        print(f"{name:<16}{t_np * 1e3:>10.3f}ms{t_nb * 1e3:>10.3f}ms"
              f"{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
