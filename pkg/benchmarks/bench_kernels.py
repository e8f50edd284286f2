"""Time the compiled and pure-Python enumeration kernels against each other.

    python3 benchmarks/bench_kernels.py [--max-n 7] [--repeat 3]
"""
import argparse
import time

import numpy as np

from sixvertex import _enum_py

try:
    from sixvertex import _enum
except ImportError:
    _enum = None


def best_of(fn, n, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(n)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _enum is None:
        print("compiled kernel not built; only the pure-Python timings are shown")
    print(f"{'N':>2} {'configs':>8} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}")
    for n in range(1, args.max_n + 1):
        count = _enum_py.count_configs(n)
        t_py = best_of(_enum_py.enumerate_types, n, args.repeat)
        if _enum is None:
            print(f"{n:>2} {count:>8} {t_py:>11.4f} {'-':>11} {'-':>8}")
            continue
        assert np.array_equal(_enum.enumerate_types(n), _enum_py.enumerate_types(n))
        t_cy = best_of(_enum.enumerate_types, n, args.repeat)
        print(f"{n:>2} {count:>8} {t_py:>11.4f} {t_cy:>11.4f} {t_py / t_cy:>8.1f}")


if __name__ == "__main__":
    main()
