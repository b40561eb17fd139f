"""Time the pairwise-distance kernels of each available backend.

Usage: python benchmarks/bench_kernels.py [--sizes 250 1000 4000] [--dims 1 3] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from energyclust import _backend


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[250, 1000, 4000])
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 3])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    names = sorted(_backend.BACKENDS)
    print(f"backends: {', '.join(names)} (default: {_backend.BACKEND})")
    print(f"{'kernel':<10}{'n':>7}{'p':>4}" + "".join(f"{n + ' [s]':>16}" for n in names) + f"{'speedup':>10}")
    for p in args.dims:
        for n in args.sizes:
            a = np.ascontiguousarray(rng.standard_normal((n, p)))
            b = np.ascontiguousarray(rng.standard_normal((n, p)))
            times = {}
            for name in names:
                fn = _backend.get_backend(name).distance_sum
                times[name] = min(timeit.repeat(lambda: fn(a, b), number=1, repeat=args.repeat))
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{'distance':<10}{n:>7}{p:>4}" + "".join(f"{times[k]:>16.5f}" for k in names) + f"{speed:>10.1f}")
    for n in args.sizes:
        u, v = rng.standard_normal(n), rng.standard_normal(n)
        times = {}
        for name in names:
            fn = _backend.get_backend(name).gaussian_kernel_sum
            times[name] = min(timeit.repeat(lambda: fn(u, v, 1.0), number=1, repeat=args.repeat))
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{'gaussian':<10}{n:>7}{1:>4}" + "".join(f"{times[k]:>16.5f}" for k in names) + f"{speed:>10.1f}")


if __name__ == "__main__":
    main()
