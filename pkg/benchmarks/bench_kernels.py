"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from twistlap import kernels


def pair_workload(n=2, terms=40, seed=0):
    rng = np.random.default_rng(seed)
    ef = [tuple(int(v) for v in rng.integers(0, 5, 2 * n)) for _ in range(terms)]
    eg = [tuple(int(v) for v in rng.integers(0, 5, 2 * n)) for _ in range(terms)]
    cf = [complex(*rng.normal(size=2)) for _ in ef]
    cg = [complex(*rng.normal(size=2)) for _ in eg]
    return (ef, cf, eg, cg, -0.9 + 0.2j, [0.1j] * n, [0.2] * n)


CASES = {
    "pair_moment_sum (n=2, 40x40 terms)": ("pair_moment_sum", pair_workload()),
    "gaussian_moment_1d (a=b=8)": ("gaussian_moment_1d", (8, 8, -1.0 + 0.3j, 0.2j, 0.1)),
    "hyp1f1_series (x=25)": ("hyp1f1_series", (0.5 + 0j, 1.5 + 0j, 25 + 0j, 1e-16, 500)),
}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.backends()
    if "cython" not in backends:
        print("compiled backend not built; only the Python backend is timed")
    print(f"{'case':40s}" + "".join(f"{name:>14s}" for name in backends) + "   speedup")
    for label, (func, fargs) in CASES.items():
        times = {}
        for name, mod in backends.items():
            fn = getattr(mod, func)
            number = 20
            best = min(timeit.repeat(lambda: fn(*fargs), number=number, repeat=args.repeat))
            times[name] = best / number
        row = f"{label:40s}" + "".join(f"{t * 1e6:12.1f}us" for t in times.values())
        if len(times) == 2:
            row += f"   {times['python'] / times['cython']:6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
