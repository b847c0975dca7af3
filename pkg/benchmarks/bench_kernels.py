"""Compare the compiled and pure-Python enumeration kernels.

Usage: python3 benchmarks/bench_kernels.py [--sizes 4,6,8,10] [--repeat 3]
"""

import argparse
import time

import numpy as np

from permcap import kernels

FUNCS = ("permanent_ryser", "poly_ryser", "permanent_definition", "poly_definition")
# the definition kernels enumerate injections; keep them to small sizes
MAX_DEFINITION = 7


def best_time(fn, a, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(a)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4,6,8,10")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; timing the python backend only")
    rng = np.random.default_rng(0)
    previous = kernels.backend()
    print(f"{'kernel':<22}{'n':>4}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    try:
        for name in FUNCS:
            for n in sizes:
                if "definition" in name and n > MAX_DEFINITION:
                    continue
                a = rng.uniform(0.0, 1.0, (n, n))
                times = {}
                for b in backends:
                    kernels.set_backend(b)
                    times[b] = best_time(getattr(kernels, name), a, args.repeat)
                speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
                cols = "".join(f"{times[b] * 1e3:>12.3f}ms" for b in backends)
                print(f"{name:<22}{n:>4}{cols}{speed:>9.1f}x")
    finally:
        kernels.set_backend(previous)


if __name__ == "__main__":
    main()
