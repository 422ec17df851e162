"""Timing of the compiled and pure-Python linear-algebra kernels.

Run with ``python3 benchmarks/bench_kernels.py [--sizes 255 1023 4095]``.
Both backends solve the same diagonally dominant systems; the script reports
the median wall time per solve and the largest difference between solutions.
"""
import argparse
import timeit

import numpy as np

from kinklab import kernels


def tridiagonal_system(n, rng):
    sub = rng.uniform(-1.0, 1.0, n - 1)
    sup = rng.uniform(-1.0, 1.0, n - 1)
    diag = 4.0 + rng.uniform(0.0, 1.0, n)
    return sub, diag, sup, rng.standard_normal(n)


def block_system(n, rng):
    sub = rng.uniform(-1.0, 1.0, (n - 1, 2, 2))
    sup = rng.uniform(-1.0, 1.0, (n - 1, 2, 2))
    diag = rng.uniform(-0.5, 0.5, (n, 2, 2)) + 6.0 * np.eye(2)
    return sub, diag, sup, rng.standard_normal((n, 2))


def bench(solver, system, backend, repeat):
    times = timeit.repeat(lambda: solver(*system, backend=backend), number=1, repeat=repeat)
    return float(np.median(times)), solver(*system, backend=backend)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[255, 1023, 4095, 16383])
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = sorted(kernels.BACKENDS)
    rng = np.random.default_rng(args.seed)
    print(f"backends available: {', '.join(backends)} (default {kernels.BACKEND})")
    print(f"{'kernel':<10s} {'n':>7s} " + " ".join(f"{b + ' [ms]':>14s}" for b in backends)
          + f" {'speedup':>9s} {'max diff':>10s}")
    for name, make, solver in (("tridiag", tridiagonal_system, kernels.solve_tridiagonal),
                               ("block2x2", block_system, kernels.solve_block_tridiagonal)):
        for n in args.sizes:
            system = make(n, rng)
            res = {b: bench(solver, system, b, args.repeat) for b in backends}
            times = [res[b][0] for b in backends]
            speedup = res["python"][0] / res["cython"][0] if "cython" in res else float("nan")
            diff = max(float(np.max(np.abs(res[b][1] - res[backends[0]][1]))) for b in backends)
            print(f"{name:<10s} {n:>7d} " + " ".join(f"{1e3 * t:>14.3f}" for t in times)
                  + f" {speedup:>9.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
