"""Compare the numba kernels against the numpy/Python fallbacks.

Usage::

    python3 benchmarks/bench_backends.py --sizes 2^10..2^14 --repeats 3

Both backends run in the same process (the env flag only changes the
default dispatch), so the table shows the speedup directly.  Objectives are
printed as a sanity check that the backends agree.
"""

import argparse
import statistics
import time

import numpy as np

from chainlp._jit import HAS_NUMBA
from chainlp.cli import parse_sizes
from chainlp.fast import solve_fast
from chainlp.generate import random_lp
from chainlp.greedy import solve_greedy


def timed(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=parse_sizes, default=parse_sizes("2^8..2^12"))
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-greedy-above", type=int, default=2**13,
                    help="the numpy greedy is quadratic; skip it beyond this n")
    args = ap.parse_args(argv)

    if not HAS_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    warm = random_lp(np.random.default_rng(0), 16)
    for backend in ("numba", "numpy"):
        solve_fast(warm, backend=backend)
        solve_greedy(warm, backend=backend)

    print(f"{'n':>8} {'solver':>7} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  objective")
    for n in args.sizes:
        inst = random_lp(np.random.default_rng([args.seed, n]), n)
        solvers = {"fast": solve_fast, "greedy": lambda i, backend: solve_greedy(i, backend=backend)[0]}
        for name, fn in solvers.items():
            if name == "greedy" and n > args.skip_greedy_above:
                continue
            t_jit, s_jit = timed(lambda: fn(inst, backend="numba"), args.repeats)
            t_np, s_np = timed(lambda: fn(inst, backend="numpy"), args.repeats)
            agree = "" if np.isclose(s_jit.objective, s_np.objective, rtol=1e-9) else "  MISMATCH"
            print(f"{n:>8} {name:>7} {t_jit:>10.4g} {t_np:>10.4g} {t_np / t_jit:>8.1f}  {s_jit.objective:.12g}{agree}")


if __name__ == "__main__":
    main()
