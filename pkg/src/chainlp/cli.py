"""Command-line interface: ``chainlp solve|reward|compare|bench``.

Exit codes: 0 success, 1 a result failed its own verification, 2 invalid
input, 3 instance too large for the oracle, 4 equilibrium search did not
converge.
"""

from __future__ import annotations

import argparse
import csv
import re
import statistics
import sys
import time

import numpy as np

from . import __version__
from .errors import InvalidInstance, TooLarge
from .generate import Z_MODES, random_lp
from .io import load_instance, write_report
from .model import Tolerances
from .proportional import compare
from .reduction import budget_lhs, build_reward, verify_incentives
from .solvers import ALGORITHMS, solve

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INVALID = 2
EXIT_TOO_LARGE = 3
EXIT_NOT_CONVERGED = 4


def _error(msg: str) -> None:
    print(f"chainlp: error: {msg}", file=sys.stderr)


def _solve_file(inst_file, algorithm, tol):
    """Solve an instance file; returns (lp, solution, mech or None)."""
    lp = inst_file.lp()
    if algorithm == "oracle":
        # use the exact file contents rather than their float images
        from .oracle import solve_exact
        from .model import Solution

        exact = solve_exact(inst_file.rational())
        sol = Solution.from_x(lp, [float(v) for v in exact.x], algorithm="oracle")
    else:
        sol = solve(lp, algorithm, tol)
    mech = inst_file.mechanism() if inst_file.kind == "mechanism" else None
    return lp, sol, mech


def _solution_block(inst_file, lp, sol, mech) -> dict:
    block = {
        "kind": inst_file.kind,
        "name": inst_file.name,
        "algorithm": sol.algorithm,
        "n": lp.n,
    }
    if mech is None:
        block.update(x=sol.x, objective=sol.objective, budget_used=sol.budget_used, budget=lp.K)
    else:
        block.update(
            x=mech.to_caller(sol.x),
            objective=sol.objective,
            budget_used=budget_lhs(mech, sol.x),
            budget=mech.B,
        )
    return block


def cmd_solve(args) -> int:
    tol = Tolerances.from_env()
    inst_file = load_instance(args.instance)
    start = time.perf_counter()
    lp, sol, mech = _solve_file(inst_file, args.algorithm, tol)
    elapsed = time.perf_counter() - start
    problems = sol.violations(lp, tol.eps_feas)
    if problems:
        _error(f"solution failed the feasibility gate: {', '.join(problems)}")
        return EXIT_FAILED_CHECK
    report = _solution_block(inst_file, lp, sol, mech)
    if args.timing:
        report["timing"] = {"solve_seconds": elapsed}
    write_report(report, args.out, sys.stdout)
    return EXIT_OK


def cmd_reward(args) -> int:
    tol = Tolerances.from_env()
    inst_file = load_instance(args.instance)
    if inst_file.kind != "mechanism":
        raise InvalidInstance("reward needs a mechanism-form instance (q, B, C)")
    lp, sol, mech = _solve_file(inst_file, args.algorithm, tol)
    schedule = build_reward(mech, sol.x, tol)
    check = verify_incentives(schedule, mech, sol.x, tol)
    report = _solution_block(inst_file, lp, sol, mech)
    report["reward"] = {
        "breakpoints": [[t, v] for t, v in schedule.breakpoints],
        "total_reward": check.total_reward,
        "passed": check.passed,
        "agents": [
            {
                "agent": a.agent,
                "quality": a.target,
                "utility": a.utility,
                "best_deviation": a.best_deviation,
                "deviation_utility": a.deviation_utility,
                "passed": a.passed,
            }
            for a in sorted(check.agents, key=lambda a: a.agent)
        ],
    }
    write_report(report, args.out, sys.stdout)
    if not check.passed:
        _error("the reward schedule failed incentive verification")
        return EXIT_FAILED_CHECK
    return EXIT_OK


def cmd_compare(args) -> int:
    inst_file = load_instance(args.instance)
    mech = inst_file.mechanism()
    if mech.n < 2:
        raise InvalidInstance("compare needs at least two agents")
    result = compare(mech, args.algorithm, tol=args.tol, max_iter=args.max_iter, raise_on_failure=False)
    eq = result.equilibrium
    report = {
        "kind": "mechanism",
        "name": inst_file.name,
        "n": mech.n,
        "comparison": {
            "method": eq.method,
            "converged": eq.converged,
            "iterations": eq.iterations,
            "max_deviation_gain": eq.max_gain,
            "equilibrium": mech.to_caller(eq.x),
            "proportional_objective": eq.gross_product,
            "optimal_objective": result.optimal_objective,
            "ratio": result.ratio,
        },
    }
    write_report(report, args.out, sys.stdout)
    if not eq.converged:
        _error(f"best responses did not converge after {eq.iterations} sweeps")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


_POWER = re.compile(r"^\s*2\^(\d+)\s*$")
_POWER_RANGE = re.compile(r"^\s*2\^(\d+)\s*\.\.\s*2\^(\d+)\s*$")


def parse_sizes(text: str) -> list[int]:
    """Parse ``"1000,2^10,2^14..2^16"`` into a list of sizes."""
    sizes = []
    for part in text.split(","):
        if not part.strip():
            continue
        m = _POWER_RANGE.match(part)
        if m:
            lo, hi = int(m[1]), int(m[2])
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            sizes.extend(2**k for k in range(lo, hi + 1))
            continue
        m = _POWER.match(part)
        try:
            value = 2 ** int(m[1]) if m else int(part)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad size {part!r}") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"sizes must be positive, got {value}")
        sizes.append(value)
    if not sizes:
        raise argparse.ArgumentTypeError("no sizes given")
    return sizes


def parse_algorithms(text: str) -> list[str]:
    algos = [a.strip() for a in text.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {a!r}")
    return algos


def run_bench(sizes, algorithms, seed=0, z_mode="mechanism", repeats=1, tol=None):
    """Time each solver on one random instance per size; return CSV rows."""
    tol = tol or Tolerances.from_env()
    # compile the kernels before anything is timed
    warm = random_lp(np.random.default_rng(0), 8, z_mode)
    for algo in algorithms:
        solve(warm, algo, tol)

    rows = []
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        inst = random_lp(rng, n, z_mode)
        for algo in algorithms:
            times = []
            for _ in range(repeats):
                start = time.perf_counter()
                sol = solve(inst, algo, tol)
                times.append(time.perf_counter() - start)
            rows.append({"n": n, "algorithm": algo, "seconds": statistics.median(times), "objective": sol.objective})
    return rows


def cmd_bench(args) -> int:
    if "oracle" in args.algorithm and max(args.sizes) > 12:
        raise TooLarge("the oracle handles n <= 12 only")
    rows = run_bench(args.sizes, args.algorithm, args.seed, args.z_mode, args.repeats)
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "algorithm", "seconds", "objective"])
        for r in rows:
            writer.writerow([r["n"], r["algorithm"], repr(r["seconds"]), repr(r["objective"])])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainlp",
        description="Solve chain-ordered budget LPs and design step reward schedules.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an LP or mechanism instance")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="fast")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reward", help="optimal step reward schedule for a mechanism instance")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="fast")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reward)

    p = sub.add_parser("compare", help="proportional equilibrium against the optimal schedule")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="fast")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="time solvers on random instances")
    p.add_argument("--sizes", type=parse_sizes, default=parse_sizes("2^10..2^14"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algorithm", type=parse_algorithms, default=["fast"], help="comma-separated list")
    p.add_argument("--z-mode", choices=Z_MODES, default="mechanism")
    p.add_argument("--repeats", type=int, default=1, help="report the median of this many runs")
    p.add_argument("--csv", help="output path (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidInstance as exc:
        _error(f"{type(exc).__name__}: {exc}")
        return EXIT_INVALID
    except TooLarge as exc:
        _error(str(exc))
        return EXIT_TOO_LARGE
    except OSError as exc:
        _error(str(exc))
        return EXIT_INVALID


def entry() -> None:
    sys.exit(main())
