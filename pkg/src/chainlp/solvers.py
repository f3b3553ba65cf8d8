"""Single entry point over the three solvers."""

from __future__ import annotations

from .fast import solve_fast
from .greedy import solve_greedy
from .model import DEFAULT_TOL, LpInstance, Solution, Tolerances
from .oracle import RationalInstance, solve_exact

ALGORITHMS = ("greedy", "fast", "oracle")


def solve(
    inst: LpInstance,
    algorithm: str = "fast",
    tol: Tolerances = DEFAULT_TOL,
    backend: str | None = None,
) -> Solution:
    if algorithm == "fast":
        return solve_fast(inst, tol, backend)
    if algorithm == "greedy":
        return solve_greedy(inst, tol, backend)[0]
    if algorithm == "oracle":
        exact = solve_exact(RationalInstance.from_lp(inst))
        return Solution.from_x(inst, [float(v) for v in exact.x], algorithm="oracle")
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
