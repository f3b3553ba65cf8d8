"""Quadratic-time pooling greedy for the chain-constrained budget LP.

Every iteration picks the non-full position ``i*`` whose pooled segment
``[i*, right(i*))`` has the cheapest mean weight (ties to the smaller index),
raises the whole segment until either ``x_{i*}`` reaches ``q_{i*}`` or the
budget runs out, then refreshes the segment means of the positions to its
left.  This is the correctness reference for the O(n log n) solver.

Positions in traces and in the full set ``S`` are 1-based; 0 and n+1 are the
permanent sentinels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import kernels
from .errors import NoCandidate
from .model import DEFAULT_TOL, LpInstance, Solution, Tolerances


@dataclass(frozen=True)
class GreedyTrace:
    """Per-iteration record: chosen index, its neighbours in S, step, residual."""

    i_star: np.ndarray
    i_left: np.ndarray
    i_right: np.ndarray
    d: np.ndarray
    b_hat: np.ndarray

    def __len__(self):
        return len(self.i_star)

    def rows(self):
        return zip(
            self.i_star.tolist(),
            self.i_left.tolist(),
            self.i_right.tolist(),
            self.d.tolist(),
            self.b_hat.tolist(),
        )

    def position(self) -> dict[int, int]:
        """Map each chosen index to the (0-based) iteration that chose it."""
        return {int(i): k for k, i in enumerate(self.i_star)}


def solve_greedy(
    inst: LpInstance, tol: Tolerances = DEFAULT_TOL, backend: str | None = None
) -> tuple[Solution, GreedyTrace]:
    run = kernels(backend)["greedy"]
    prefix = inst.prefix
    x, star, left, right, d, bhat = run(
        inst.q,
        np.asarray(prefix.cumulative, dtype=float),
        np.asarray(prefix.compensation, dtype=float),
        float(inst.K),
        tol.eps_zero(inst.K),
    )
    trace = GreedyTrace(star, left, right, d, bhat)
    return Solution.from_x(inst, x, iterations=len(trace), algorithm="greedy"), trace


# ---------------------------------------------------------------------------
# Step-by-step variant for inspecting intermediate states


@dataclass
class GreedyState:
    """Mutable working state of one greedy run.

    Built with :meth:`initial`; advanced with :func:`step`.  Tests use the
    intermediate states to check the invariants the solver relies on.
    """

    inst: LpInstance | None
    S: set[int]
    x: np.ndarray
    y: np.ndarray
    B_hat: float
    eps_zero: float = 0.0
    trace: list[tuple[int, int, int, float, float]] = field(default_factory=list)

    @classmethod
    def initial(cls, inst: LpInstance, tol: Tolerances = DEFAULT_TOL) -> "GreedyState":
        n = inst.n
        y = np.array([inst.prefix.avg(i, n + 1) for i in range(1, n + 1)], dtype=float)
        return cls(inst, {0, n + 1}, np.zeros(n), y, float(inst.K), tol.eps_zero(inst.K))

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def complete(self) -> bool:
        return len(self.S) == self.n + 2

    @property
    def done(self) -> bool:
        return self.complete or not self.B_hat > self.eps_zero

    def left(self, i: int) -> int:
        return max(j for j in self.S if j < i)

    def right(self, i: int) -> int:
        return min(j for j in self.S if j > i)


def select_next(state: GreedyState) -> int:
    """Return the lexicographic argmin of ``(y_i, i)`` over positions not in S."""
    best = None
    for i in range(1, state.n + 1):
        if i in state.S:
            continue
        if best is None or state.y[i - 1] < state.y[best - 1]:
            best = i
    if best is None:
        raise NoCandidate("every position is already full")
    return best


def step(state: GreedyState) -> tuple[int, int, int, float, float]:
    """Run one greedy iteration in place and return its trace record."""
    inst = state.inst
    s = select_next(state)
    left, right = state.left(s), state.right(s)
    width = right - s
    ys = state.y[s - 1]
    d = min(state.B_hat / (width * ys), max(inst.q[s - 1] - state.x[s - 1], 0.0))
    state.B_hat -= d * width * ys
    state.x[s - 1 : right - 1] += d
    for i in range(left + 1, s):
        state.y[i - 1] = inst.prefix.avg(i, s)
    state.S.add(s)
    rec = (s, left, right, d, state.B_hat)
    state.trace.append(rec)
    return rec


def iterate_states(inst: LpInstance, tol: Tolerances = DEFAULT_TOL):
    """Yield deep snapshots ``(S, x, y, B_hat)`` after every iteration."""
    state = GreedyState.initial(inst, tol)
    while not state.done:
        step(state)
        yield frozenset(state.S), state.x.copy(), state.y.copy(), state.B_hat
