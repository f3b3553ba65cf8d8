"""Reward-mechanism design on top of the LP.

Agents have types ``q_i`` (best achievable quality) and pay ``x * C / q_i`` to
produce quality ``x``.  An anonymous reward schedule ``f`` pays ``f(x)`` for
quality ``x``.  With types sorted, a monotone quality profile can be
sustained within budget ``B`` exactly when ``C * sum(z_i x_i) <= B`` for the
weights produced by :func:`to_lp`, and then the step function returned by
:func:`build_reward` sustains it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, InvalidInstance, NonMonotoneProfile, NonPositiveBound
from .model import DEFAULT_TOL, LpInstance, Solution, Tolerances, validate


def sort_types(raw_q) -> tuple[np.ndarray, np.ndarray]:
    """Stable ascending sort; ``perm[k]`` is the caller index of sorted slot ``k``."""
    q = np.atleast_1d(np.asarray(raw_q, dtype=float))
    if q.size == 0:
        raise InvalidInstance("at least one agent is required")
    if not np.all(np.isfinite(q)) or np.any(q <= 0):
        raise NonPositiveBound("agent types must be positive and finite")
    perm = np.argsort(q, kind="stable")
    return q[perm], perm


def to_caller_order(values, perm) -> np.ndarray:
    out = np.empty(len(perm), dtype=np.asarray(values).dtype)
    out[perm] = values
    return out


@dataclass(frozen=True, eq=False)
class MechanismInstance:
    """Sorted agent types with budget ``B`` and cost constant ``C``."""

    q: np.ndarray
    B: float
    C: float
    original_order: np.ndarray

    @classmethod
    def create(cls, raw_q, B, C) -> "MechanismInstance":
        q, perm = sort_types(raw_q)
        B, C = float(B), float(C)
        if not (np.isfinite(B) and B > 0):
            raise InvalidInstance(f"budget B must be positive, got {B}")
        if not (np.isfinite(C) and C > 0):
            raise InvalidInstance(f"cost constant C must be positive, got {C}")
        q.setflags(write=False)
        perm.setflags(write=False)
        return cls(q, B, C, perm)

    @property
    def n(self) -> int:
        return len(self.q)

    def to_caller(self, x) -> np.ndarray:
        return to_caller_order(x, self.original_order)

    def to_sorted(self, x_caller) -> np.ndarray:
        return np.asarray(x_caller)[self.original_order]


def budget_weights(q: np.ndarray) -> np.ndarray:
    n = len(q)
    inv = 1.0 / q
    z = np.empty(n)
    z[-1] = inv[-1]
    if n > 1:
        i = np.arange(1, n)
        z[:-1] = (n - i) * (inv[:-1] - inv[1:]) + inv[:-1]
    return z


def to_lp(mech: MechanismInstance) -> LpInstance:
    return validate(mech.q, budget_weights(mech.q), mech.B / mech.C)


def budget_lhs(mech: MechanismInstance, x) -> float:
    """Total reward ``C * (x_n/q_n + sum_{i<n} ((n-i)(1/q_i - 1/q_{i+1}) + 1/q_i) x_i)``.

    ``x`` is in sorted-agent order.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != mech.q.shape:
        raise DimensionMismatch(f"profile has shape {x.shape}, expected {mech.q.shape}")
    q, n = mech.q, mech.n
    total = x[-1] / q[-1]
    for i in range(1, n):
        total += ((n - i) * (1 / q[i - 1] - 1 / q[i]) + 1 / q[i - 1]) * x[i - 1]
    return float(mech.C * total)


@dataclass(frozen=True)
class RewardSchedule:
    """Non-decreasing right-continuous step function.

    ``f(x)`` is the level of the largest threshold ``<= x``, or 0 below the
    first threshold.
    """

    thresholds: np.ndarray
    levels: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.searchsorted(self.thresholds, x, side="right")
        padded = np.concatenate(([0.0], self.levels))
        out = padded[k]
        return float(out) if out.ndim == 0 else out

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        return list(zip(self.thresholds.tolist(), self.levels.tolist()))

    @classmethod
    def from_breakpoints(cls, pairs) -> "RewardSchedule":
        pairs = sorted(pairs)
        t = np.array([p[0] for p in pairs], dtype=float)
        v = np.array([p[1] for p in pairs], dtype=float)
        if np.any(np.diff(t) <= 0):
            raise ValueError("thresholds must be strictly increasing")
        return cls(t, v)


def _clean_profile(mech: MechanismInstance, x_star, tol: Tolerances) -> np.ndarray:
    """Project float noise away; raise if the profile is genuinely invalid."""
    x = np.asarray(x_star, dtype=float)
    if x.shape != mech.q.shape:
        raise DimensionMismatch(f"profile has shape {x.shape}, expected {mech.q.shape}")
    slack = tol.eps_feas * max(float(mech.q[-1]), 1.0)
    if np.any(x < -slack) or np.any(x > mech.q + slack):
        raise InvalidInstance("profile leaves the capability range [0, q_i]")
    if np.any(np.diff(x) < -slack):
        raise NonMonotoneProfile("profile must be non-decreasing in sorted-type order")
    return np.maximum.accumulate(np.clip(x, 0.0, mech.q))


def reward_levels(mech: MechanismInstance, x) -> np.ndarray:
    """Level owed to each agent: ``C * sum_{j<=i} (x_j - x_{j-1}) / q_j``."""
    x = np.asarray(x, dtype=float)
    return mech.C * np.cumsum(np.diff(x, prepend=0.0) / mech.q)


def build_reward(
    mech: MechanismInstance, x_star, tol: Tolerances = DEFAULT_TOL
) -> RewardSchedule:
    """Cheapest step schedule that makes the sorted profile ``x_star`` incentive compatible."""
    x = _clean_profile(mech, x_star, tol)
    used = budget_lhs(mech, x)
    if used > mech.B * (1 + tol.eps_feas):
        raise BudgetExceeded(f"profile needs {used!r} but the budget is {mech.B!r}")
    levels = reward_levels(mech, x)
    positive = x > 0
    xs, ls = x[positive], levels[positive]
    # duplicates: keep the last (highest) level for each distinct threshold
    last = np.ones(len(xs), dtype=bool)
    last[:-1] = xs[1:] != xs[:-1]
    return RewardSchedule(xs[last].copy(), ls[last].copy())


@dataclass(frozen=True)
class AgentCheck:
    agent: int
    target: float
    utility: float
    best_deviation: float
    deviation_utility: float
    passed: bool


@dataclass(frozen=True)
class IncentiveReport:
    agents: list[AgentCheck]
    total_reward: float
    budget: float
    budget_ok: bool
    nonnegative: bool

    @property
    def passed(self) -> bool:
        return self.budget_ok and self.nonnegative and all(a.passed for a in self.agents)

    def failures(self) -> list[AgentCheck]:
        return [a for a in self.agents if not a.passed]


def verify_incentives(
    schedule: RewardSchedule,
    mech: MechanismInstance,
    x_star,
    tol: Tolerances = DEFAULT_TOL,
    chunk: int = 2048,
) -> IncentiveReport:
    """Check that nobody gains by deviating from ``x_star`` (sorted order).

    On each step of a non-decreasing step function, utility ``f(x) - x*C/q``
    is maximised at the step's left end, so ``{0}`` plus every threshold not
    above ``q_i`` covers all best deviations.  Agent indices in the report
    are caller indices.
    """
    try:
        x = _clean_profile(mech, x_star, tol)
    except (InvalidInstance, NonMonotoneProfile):
        x = np.asarray(x_star, dtype=float)
    q, C = mech.q, mech.C
    t, lv = schedule.thresholds, schedule.levels
    target_u = schedule(x) - x * C / q
    slack = tol.eps_feas * C

    best_x = np.zeros(len(q))
    best_u = np.zeros(len(q))
    for lo in range(0, len(q), chunk):
        qs = q[lo : lo + chunk, None]
        u = np.where(t[None, :] <= qs, lv[None, :] - t[None, :] * C / qs, -np.inf)
        if u.shape[1]:
            k = np.argmax(u, axis=1)
            uk = u[np.arange(len(k)), k]
            better = uk > 0.0
            best_u[lo : lo + chunk] = np.where(better, uk, 0.0)
            best_x[lo : lo + chunk] = np.where(better, t[k], 0.0)

    total = float(np.sum(schedule(x)))
    agents = [
        AgentCheck(
            agent=int(mech.original_order[i]),
            target=float(x[i]),
            utility=float(target_u[i]),
            best_deviation=float(best_x[i]),
            deviation_utility=float(best_u[i]),
            passed=bool(target_u[i] >= best_u[i] - slack),
        )
        for i in range(len(q))
    ]
    return IncentiveReport(
        agents=agents,
        total_reward=total,
        budget=mech.B,
        budget_ok=total <= mech.B * (1 + tol.eps_feas),
        nonnegative=bool(np.all(lv >= 0)),
    )


@dataclass(frozen=True)
class MechanismDesign:
    mechanism: MechanismInstance
    lp: LpInstance
    solution: Solution
    x: np.ndarray
    schedule: RewardSchedule
    report: IncentiveReport


def design(
    mech: MechanismInstance,
    algorithm: str = "fast",
    tol: Tolerances = DEFAULT_TOL,
) -> MechanismDesign:
    """Solve for the best profile, build its schedule and verify it.

    ``x`` in the result is in the caller's agent order.
    """
    from .solvers import solve

    lp = to_lp(mech)
    sol = solve(lp, algorithm, tol)
    schedule = build_reward(mech, sol.x, tol)
    report = verify_incentives(schedule, mech, sol.x, tol)
    return MechanismDesign(mech, lp, sol, mech.to_caller(sol.x), schedule, report)
