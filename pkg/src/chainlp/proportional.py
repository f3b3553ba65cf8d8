"""Equilibria of the proportional-division contest and its efficiency loss.

Under proportional division agent ``i`` earns ``B * x_i / sum(x)`` and pays
``x_i * C / q_i``.  For two agents the interior equilibrium has a closed
form.  For more agents we iterate best responses, and when no capability
bound binds there is also a closed form for the active set.  The n > 2
routines are numerical extensions without an accompanying existence
guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DidNotConverge, InvalidInstance, NotInterior

CLOSED_FORM = "closed_form_2agent"
INTERIOR = "interior_formula"
BEST_RESPONSE = "best_response"


@dataclass(frozen=True)
class EquilibriumProfile:
    x: np.ndarray
    converged: bool
    iterations: int
    method: str
    max_gain: float = 0.0

    @property
    def gross_product(self) -> float:
        return float(np.sum(self.x))


def utility(i: int, x, q, B: float, C: float) -> float:
    x = np.asarray(x, dtype=float)
    total = float(x.sum())
    if x[i] == 0:
        return 0.0
    return x[i] * B / total - x[i] * C / q[i]


def _deviation_utilities(xi, others, qi, B, C):
    xi = np.asarray(xi, dtype=float)
    total = xi + others
    share = np.divide(xi * B, total, out=np.zeros_like(xi), where=total > 0)
    return share - xi * C / qi


def best_response(others: float, qi: float, B: float, C: float) -> float:
    """Maximiser of ``B*x/(x+others) - C*x/qi`` on ``[0, qi]`` (``others > 0``)."""
    return max(0.0, min(qi, math.sqrt(B * others * qi / C) - others))


def equilibrium_2agent(q1: float, q2: float, B: float, C: float) -> EquilibriumProfile:
    """Interior equilibrium of the two-agent game.

    Total output is ``B*q1*q2 / (C*(q1+q2))``; each agent's output equals
    ``total**2 * C / (B * q_other)``.  Raises :class:`NotInterior` when that
    point breaks a capability bound, in which case it is not an equilibrium.
    """
    if min(q1, q2, B, C) <= 0:
        raise InvalidInstance("q1, q2, B and C must all be positive")
    total = B * q1 * q2 / (C * (q1 + q2))
    x1 = total**2 * C / (q2 * B)
    x2 = total**2 * C / (q1 * B)
    if x1 > q1 or x2 > q2:
        raise NotInterior(f"closed form ({x1}, {x2}) exceeds the bounds ({q1}, {q2})")
    return EquilibriumProfile(np.array([x1, x2]), True, 0, CLOSED_FORM)


def foc_residuals(x, q, B: float, C: float) -> np.ndarray:
    """Marginal utilities ``B*X_-i/X**2 - C/q_i``; zero at an interior equilibrium."""
    x = np.asarray(x, dtype=float)
    q = np.asarray(q, dtype=float)
    total = x.sum()
    return B * (total - x) / total**2 - C / q


def max_deviation_gain(x, q, B: float, C: float, grid: int = 1000) -> np.ndarray:
    """Per-agent best gain over a uniform grid plus the analytic best response."""
    x = np.asarray(x, dtype=float)
    q = np.asarray(q, dtype=float)
    total = float(x.sum())
    gains = np.empty(len(x))
    for i in range(len(x)):
        others = total - x[i]
        cands = np.linspace(0.0, q[i], grid)
        if others > 0:
            cands = np.append(cands, best_response(others, q[i], B, C))
        current = _deviation_utilities(np.array([x[i]]), others, q[i], B, C)[0]
        gains[i] = float(np.max(_deviation_utilities(cands, others, q[i], B, C))) - current
    return gains


def equilibrium_interior(q, B: float, C: float) -> EquilibriumProfile:
    """Closed-form equilibrium of the n-agent contest ignoring capability bounds.

    Agents are active in increasing order of marginal cost ``C/q_i`` while
    their cost stays below ``sum(active costs) / (m - 1)``.  Active agents
    produce ``X - c_i X**2 / B`` with ``X = (m-1) B / sum(active costs)``.
    Raises :class:`NotInterior` when an output exceeds its bound.
    """
    q = np.asarray(q, dtype=float)
    n = len(q)
    if n < 2:
        raise InvalidInstance("the proportional contest needs at least two agents")
    cost = C / q
    order = np.argsort(cost, kind="stable")
    running = cost[order[0]] + cost[order[1]]
    m = 2
    while m < n and cost[order[m]] < (running + cost[order[m]]) / m:
        running += cost[order[m]]
        m += 1
    total = (m - 1) * B / running
    x = np.zeros(n)
    active = order[:m]
    x[active] = np.maximum(total - cost[active] * total**2 / B, 0.0)
    if np.any(x > q):
        raise NotInterior("interior equilibrium exceeds a capability bound")
    return EquilibriumProfile(x, True, 0, INTERIOR)


def best_response_dynamics(
    q,
    B: float,
    C: float,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    raise_on_failure: bool = True,
) -> EquilibriumProfile:
    """Gauss-Seidel best-response iteration with adaptive damping.

    Steps start undamped; whenever some agent's update flips sign twice in a
    row the step factor is halved.  An agent has settled once its distance
    to its best response is below ``tol * q_i``.  Raises :class:`DidNotConverge` (carrying
    the last profile) when ``max_iter`` sweeps do not settle or the settled
    point fails the deviation check.
    """
    q = np.asarray(q, dtype=float)
    n = len(q)
    if n < 2:
        raise InvalidInstance("the proportional contest needs at least two agents")
    if tol <= 0:
        raise ValueError("tol must be positive")
    # symmetric-game equilibrium scale as a starting point
    x = np.minimum(q, B * (n - 1) * q / (n * n * C))
    prev_sign = np.zeros(n)
    flips = np.zeros(n, dtype=int)
    step = 1.0
    step_tol = tol * q

    converged = False
    it = 0
    while it < max_iter:
        it += 1
        settled = True
        for i in range(n):
            others = float(x.sum() - x[i])
            if others > 0:
                target = best_response(others, q[i], B, C)
            else:
                # against silence the supremum sits at 0+ and is never attained;
                # a tiny positive entry lets the others respond and re-enter
                target = 1e-6 * min(q[i], B * q[i] / C)
            residual = target - x[i]
            # judge convergence on the undamped residual, not the damped step;
            # residuals below tolerance are rounding noise and never count as
            # oscillation
            if abs(residual) >= step_tol[i]:
                settled = False
                sign = np.sign(residual)
                if prev_sign[i] != 0 and sign != prev_sign[i]:
                    flips[i] += 1
                    if flips[i] >= 2:
                        step *= 0.5
                        flips[:] = 0
                else:
                    flips[i] = 0
                prev_sign[i] = sign
            x[i] += step * residual
        if settled:
            converged = True
            break

    gain = float(np.max(max_deviation_gain(x, q, B, C)))
    verified = gain <= tol * C
    profile = EquilibriumProfile(x.copy(), converged and verified, it, BEST_RESPONSE, gain)
    if raise_on_failure and not profile.converged:
        raise DidNotConverge(
            f"best responses did not settle after {it} sweeps (max gain {gain:.3g})", profile
        )
    return profile


def equilibrium(
    q, B: float, C: float, tol: float = 1e-12, max_iter: int = 100_000, raise_on_failure: bool = True
) -> EquilibriumProfile:
    """Two-agent closed form when it applies, otherwise best-response iteration.

    :func:`equilibrium_interior` is deliberately not used here; it serves as
    an independent cross-check of the iteration for n > 2.
    """
    q = np.asarray(q, dtype=float)
    if len(q) == 2:
        try:
            return equilibrium_2agent(float(q[0]), float(q[1]), B, C)
        except NotInterior:
            pass
    return best_response_dynamics(q, B, C, tol=tol, max_iter=max_iter, raise_on_failure=raise_on_failure)


@dataclass(frozen=True)
class Comparison:
    equilibrium: EquilibriumProfile
    optimal_objective: float
    ratio: float


def compare(
    mech,
    algorithm: str = "fast",
    tol: float = 1e-12,
    max_iter: int = 100_000,
    raise_on_failure: bool = True,
) -> Comparison:
    """Proportional-equilibrium gross product against the optimal schedule's.

    The equilibrium profile is in sorted-type order.
    """
    from .reduction import to_lp
    from .solvers import solve

    eq = equilibrium(mech.q, mech.B, mech.C, tol=tol, max_iter=max_iter, raise_on_failure=raise_on_failure)
    opt = solve(to_lp(mech), algorithm).objective
    return Comparison(eq, opt, eq.gross_product / opt)


def efficiency_ratio(mech, algorithm: str = "fast") -> float:
    return compare(mech, algorithm).ratio
