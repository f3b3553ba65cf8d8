"""Core instance and solution types for the chain-constrained budget LP.

The problem solved throughout the package is::

    maximize    sum(x)
    subject to  0 <= x_1 <= x_2 <= ... <= x_n,   x_i <= q_i,
                sum(z_i * x_i) <= K

with ``0 < q_1 <= ... <= q_n``, ``z_i > 0`` and ``K >= 0``.

Index-taking helpers (``PrefixSums.sum``/``avg``) use 1-based positions so
that 0 and n+1 can serve as sentinels, mirroring the solvers' bookkeeping.
Arrays themselves are ordinary 0-based numpy arrays.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInstance,
    IndexOutOfRange,
    NegativeBudget,
    NonFiniteValue,
    NonPositiveBound,
    NonPositiveWeight,
    UnsortedBounds,
)

TOL_ENV = "CHAINLP_TOL"


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Tolerances:
    """Numerical slack used by solvers and verifiers.

    ``eps_feas`` is a relative feasibility slack.  The budget is considered
    exhausted once the residual drops to ``eps_zero_rel * K`` (never below
    ``eps_zero_floor``).
    """

    eps_feas: float = 1e-9
    eps_zero_rel: float = 1e-12
    eps_zero_floor: float = 1e-300

    def __post_init__(self):
        if not (self.eps_feas > 0 and self.eps_zero_rel > 0 and self.eps_zero_floor > 0):
            raise ValueError("tolerances must be strictly positive")

    def eps_zero(self, K: float) -> float:
        return max(self.eps_zero_rel * K, self.eps_zero_floor)

    @classmethod
    def from_env(cls) -> "Tolerances":
        raw = os.environ.get(TOL_ENV)
        if raw is None or not raw.strip():
            return cls()
        return cls(eps_feas=float(raw))


DEFAULT_TOL = Tolerances()


class PrefixSums:
    """O(1) window sums and means over the budget weights.

    ``cumulative[j]`` holds ``z_1 + ... + z_j`` (so ``cumulative[0] == 0``);
    in the 1-based sentinel convention that is the sum of all weights strictly
    before position ``j + 1``.  For float weights ``compensation[j]`` holds
    the rounding error of ``cumulative[j]``, so a window sum stays accurate
    relative to the window itself even when earlier weights are much larger.
    """

    __slots__ = ("cumulative", "compensation", "n")

    def __init__(self, z):
        z = np.asarray(z)
        cum = np.concatenate((np.zeros(1, dtype=z.dtype), np.cumsum(z)))
        if cum.dtype.kind == "f":
            comp = np.concatenate(([0.0], np.cumsum(two_sum_errors(cum[:-1], z, cum[1:]))))
        else:
            comp = np.zeros_like(cum)
        cum.setflags(write=False)
        comp.setflags(write=False)
        self.cumulative = cum
        self.compensation = comp
        self.n = len(z)

    def _check(self, i: int, j: int):
        if not (1 <= i < j <= self.n + 1):
            raise IndexOutOfRange(f"need 1 <= i < j <= {self.n + 1}, got i={i}, j={j}")

    def sum(self, i: int, j: int):
        """Sum of ``z_i .. z_{j-1}`` (1-based, half-open)."""
        self._check(i, j)
        c, e = self.cumulative, self.compensation
        return (c[j - 1] - c[i - 1]) + (e[j - 1] - e[i - 1])

    def avg(self, i: int, j: int):
        return self.sum(i, j) / (j - i)


def two_sum_errors(a, b, s):
    """Exact rounding errors of ``s = fl(a + b)``, elementwise."""
    bp = s - a
    return (a - (s - bp)) + (b - bp)


@dataclass(frozen=True, eq=False)
class LpInstance:
    """A validated problem instance; build it with :func:`validate`."""

    q: np.ndarray
    z: np.ndarray
    K: float

    @property
    def n(self) -> int:
        return len(self.q)

    @cached_property
    def prefix(self) -> PrefixSums:
        return PrefixSums(self.z)

    def sum(self, i: int, j: int) -> float:
        return float(self.prefix.sum(i, j))

    def avg(self, i: int, j: int) -> float:
        return float(self.prefix.avg(i, j))

    def full_budget(self) -> float:
        """Budget needed to fill every variable to its bound."""
        return float(self.z @ self.q)

    def __eq__(self, other):
        if not isinstance(other, LpInstance):
            return NotImplemented
        return (
            self.K == other.K
            and np.array_equal(self.q, other.q)
            and np.array_equal(self.z, other.z)
        )

    __hash__ = None


def validate(raw_q, raw_z, raw_K) -> LpInstance:
    """Check raw data and return an immutable :class:`LpInstance`.

    Inputs are copied, never modified.
    """
    q = np.atleast_1d(np.asarray(raw_q, dtype=float))
    z = np.atleast_1d(np.asarray(raw_z, dtype=float))
    if q.ndim != 1 or z.ndim != 1:
        raise DimensionMismatch("q and z must be one-dimensional")
    if q.size == 0 or z.size == 0:
        raise EmptyInstance("instance needs at least one variable")
    if q.size != z.size:
        raise DimensionMismatch(f"q has {q.size} entries but z has {z.size}")
    K = float(raw_K)
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(z)) and math.isfinite(K)):
        raise NonFiniteValue("q, z and K must be finite")
    if np.any(q <= 0):
        raise NonPositiveBound(f"bound q_{int(np.argmax(q <= 0)) + 1} is not positive")
    if np.any(np.diff(q) < 0):
        i = int(np.argmax(np.diff(q) < 0)) + 1
        raise UnsortedBounds(f"bounds must be non-decreasing: q_{i} > q_{i + 1}")
    if np.any(z <= 0):
        raise NonPositiveWeight(f"weight z_{int(np.argmax(z <= 0)) + 1} is not positive")
    if K < 0:
        raise NegativeBudget(f"budget K={K} is negative")
    return LpInstance(_frozen(q), _frozen(z), K)


@dataclass(frozen=True)
class Solution:
    x: np.ndarray
    objective: float
    budget_used: float
    iterations: int = 0
    algorithm: str = ""

    @classmethod
    def from_x(cls, inst: LpInstance, x, iterations: int = 0, algorithm: str = "") -> "Solution":
        x = _frozen(x)
        return cls(x, float(x.sum()), float(inst.z @ x), iterations, algorithm)

    def violations(self, inst: LpInstance, eps_feas: float = DEFAULT_TOL.eps_feas) -> list[str]:
        """Describe every constraint the solution breaks beyond ``eps_feas``."""
        x, q = self.x, inst.q
        scale = max(float(q[-1]), 1.0)
        out = []
        if np.any(x < -eps_feas * scale):
            out.append("negative entry")
        if np.any(x > q + eps_feas * np.maximum(q, 1.0)):
            out.append("entry above its bound")
        if np.any(np.diff(x) < -eps_feas * scale):
            out.append("ordering violated")
        if self.budget_used > inst.K + eps_feas * max(inst.K, 1.0):
            out.append("budget exceeded")
        return out

    def is_feasible(self, inst: LpInstance, eps_feas: float = DEFAULT_TOL.eps_feas) -> bool:
        return not self.violations(inst, eps_feas)

