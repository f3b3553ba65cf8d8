"""Exact ground truth for small instances by brute-force vertex enumeration.

Deliberately shares no code with the solvers: the polytope is written out as
2n+1 explicit inequalities and every n-subset of them is solved as an exact
rational linear system.  The best feasible vertex is optimal because the
feasible region is a non-empty bounded polytope (x = 0 is always feasible).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    DimensionMismatch,
    EmptyInstance,
    NegativeBudget,
    NonPositiveBound,
    NonPositiveWeight,
    TooLarge,
    UnsortedBounds,
)

MAX_N = 12


def to_fraction(value) -> Fraction:
    """Exact conversion; floats map to the rational they represent."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class RationalInstance:
    q: tuple[Fraction, ...]
    z: tuple[Fraction, ...]
    K: Fraction

    def __post_init__(self):
        if not self.q:
            raise EmptyInstance("instance needs at least one variable")
        if len(self.q) != len(self.z):
            raise DimensionMismatch("q and z differ in length")
        if any(v <= 0 for v in self.q):
            raise NonPositiveBound("bounds must be positive")
        if any(a > b for a, b in zip(self.q, self.q[1:])):
            raise UnsortedBounds("bounds must be non-decreasing")
        if any(v <= 0 for v in self.z):
            raise NonPositiveWeight("weights must be positive")
        if self.K < 0:
            raise NegativeBudget("budget must be non-negative")

    @classmethod
    def create(cls, q, z, K) -> "RationalInstance":
        return cls(tuple(map(to_fraction, q)), tuple(map(to_fraction, z)), to_fraction(K))

    @classmethod
    def from_lp(cls, inst) -> "RationalInstance":
        return cls.create([float(v) for v in inst.q], [float(v) for v in inst.z], float(inst.K))

    @classmethod
    def from_mechanism(cls, q, B, C) -> "RationalInstance":
        """Reduce a mechanism (already sorted types) to the LP exactly."""
        q = [to_fraction(v) for v in q]
        n = len(q)
        z = [(n - i) * (1 / q[i - 1] - 1 / q[i]) + 1 / q[i - 1] for i in range(1, n)]
        z.append(1 / q[-1])
        return cls(tuple(q), tuple(z), to_fraction(B) / to_fraction(C))

    @property
    def n(self) -> int:
        return len(self.q)


@dataclass(frozen=True)
class ExactSolution:
    x: tuple[Fraction, ...]
    objective: Fraction
    budget_used: Fraction


def _constraints(inst: RationalInstance):
    """Rows ``(coeffs, rhs)`` meaning ``sum(coeffs[j] * x_j) <= rhs``.

    Rows are sparse dicts keyed by variable index.
    """
    n = inst.n
    rows = [({i: Fraction(1)}, inst.q[i]) for i in range(n)]
    rows.append(({0: Fraction(-1)}, Fraction(0)))
    for i in range(1, n):
        rows.append(({i - 1: Fraction(1), i: Fraction(-1)}, Fraction(0)))
    rows.append(({i: inst.z[i] for i in range(n)}, inst.K))
    return rows


def _integer_row(coeffs, rhs):
    """Scale a rational row to integers (same solution set)."""
    scale = math.lcm(rhs.denominator, *(c.denominator for c in coeffs.values()))
    return {j: int(c * scale) for j, c in coeffs.items()}, int(rhs * scale)


def _solve_square(rows, n):
    """Solve the integer system ``rows`` (as equalities) exactly; None if singular.

    Fraction-free Gauss-Jordan: rows stay integral and only the final
    quotients become Fractions.
    """
    a = [dict(r) for r, _ in rows]
    rhs = [v for _, v in rows]
    pivot_row = [0] * n
    used = [False] * n
    for col in range(n):
        p = next((r for r in range(n) if not used[r] and a[r].get(col)), None)
        if p is None:
            return None
        used[p] = True
        pivot_row[col] = p
        pr, pv, pb = a[p], a[p][col], rhs[p]
        for r in range(n):
            f = a[r].get(col) if r != p else None
            if not f:
                continue
            row = {j: v * pv for j, v in a[r].items()}
            for j, v in pr.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            nb = rhs[r] * pv - f * pb
            g = math.gcd(nb, *row.values())
            if g > 1:
                row = {j: v // g for j, v in row.items()}
                nb //= g
            a[r], rhs[r] = row, nb
    return tuple(Fraction(rhs[pivot_row[c]], a[pivot_row[c]][c]) for c in range(n))


def _feasible(rows, x) -> bool:
    return all(sum(c * x[j] for j, c in coeffs.items()) <= rhs for coeffs, rhs in rows)


def enumerate_candidates(inst: RationalInstance):
    """Yield every feasible vertex once, as a tuple of Fractions."""
    n = inst.n
    if n > MAX_N:
        raise TooLarge(f"oracle handles n <= {MAX_N}, got n={n}")
    rows = _constraints(inst)
    int_rows = [_integer_row(c, r) for c, r in rows]
    seen = set()
    for subset in combinations(range(len(rows)), n):
        x = _solve_square([int_rows[k] for k in subset], n)
        if x is None or x in seen:
            continue
        if _feasible(rows, x):
            seen.add(x)
            yield x


def solve_exact(inst: RationalInstance) -> ExactSolution:
    # ties: lexicographically largest x, so the reduction is order-independent
    best = max(enumerate_candidates(inst), key=lambda x: (sum(x), x))
    return ExactSolution(best, sum(best, Fraction(0)), sum((z * v for z, v in zip(inst.z, best)), Fraction(0)))
