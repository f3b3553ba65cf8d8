"""O(n log n) solver: precomputed blockers, one sort, Fenwick range updates.

The blocker ``b(i)`` of a position is the right end of the segment it gets
pooled into when the greedy finally picks it.  Blockers can be found right to
left by merging ``i`` with the chain ``b(i+1), b(b(i+1)), ...`` while the
running mean does not exceed the next segment's mean; each position is walked
over at most once, so this pass is linear.

Once blockers are known every segment mean is fixed, so the greedy's
``argmin (y_i, i)`` over the shrinking candidate set is simply ascending
``(y_i, i)`` order, computed by one stable sort.  Segment raises are kept in a
Fenwick tree over the difference array of ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._jit import JIT_ENABLED
from .errors import IndexOutOfRange
from .model import DEFAULT_TOL, LpInstance, Solution, Tolerances


@dataclass(frozen=True)
class BlockerTable:
    """``b`` holds 1-based blockers (n+1 means none); ``y`` the fixed segment means."""

    b: np.ndarray
    y: np.ndarray
    merges: int = 0

    def chain(self, i: int):
        """Yield ``i, b(i), b(b(i)), ...`` up to and including n+1."""
        n = len(self.b)
        while True:
            yield i
            if i > n:
                return
            i = int(self.b[i - 1])


def compute_blockers(
    inst: LpInstance, use_prefix: bool = True, backend: str | None = None
) -> BlockerTable:
    """Blockers and segment means for every position.

    By default each mean is recomputed from prefix sums, exactly as the
    greedy computes its means, so exact ties between segment means are
    broken identically by both solvers.  ``use_prefix=False`` instead keeps
    the means as running weighted averages, which needs no prefix sums; the
    two agree except where rounding splits an exact tie.
    """
    run = _kernels.kernels(backend)["blockers"]
    prefix = inst.prefix
    cum = np.asarray(prefix.cumulative, dtype=float)
    comp = np.asarray(prefix.compensation, dtype=float)
    b, y, merges = run(np.asarray(inst.z, dtype=float), cum, comp, use_prefix)
    return BlockerTable(b, y, int(merges))


def processing_order(table: BlockerTable) -> np.ndarray:
    # stable sort on y == lexicographic (y_i, i)
    return np.argsort(table.y, kind="stable")


def solve_fast(
    inst: LpInstance,
    tol: Tolerances = DEFAULT_TOL,
    backend: str | None = None,
    table: BlockerTable | None = None,
) -> Solution:
    if table is None:
        table = compute_blockers(inst, backend=backend)
    order = processing_order(table)
    run = _kernels.kernels(backend)["fast"]
    x, processed = run(inst.q, table.b, table.y, order, float(inst.K), tol.eps_zero(inst.K))
    return Solution.from_x(inst, x, iterations=int(processed), algorithm="fast")


class RangeAddArray:
    """Array supporting ``range_add`` and ``point_query`` in O(log n).

    Stores a Fenwick tree over the difference array, so a point query is a
    prefix sum.  Positions are 1-based and ranges inclusive.  Pass
    ``dtype=np.int64`` for exact integer arithmetic.
    """

    def __init__(self, n: int, dtype=float):
        if n < 1:
            raise ValueError("RangeAddArray needs n >= 1")
        self.n = n
        self.tree = np.zeros(n + 1, dtype=dtype)
        if JIT_ENABLED:
            self._add, self._prefix = _kernels.fenwick_add, _kernels.fenwick_prefix
        else:
            self._add, self._prefix = _kernels._fenwick_add_list, _kernels._fenwick_prefix_list

    def range_add(self, i: int, j: int, d) -> None:
        if not (1 <= i <= j <= self.n):
            raise IndexOutOfRange(f"need 1 <= i <= j <= {self.n}, got [{i}, {j}]")
        d = self.tree.dtype.type(d)
        self._add(self.tree, i, d)
        if j < self.n:
            self._add(self.tree, j + 1, -d)

    def point_query(self, i: int):
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"need 1 <= i <= {self.n}, got {i}")
        return self._prefix(self.tree, i)

    def to_array(self) -> np.ndarray:
        return np.array([self._prefix(self.tree, i) for i in range(1, self.n + 1)], dtype=self.tree.dtype)
