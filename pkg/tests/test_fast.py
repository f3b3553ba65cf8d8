import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainlp import (
    IndexOutOfRange,
    RangeAddArray,
    compute_blockers,
    solve_fast,
    solve_greedy,
    validate,
)
from chainlp.fast import processing_order
from chainlp.generate import mixed_scale_lp, random_lp

import invariants
import oracles

seeds = st.integers(0, 2**32 - 1)


def lp_with_weights(z, K=1.0):
    n = len(z)
    return validate(np.arange(1, n + 1), z, K)


def random_instance(seed, n_max=60):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, n_max + 1))
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return random_lp(rng, n, "mechanism")
    if kind == 1:
        return random_lp(rng, n, "uniform")
    if kind == 2:
        return mixed_scale_lp(rng, n)
    # small integers: many exact ties between window means
    q = np.sort(rng.integers(1, 6, n)).astype(float)
    z = rng.integers(1, 4, n).astype(float)
    return validate(q, z, float(rng.uniform(0, z @ q)))


@pytest.mark.parametrize(
    "z, b, y",
    [([2, 0.75, 0.25], [2, 3, 4], [2, 0.75, 0.25]), ([1, 2, 3], [4, 4, 4], [2, 2.5, 3]), ([7], [2], [7])],
)
def test_blocker_examples(z, b, y):
    ref_b, ref_y = oracles.blockers(z)
    assert ref_b == b
    assert [float(v) for v in ref_y] == y
    for use_prefix in (True, False):
        table = compute_blockers(lp_with_weights(z), use_prefix=use_prefix)
        assert table.b.tolist() == b
        np.testing.assert_allclose(table.y, y, rtol=1e-15)


@given(seeds)
def test_blockers_match_max_mean_definition(seed):
    inst = random_instance(seed, 25)
    ref_b, ref_y = oracles.blockers(inst.z)
    table = compute_blockers(inst)
    assert table.b.tolist() == ref_b
    np.testing.assert_allclose(table.y, [float(v) for v in ref_y], rtol=1e-9)


@given(seeds)
def test_blocker_variants_agree(seed):
    # continuous weights: no exact ties for rounding to split
    rng = np.random.default_rng(seed)
    inst = random_lp(rng, int(rng.integers(1, 200)), "uniform")
    a = compute_blockers(inst, use_prefix=True)
    b = compute_blockers(inst, use_prefix=False)
    assert a.b.tolist() == b.b.tolist()
    np.testing.assert_allclose(a.y, b.y, rtol=1e-12)


@given(seeds)
def test_blocker_recurrence(seed):
    inst = random_instance(seed, 80)
    table = compute_blockers(inst)
    assert invariants.blocker_recurrence(inst.z, table.b) == []
    assert table.merges <= 2 * inst.n


def test_chain():
    table = compute_blockers(lp_with_weights([3, 1, 2, 0.5]))
    assert list(table.chain(2)) == [2, *list(table.chain(int(table.b[1])))]
    assert list(table.chain(5)) == [5]


@given(seeds)
def test_greedy_structure(seed):
    inst = random_instance(seed, 60)
    inst = validate(inst.q, inst.z, inst.K * 3)  # let more positions fill
    table = compute_blockers(inst)
    _, trace = solve_greedy(inst)
    assert invariants.trace_ends_at_blockers(trace, table.b) == []
    assert invariants.execution_order(trace, table.b) == []
    assert invariants.segment_means(inst.z, trace, table.b) == []


def test_processing_order_breaks_ties_by_index():
    table = compute_blockers(lp_with_weights([1, 1, 1, 1]))
    assert processing_order(table).tolist() == [0, 1, 2, 3]


@pytest.mark.parametrize(
    "q, z, K, x",
    [([1, 2, 4], [2, 0.75, 0.25], 2, [0, 4 / 3, 4]), ([0.5, 0.5], [2, 2], 1, [0.25, 0.25])],
)
def test_fast_examples(q, z, K, x):
    sol = solve_fast(validate(q, z, K))
    np.testing.assert_allclose(sol.x, x, rtol=1e-15, atol=0)


@given(seeds)
def test_budget_tight_on_mixed_scales(seed):
    # light tail weights after heavy ones: window sums must not lose the tail
    inst = mixed_scale_lp(np.random.default_rng(seed), 150)
    for sol in (solve_fast(inst), solve_greedy(inst)[0]):
        used = float(inst.z @ sol.x)
        assert used <= inst.K * (1 + 1e-12) + 1e-300
        if not np.allclose(sol.x, inst.q, rtol=1e-12, atol=0):
            assert used == pytest.approx(inst.K, rel=1e-12)


@given(seeds)
def test_slack_budget(seed):
    inst = random_instance(seed)
    sol = solve_fast(validate(inst.q, inst.z, inst.full_budget() * 2))
    np.testing.assert_allclose(sol.x, inst.q, rtol=1e-12, atol=0)


@given(seeds)
def test_matches_greedy(seed):
    inst = random_instance(seed, 300)
    fast = solve_fast(inst)
    greedy, _ = solve_greedy(inst)
    scale = max(float(np.max(greedy.x, initial=0.0)), 1e-300)
    np.testing.assert_allclose(fast.x, greedy.x, rtol=1e-9, atol=1e-12 * scale)
    assert fast.is_feasible(inst)


@given(seeds)
def test_single_variable(seed):
    rng = np.random.default_rng(seed)
    q, z, K = rng.uniform(0.1, 10, 3)
    sol = solve_fast(validate([q], [z], K))
    assert sol.objective == pytest.approx(min(q, K / z), rel=1e-15)


def test_range_add_examples():
    arr = RangeAddArray(5)
    arr.range_add(2, 4, 1.5)
    assert arr.point_query(3) == 1.5
    assert arr.point_query(5) == 0
    arr = RangeAddArray(5)
    arr.range_add(1, 5, 1)
    arr.range_add(3, 3, 2)
    assert arr.point_query(3) == 3
    assert arr.to_array().tolist() == [1, 1, 3, 1, 1]


@pytest.mark.parametrize("i, j", [(0, 2), (3, 2), (2, 6), (6, 6)])
def test_range_add_bounds(i, j):
    arr = RangeAddArray(5)
    with pytest.raises(IndexOutOfRange):
        arr.range_add(i, j, 1)


@pytest.mark.parametrize("i", [0, 6, -1])
def test_point_query_bounds(i):
    with pytest.raises(IndexOutOfRange):
        RangeAddArray(5).point_query(i)


def test_range_add_rejects_empty():
    with pytest.raises(ValueError):
        RangeAddArray(0)


@given(st.integers(1, 40), st.lists(st.tuples(st.integers(1, 40), st.integers(1, 40), st.integers(-50, 50)), max_size=60))
def test_range_add_integer_exact(n, ops):
    arr = RangeAddArray(n, dtype=np.int64)
    naive = np.zeros(n + 1, dtype=np.int64)
    for a, b, d in ops:
        i, j = sorted((min(a, n), min(b, n)))
        arr.range_add(i, j, d)
        naive[i : j + 1] += d
    assert arr.to_array().tolist() == naive[1:].tolist()
