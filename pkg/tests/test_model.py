import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainlp import (
    DimensionMismatch,
    EmptyInstance,
    IndexOutOfRange,
    NegativeBudget,
    NonFiniteValue,
    NonPositiveBound,
    NonPositiveWeight,
    PrefixSums,
    Solution,
    Tolerances,
    UnsortedBounds,
    validate,
)

from oracles import window_avg, window_sum

weights = st.lists(st.floats(0.01, 100), min_size=1, max_size=30)


def test_valid_instance():
    inst = validate([1, 2], [1, 1], 1)
    assert inst.n == 2
    assert inst.K == 1.0
    np.testing.assert_array_equal(inst.q, [1.0, 2.0])


@pytest.mark.parametrize(
    "q, z, K, err",
    [
        ([2, 1], [1, 1], 1, UnsortedBounds),
        ([1], [0], 1, NonPositiveWeight),
        ([0, 1], [1, 1], 1, NonPositiveBound),
        ([-1, 1], [1, 1], 1, NonPositiveBound),
        ([1, 2], [1, -3], 1, NonPositiveWeight),
        ([1, 2], [1, 1], -0.5, NegativeBudget),
        ([], [], 1, EmptyInstance),
        ([1, 2], [1], 1, DimensionMismatch),
        ([1, np.inf], [1, 1], 1, NonFiniteValue),
        ([1, 2], [1, np.nan], 1, NonFiniteValue),
    ],
)
def test_validation_errors(q, z, K, err):
    with pytest.raises(err):
        validate(q, z, K)


def test_validation_errors_are_value_errors():
    with pytest.raises(ValueError):
        validate([2, 1], [1, 1], 1)


def test_zero_budget_accepted():
    assert validate([1], [1], 0).K == 0.0


def test_equal_bounds_allowed():
    inst = validate([1, 1, 1], [1, 2, 3], 1)
    assert list(inst.q) == [1, 1, 1]


def test_validate_does_not_mutate_inputs():
    q = np.array([1.0, 2.0])
    z = np.array([3.0, 4.0])
    inst = validate(q, z, 1)
    q[0] = 99
    assert inst.q[0] == 1.0
    with pytest.raises(ValueError):
        inst.q[0] = 5.0


def test_validate_idempotent():
    a = validate([1, 2, 2], [3, 0.5, 1], 4)
    b = validate(a.q, a.z, a.K)
    assert a == b
    assert a is not b


def test_prefix_sum_examples():
    z = [2, 0.75, 0.25]
    ps = PrefixSums(z)
    # expected values come from direct exact summation
    assert ps.sum(1, 4) == float(window_sum(z, 1, 4)) == 3.0
    assert ps.avg(2, 4) == float(window_avg(z, 2, 4)) == 0.5
    for i in range(1, 4):
        assert ps.sum(i, i + 1) == z[i - 1]


def test_cumulative_layout():
    ps = PrefixSums([2, 0.75, 0.25])
    np.testing.assert_array_equal(ps.cumulative, [0, 2, 2.75, 3.0])


def test_window_sum_survives_large_leading_weight():
    # 1e16 + 1 rounds back to 1e16, so plain prefix differences would give 0
    ps = PrefixSums([1e16, 1.0, 1.0, 1.0])
    assert ps.cumulative[4] - ps.cumulative[1] == 0
    assert ps.sum(2, 5) == 3.0
    assert ps.avg(2, 4) == 1.0


@given(st.lists(st.floats(1e-3, 1e6), min_size=2, max_size=40), st.data())
def test_window_sums_accurate(z, data):
    i = data.draw(st.integers(1, len(z)))
    j = data.draw(st.integers(i + 1, len(z) + 1))
    assert PrefixSums(z).sum(i, j) == pytest.approx(float(window_sum(z, i, j)), rel=1e-14)


@pytest.mark.parametrize("i, j", [(2, 2), (3, 2), (0, 2), (1, 5), (-1, 3)])
def test_prefix_index_errors(i, j):
    ps = PrefixSums([1, 2, 3])
    with pytest.raises(IndexOutOfRange):
        ps.sum(i, j)
    with pytest.raises(IndexOutOfRange):
        ps.avg(i, j)


def test_integer_prefix_sums_are_exact():
    ps = PrefixSums(np.array([3, 1, 4, 1, 5], dtype=np.int64))
    assert ps.sum(2, 5) == 6
    assert isinstance(ps.sum(2, 5), np.integer)


@given(weights, st.data())
def test_prefix_additivity(z, data):
    n = len(z)
    # integer weights make the identity exact
    zi = [int(v * 1000) + 1 for v in z]
    ps = PrefixSums(np.array(zi, dtype=np.int64))
    i = data.draw(st.integers(1, n + 1))
    j = data.draw(st.integers(1, n + 1))
    k = data.draw(st.integers(1, n + 1))
    i, j, k = sorted((i, j, k))
    if i < j < k:
        assert ps.sum(i, k) == ps.sum(i, j) + ps.sum(j, k)


@given(weights, st.data())
def test_avg_between_min_and_max(z, data):
    n = len(z)
    ps = PrefixSums(z)
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(i + 1, n + 1))
    window = z[i - 1 : j - 1]
    a = ps.avg(i, j)
    assert min(window) * (1 - 1e-12) <= a <= max(window) * (1 + 1e-12)


def test_cumulative_strictly_increasing():
    ps = PrefixSums([0.1, 5, 0.001])
    assert np.all(np.diff(ps.cumulative) > 0)


def test_instance_helpers():
    inst = validate([1, 2, 4], [2, 0.75, 0.25], 2)
    assert inst.sum(1, 4) == 3.0
    assert inst.avg(2, 4) == 0.5
    assert inst.full_budget() == 2 + 1.5 + 1


def test_solution_from_x_and_violations():
    inst = validate([1, 2, 4], [2, 0.75, 0.25], 2)
    sol = Solution.from_x(inst, [0, 4 / 3, 4])
    assert sol.objective == pytest.approx(16 / 3)
    assert sol.budget_used == pytest.approx(2)
    assert sol.is_feasible(inst)
    bad = Solution.from_x(inst, [1, 0.5, 5])
    assert set(bad.violations(inst)) == {"entry above its bound", "ordering violated", "budget exceeded"}
    assert Solution.from_x(inst, [-1, 0, 0]).violations(inst) == ["negative entry"]


def test_tolerances(monkeypatch):
    tol = Tolerances()
    assert tol.eps_feas == 1e-9
    assert tol.eps_zero(5.0) == pytest.approx(5e-12)
    assert tol.eps_zero(0.0) == 1e-300
    with pytest.raises(ValueError):
        Tolerances(eps_feas=0)
    monkeypatch.setenv("CHAINLP_TOL", "1e-6")
    assert Tolerances.from_env().eps_feas == 1e-6
    monkeypatch.delenv("CHAINLP_TOL")
    assert Tolerances.from_env() == Tolerances()
