"""Random instances for tests and benchmarks."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .model import LpInstance, validate
from .oracle import RationalInstance
from .reduction import MechanismInstance, budget_weights

Z_MODES = ("mechanism", "uniform")
Q_LOW, Q_HIGH = 0.1, 10.0


def random_q(rng: np.random.Generator, n: int) -> np.ndarray:
    """Sorted absolute-normal draws mapped affinely onto ``[0.1, 10]``."""
    a = np.sort(np.abs(rng.standard_normal(n)))
    span = a[-1] - a[0]
    if span == 0:
        # one draw (or all equal): clip instead of stretching
        return np.clip(a, Q_LOW, Q_HIGH)
    return Q_LOW + (Q_HIGH - Q_LOW) * (a - a[0]) / span


def random_lp(rng: np.random.Generator, n: int, z_mode: str = "mechanism") -> LpInstance:
    """Bench instance: ``z`` from the mechanism reduction or uniform on [0.1, 10].

    ``K`` is uniform on ``(0, sum(z*q))`` so the budget usually binds.
    """
    q = random_q(rng, n)
    if z_mode == "mechanism":
        z = budget_weights(q)
    elif z_mode == "uniform":
        z = rng.uniform(Q_LOW, Q_HIGH, n)
    else:
        raise ValueError(f"z_mode must be one of {Z_MODES}")
    K = rng.uniform(0.0, float(z @ q))
    return validate(q, z, K)


def random_mechanism(rng: np.random.Generator, n: int, shuffle: bool = True) -> MechanismInstance:
    q = random_q(rng, n)
    if shuffle:
        q = rng.permutation(q)
    C = float(rng.uniform(0.5, 2.0))
    # the cost of filling every type spans (0, C*sum(z*q)); draw B inside it
    full = C * float(budget_weights(np.sort(q)) @ np.sort(q))
    B = float(rng.uniform(0.01, 1.2)) * full
    return MechanismInstance.create(q, B, C)


def mixed_scale_lp(rng: np.random.Generator, n: int) -> LpInstance:
    """Instance with ``q`` and ``z`` spread over several orders of magnitude."""
    q = np.sort(10.0 ** rng.uniform(-3, 3, n))
    if rng.random() < 0.5:
        z = budget_weights(q)
    else:
        z = 10.0 ** rng.uniform(-3, 3, n)
    K = float(z @ q) * float(rng.uniform(0.0, 1.1))
    return validate(q, z, K)


def _fractions(rng: np.random.Generator, size: int, max_den: int, low: int, high: int):
    den = rng.integers(1, max_den + 1, size)
    num = rng.integers(low * den, high * den + 1)
    return [Fraction(int(a), int(b)) for a, b in zip(num, den)]


def random_rational(rng: np.random.Generator, n: int, max_den: int = 8) -> RationalInstance:
    """Small-denominator exact instance; ties in ``q`` and slack budgets appear often."""
    q = sorted(max(v, Fraction(1, max_den)) for v in _fractions(rng, n, max_den, 0, 5))
    if n > 1 and rng.random() < 0.3:
        k = int(rng.integers(0, n - 1))
        q[k + 1] = q[k]
    if rng.random() < 0.3:
        # weights of the mechanism reduction, with its typical cancellations
        C = Fraction(int(rng.integers(1, 4)))
        full = RationalInstance.from_mechanism(q, 1, 1)
        B = C * sum(a * b for a, b in zip(full.z, q)) * Fraction(int(rng.integers(0, 13)), 10)
        return RationalInstance.from_mechanism(q, B, C)
    z = [max(v, Fraction(1, max_den)) for v in _fractions(rng, n, max_den, 0, 4)]
    full = sum(a * b for a, b in zip(z, q))
    K = full * Fraction(int(rng.integers(0, 13)), 10)
    return RationalInstance.create(q, z, K)


def rational_to_lp(inst: RationalInstance) -> LpInstance:
    return validate([float(v) for v in inst.q], [float(v) for v in inst.z], float(inst.K))
