"""Brute-force reference computations used to derive expected test values.

Nothing here imports the solver kernels; everything is exact rational
arithmetic written straight from the definitions.
"""

from fractions import Fraction


def exact(values):
    return [Fraction(v) for v in values]


def prefix(z):
    cum = [Fraction(0)]
    for v in z:
        cum.append(cum[-1] + Fraction(v))
    return cum


def window_sum(z, i, j):
    """Sum of z_i .. z_{j-1}, 1-based, by direct addition."""
    return sum((Fraction(z[t - 1]) for t in range(i, j)), Fraction(0))


def window_avg(z, i, j):
    return window_sum(z, i, j) / (j - i)


def blockers(z):
    """Blocker and segment mean of every position, from the max-mean characterisation.

    The segment that position ``i`` is finally pooled into ends at the
    largest ``j`` maximising the mean of ``z_i .. z_{j-1}``.
    """
    cum = prefix(z)
    n = len(z)
    b, y = [], []
    for i in range(1, n + 1):
        best, arg = None, None
        for j in range(i + 1, n + 2):
            a = (cum[j - 1] - cum[i - 1]) / (j - i)
            if best is None or a >= best:
                best, arg = a, j
        b.append(arg)
        y.append(best)
    return b, y


def mechanism_weights(q):
    q = exact(q)
    n = len(q)
    z = [(n - i) * (1 / q[i - 1] - 1 / q[i]) + 1 / q[i - 1] for i in range(1, n)]
    return z + [1 / q[-1]]


def reward_levels(q, C, x):
    """Level owed to each sorted agent, summing the marginal costs of each step up."""
    q, x = exact(q), exact(x)
    C = Fraction(C)
    out, level, prev = [], Fraction(0), Fraction(0)
    for qi, xi in zip(q, x):
        level += C * (xi - prev) / qi
        out.append(level)
        prev = xi
    return out


def best_deviation_utility(thresholds, levels, qi, C):
    """Largest utility an agent of type ``qi`` can get by picking any quality."""
    best = Fraction(0)
    for t, v in zip(thresholds, levels):
        if t <= qi:
            best = max(best, Fraction(v) - Fraction(t) * Fraction(C) / Fraction(qi))
    return best


def proportional_2agent(q1, q2, B, C):
    """Two-agent equilibrium from the first-order conditions, exact."""
    q1, q2, B, C = map(Fraction, (q1, q2, B, C))
    total = B * q1 * q2 / (C * (q1 + q2))
    return total * total * C / (q2 * B), total * total * C / (q1 * B)
