"""Hot loops for the solvers, in a compiled flavour and a numpy/Python flavour.

All kernels take 0-based numpy arrays but reason in 1-based positions
internally, with 0 and n+1 acting as the sentinels of the full set.  ``cum``
is the prefix-sum array ``[0, z1, z1+z2, ...]`` and ``comp`` its rounding
errors, so that the weight sum over positions ``i..j-1`` is
``(cum[j-1] - cum[i-1]) + (comp[j-1] - comp[i-1])``.

The two flavours must agree; ``tests/test_kernels.py`` checks them against
each other.
"""

import numpy as np

from ._jit import JIT_ENABLED, njit

# ---------------------------------------------------------------------------
# Greedy (quadratic) solver

_BLOCK = 256


@njit
def greedy_jit(q, cum, comp, K, eps_zero):
    n = q.shape[0]
    x = np.zeros(n)
    y = np.empty(n)
    for i in range(1, n + 1):
        y[i - 1] = ((cum[n] - cum[i - 1]) + (comp[n] - comp[i - 1])) / (n + 1 - i)
    # copy of y with +inf at full positions, plus per-block minima so the
    # argmin costs O(sqrt n) instead of a full scan
    ym = y.copy()
    bs = _BLOCK
    nb = (n + bs - 1) // bs
    bmin = np.empty(nb)
    for blk in range(nb):
        bmin[blk] = ym[blk * bs : min(n, (blk + 1) * bs)].min()
    in_s = np.zeros(n + 2, dtype=np.bool_)
    in_s[0] = True
    in_s[n + 1] = True

    t_star = np.empty(n, dtype=np.int64)
    t_left = np.empty(n, dtype=np.int64)
    t_right = np.empty(n, dtype=np.int64)
    t_d = np.empty(n)
    t_bhat = np.empty(n)

    bhat = K
    k = 0
    while bhat > eps_zero and k < n:
        best_y = bmin.min()
        blk = 0
        while bmin[blk] != best_y:
            blk += 1
        best = blk * bs
        while ym[best] != best_y:
            best += 1
        s = best + 1
        left = s - 1
        while not in_s[left]:
            left -= 1
        right = s + 1
        while not in_s[right]:
            right += 1

        width = right - s
        ys = y[s - 1]
        room = q[s - 1] - x[s - 1]
        if room < 0.0:
            room = 0.0
        d = bhat / (width * ys)
        if room < d:
            d = room
        bhat -= d * width * ys
        for p in range(s - 1, right - 1):
            x[p] += d
        top = cum[s - 1]
        top_c = comp[s - 1]
        for i in range(left + 1, s):
            v = ((top - cum[i - 1]) + (top_c - comp[i - 1])) / (s - i)
            y[i - 1] = v
            ym[i - 1] = v
        in_s[s] = True
        ym[s - 1] = np.inf
        lo = left // bs if left > 0 else 0
        for blk in range(lo, (s - 1) // bs + 1):
            bmin[blk] = ym[blk * bs : min(n, (blk + 1) * bs)].min()

        t_star[k] = s
        t_left[k] = left
        t_right[k] = right
        t_d[k] = d
        t_bhat[k] = bhat
        k += 1
    return x, t_star[:k], t_left[:k], t_right[:k], t_d[:k], t_bhat[:k]


def greedy_numpy(q, cum, comp, K, eps_zero):
    n = q.shape[0]
    x = np.zeros(n)
    pos = np.arange(1, n + 1)
    y = ((cum[n] - cum[:n]) + (comp[n] - comp[:n])) / (n + 1 - pos)
    ym = y.copy()
    in_s = np.zeros(n + 2, dtype=bool)
    in_s[0] = in_s[n + 1] = True

    rows = []
    bhat = K
    while bhat > eps_zero and len(rows) < n:
        s = int(np.argmin(ym)) + 1
        left = s - 1 - int(np.argmax(in_s[s - 1 :: -1]))
        right = s + 1 + int(np.argmax(in_s[s + 1 :]))

        width = right - s
        ys = y[s - 1]
        room = max(q[s - 1] - x[s - 1], 0.0)
        d = min(bhat / (width * ys), room)
        bhat -= d * width * ys
        x[s - 1 : right - 1] += d
        if s - left > 1:
            i = pos[left : s - 1]
            y[left : s - 1] = ((cum[s - 1] - cum[i - 1]) + (comp[s - 1] - comp[i - 1])) / (s - i)
            ym[left : s - 1] = y[left : s - 1]
        in_s[s] = True
        ym[s - 1] = np.inf
        rows.append((s, left, right, d, bhat))

    if rows:
        s, left, right, d, b = zip(*rows)
    else:
        s = left = right = d = b = ()
    return (
        x,
        np.array(s, dtype=np.int64),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(d, dtype=float),
        np.array(b, dtype=float),
    )


# ---------------------------------------------------------------------------
# Blockers


@njit
def _window_jit(cum, comp, i, j):
    return (cum[j - 1] - cum[i - 1]) + (comp[j - 1] - comp[i - 1])


@njit
def blockers_jit(z, cum, comp, use_prefix):
    n = z.shape[0]
    b = np.empty(n, dtype=np.int64)
    y = np.empty(n)
    b[n - 1] = n + 1
    y[n - 1] = _window_jit(cum, comp, n, n + 1) if use_prefix else z[n - 1]
    merges = 0
    for i in range(n - 1, 0, -1):
        bi = i + 1
        if use_prefix:
            while bi != n + 1:
                bb = b[bi - 1]
                lhs = _window_jit(cum, comp, i, bi) / (bi - i)
                rhs = _window_jit(cum, comp, bi, bb) / (bb - bi)
                if lhs > rhs:
                    break
                bi = bb
                merges += 1
            y[i - 1] = _window_jit(cum, comp, i, bi) / (bi - i)
        else:
            yi = z[i - 1]
            while bi != n + 1 and yi <= y[bi - 1]:
                bb = b[bi - 1]
                yi = ((bi - i) * yi + (bb - bi) * y[bi - 1]) / (bb - i)
                bi = bb
                merges += 1
            y[i - 1] = yi
        b[i - 1] = bi
    return b, y, merges


def blockers_python(z, cum, comp, use_prefix):
    n = len(z)
    zl = z.tolist()
    cl = cum.tolist()
    el = comp.tolist()

    def window(i, j):
        return (cl[j - 1] - cl[i - 1]) + (el[j - 1] - el[i - 1])

    b = [0] * (n + 2)
    y = [0.0] * (n + 2)
    b[n] = n + 1
    y[n] = window(n, n + 1) if use_prefix else zl[n - 1]
    merges = 0
    for i in range(n - 1, 0, -1):
        bi = i + 1
        if use_prefix:
            while bi != n + 1:
                bb = b[bi]
                if window(i, bi) / (bi - i) > window(bi, bb) / (bb - bi):
                    break
                bi = bb
                merges += 1
            y[i] = window(i, bi) / (bi - i)
        else:
            yi = zl[i - 1]
            while bi != n + 1 and yi <= y[bi]:
                bb = b[bi]
                yi = ((bi - i) * yi + (bb - bi) * y[bi]) / (bb - i)
                bi = bb
                merges += 1
            y[i] = yi
        b[i] = bi
    return (
        np.array(b[1 : n + 1], dtype=np.int64),
        np.array(y[1 : n + 1], dtype=float),
        merges,
    )


# ---------------------------------------------------------------------------
# Fenwick tree over a difference array (1-based tree, tree[0] unused)


@njit
def fenwick_add(tree, i, d):
    n = tree.shape[0] - 1
    while i <= n:
        tree[i] += d
        i += i & (-i)


@njit
def fenwick_prefix(tree, i):
    total = tree[0] * 0
    while i > 0:
        total += tree[i]
        i -= i & (-i)
    return total


def _fenwick_add_list(tree, i, d):
    n = len(tree) - 1
    while i <= n:
        tree[i] += d
        i += i & (-i)


def _fenwick_prefix_list(tree, i):
    total = tree[0] * 0
    while i > 0:
        total += tree[i]
        i -= i & (-i)
    return total


# ---------------------------------------------------------------------------
# Fast solver main loop


@njit
def fast_jit(q, b, y, order, K, eps_zero):
    n = q.shape[0]
    tree = np.zeros(n + 1)
    bhat = K
    processed = 0
    for t in range(n):
        if bhat <= eps_zero:
            break
        s = order[t] + 1
        bs = b[s - 1]
        width = bs - s
        ys = y[s - 1]
        room = q[s - 1] - fenwick_prefix(tree, s)
        if room < 0.0:
            room = 0.0
        d = bhat / (width * ys)
        if room < d:
            d = room
        fenwick_add(tree, s, d)
        if bs <= n:
            fenwick_add(tree, bs, -d)
        bhat -= d * width * ys
        processed += 1
    x = np.empty(n)
    for i in range(1, n + 1):
        x[i - 1] = fenwick_prefix(tree, i)
    return x, processed


def fast_python(q, b, y, order, K, eps_zero):
    n = len(q)
    ql = q.tolist()
    bl = b.tolist()
    yl = y.tolist()
    tree = [0.0] * (n + 1)
    bhat = K
    processed = 0
    for p in order.tolist():
        if bhat <= eps_zero:
            break
        s = p + 1
        bs = bl[p]
        width = bs - s
        ys = yl[p]
        room = max(ql[p] - _fenwick_prefix_list(tree, s), 0.0)
        d = min(bhat / (width * ys), room)
        _fenwick_add_list(tree, s, d)
        if bs <= n:
            _fenwick_add_list(tree, bs, -d)
        bhat -= d * width * ys
        processed += 1
    x = np.array([_fenwick_prefix_list(tree, i) for i in range(1, n + 1)], dtype=float)
    return x, processed


KERNELS = {
    "numba": {"greedy": greedy_jit, "blockers": blockers_jit, "fast": fast_jit},
    "numpy": {"greedy": greedy_numpy, "blockers": blockers_python, "fast": fast_python},
}


def kernels(backend=None):
    """Return the kernel table for ``backend`` (default: per the env flag)."""
    if backend is None:
        backend = "numba" if JIT_ENABLED else "numpy"
    if backend not in KERNELS:
        raise ValueError(f"unknown backend {backend!r}; choose from {sorted(KERNELS)}")
    return KERNELS[backend]
