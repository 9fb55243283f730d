"""Integer-lattice kernels for the two hot loops.

Everything here works on int64 arrays whose entries are numerators over one
shared denominator ``L`` chosen by :mod:`fuzzdyn.lattice`, so results are
exact. Each kernel has a numba version and a pure-numpy version; the
environment variable ``FUZZDYN_NUMBA=0`` selects numpy.

Conventions shared by the kernels:

* ``xs``/``ys``: lattice coordinates (or element indices) of the support
  points of the two fuzzy sets; ``lw``/``lv``: for each point, how many cuts
  contain it (``1..n``); ``a``/``b``: scaled jump levels, last entry ``L``.
* ``space``: 0 interval, 1 circle, 2 finite (``table`` holds scaled
  distances). ``mapk``: 0 tent, 1 doubling, 2 rotation (shift ``param``),
  3 finite table (``targets``). ``metric``: 0 level-wise, 1 Skorokhod,
  2 sendograph.
"""

from __future__ import annotations

import os
from itertools import combinations

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

METRIC_CODES = {"infty": 0, "skorokhod": 1, "sendo": 2}
SPACE_CODES = {"interval": 0, "circle": 1, "finite": 2}
MAP_CODES = {"tent": 0, "doubling": 1, "rotation": 2, "finite": 3}


def _numba_requested() -> bool:
    flag = os.environ.get("FUZZDYN_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


USE_NUMBA = numba is not None and _numba_requested()
BACKEND = "numba" if USE_NUMBA else "numpy"

if numba is not None:
    njit = numba.njit(cache=True, nogil=True)
else:  # pragma: no cover
    def njit(fn):
        return fn


# -- numba kernels ---------------------------------------------------------------


@njit
def _step_nb(xs, mapk, param, L, targets):
    out = np.empty_like(xs)
    for k in range(xs.shape[0]):
        x = xs[k]
        if mapk == 0:
            y = 2 * x
            if y > L:
                y = 2 * L - y
        elif mapk == 1:
            y = (2 * x) % L
        elif mapk == 2:
            y = (x + param) % L
        else:
            y = targets[x]
        out[k] = y
    return out


@njit
def _dist_nb(xs, ys, space, L, table):
    sw, sv = xs.shape[0], ys.shape[0]
    d = np.empty((sw, sv), dtype=np.int64)
    for p in range(sw):
        for q in range(sv):
            if space == 2:
                d[p, q] = table[xs[p], ys[q]]
            else:
                g = abs(xs[p] - ys[q])
                if space == 1 and L - g < g:
                    g = L - g
                d[p, q] = g
    return d


@njit
def _directed_nb(d, lw, nw, lv, nv):
    # out[i, j] = max over points with lw > i of min over points with lv > j
    sw, sv = d.shape
    big = np.iinfo(np.int64).max
    m = np.full((sw, nv), big, dtype=np.int64)
    for p in range(sw):
        for q in range(sv):
            j = lv[q] - 1
            if d[p, q] < m[p, j]:
                m[p, j] = d[p, q]
        for j in range(nv - 2, -1, -1):
            if m[p, j + 1] < m[p, j]:
                m[p, j] = m[p, j + 1]
    out = np.zeros((nw, nv), dtype=np.int64)
    for p in range(sw):
        i = lw[p] - 1
        for j in range(nv):
            if m[p, j] > out[i, j]:
                out[i, j] = m[p, j]
    for i in range(nw - 2, -1, -1):
        for j in range(nv):
            if out[i + 1, j] > out[i, j]:
                out[i, j] = out[i + 1, j]
    return out


@njit
def _hausdorff_nb(d, lw, nw, lv, nv):
    fw = _directed_nb(d, lw, nw, lv, nv)
    bv = _directed_nb(d.T.copy(), lv, nv, lw, nw)
    for i in range(nw):
        for j in range(nv):
            if bv[j, i] > fw[i, j]:
                fw[i, j] = bv[j, i]
    return fw


@njit
def _infty_nb(h, a, b):
    i = 0
    j = 0
    best = h[0, 0]
    n, m = a.shape[0], b.shape[0]
    while not (i == n - 1 and j == m - 1):
        if a[i] == b[j]:
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
        if h[i, j] > best:
            best = h[i, j]
    return best


@njit
def _skorokhod_nb(h, a, b):
    n, m = a.shape[0], b.shape[0]
    big = np.iinfo(np.int64).max
    best = np.full((n, m), big, dtype=np.int64)
    best[0, 0] = h[0, 0]
    for i in range(n):
        lo = a[i - 1] if i > 0 else 0
        for j in range(m):
            cur = best[i, j]
            if cur == big:
                continue
            if j + 1 < m:
                bj = b[j]
                jc = lo - bj if bj < lo else (bj - a[i] if bj > a[i] else 0)
                val = max(cur, jc, h[i, j + 1])
                if val < best[i, j + 1]:
                    best[i, j + 1] = val
            if i + 1 < n:
                val = max(cur, h[i + 1, j])
                if val < best[i + 1, j]:
                    best[i + 1, j] = val
            if i + 1 < n and j + 1 < m:
                val = max(cur, abs(b[j] - a[i]), h[i + 1, j + 1])
                if val < best[i + 1, j + 1]:
                    best[i + 1, j + 1] = val
    return best[n - 1, m - 1]


@njit
def _sendo_nb(d, hw, hv):
    sw, sv = d.shape
    worst = 0
    for p in range(sw):
        best = np.iinfo(np.int64).max
        for q in range(sv):
            gap = hw[p] - hv[q]
            c = d[p, q] if d[p, q] > gap else gap
            if c < best:
                best = c
        if best > worst:
            worst = best
    for q in range(sv):
        best = np.iinfo(np.int64).max
        for p in range(sw):
            gap = hv[q] - hw[p]
            c = d[p, q] if d[p, q] > gap else gap
            if c < best:
                best = c
        if best > worst:
            worst = best
    return worst


@njit
def _metric_nb(xs, lw, a, ys, lv, b, space, L, table, metric):
    d = _dist_nb(xs, ys, space, L, table)
    if metric == 2:
        return _sendo_nb(d, a[lw - 1], b[lv - 1])
    h = _hausdorff_nb(d, lw, a.shape[0], lv, b.shape[0])
    if metric == 1:
        return _skorokhod_nb(h, a, b)
    return _infty_nb(h, a, b)


@njit
def _orbit_nb(xs, lw, a, ys, lv, b, space, mapk, param, targets, table, L, metric, steps):
    out = np.empty(steps, dtype=np.int64)
    cur = xs.copy()
    for n in range(steps):
        cur = _step_nb(cur, mapk, param, L, targets)
        out[n] = _metric_nb(cur, lw, a, ys, lv, b, space, L, table, metric)
    return out


@njit
def _oracle_nb(h, a, b, grid):
    n, m = a.shape[0], b.shape[0]
    k = m - 1
    g = grid.shape[0]
    big = np.iinfo(np.int64).max
    if k == 0:
        best = 0
        for i in range(n):
            if h[i, 0] > best:
                best = h[i, 0]
        return best
    if k > g:
        return big
    idx = np.arange(k)
    c = np.empty(m, dtype=np.int64)
    c[k] = b[m - 1]
    best = big
    while True:
        warp = 0
        for j in range(k):
            c[j] = grid[idx[j]]
            dv = abs(c[j] - b[j])
            if dv > warp:
                warp = dv
        if warp < best:
            val = _infty_nb(h, a, c)
            if warp > val:
                val = warp
            if val < best:
                best = val
        # next combination in lexicographic order
        p = k - 1
        while p >= 0 and idx[p] == g - k + p:
            p -= 1
        if p < 0:
            break
        idx[p] += 1
        for q in range(p + 1, k):
            idx[q] = idx[q - 1] + 1
    return best


# -- numpy kernels ---------------------------------------------------------------


def _step_np(xs, mapk, param, L, targets):
    if mapk == 0:
        y = 2 * xs
        return np.where(y > L, 2 * L - y, y)
    if mapk == 1:
        return (2 * xs) % L
    if mapk == 2:
        return (xs + param) % L
    return targets[xs]


def _dist_np(xs, ys, space, L, table):
    """Distances for a stack of states: ``xs`` has shape (T, sw)."""
    if space == 2:
        return table[xs[:, :, None], ys[None, None, :]]
    g = np.abs(xs[:, :, None] - ys[None, None, :])
    if space == 1:
        g = np.minimum(g, L - g)
    return g


def _directed_np(d, lw, nw, lv, nv):
    # d: (T, sw, sv) -> (T, nw, nv)
    T = d.shape[0]
    big = np.iinfo(np.int64).max
    m = np.empty((T, d.shape[1], nv), dtype=np.int64)
    for j in range(nv):
        cols = lv > j
        m[:, :, j] = d[:, :, cols].min(axis=2) if cols.any() else big
    out = np.empty((T, nw, nv), dtype=np.int64)
    for i in range(nw):
        rows = lw > i
        out[:, i, :] = m[:, rows, :].max(axis=1)
    return out


def _hausdorff_np(d, lw, nw, lv, nv):
    fw = _directed_np(d, lw, nw, lv, nv)
    bw = _directed_np(np.swapaxes(d, 1, 2), lv, nv, lw, nw)
    return np.maximum(fw, np.swapaxes(bw, 1, 2))


def _piece_pairs(a, b):
    i = j = 0
    out = [(0, 0)]
    n, m = len(a), len(b)
    while not (i == n - 1 and j == m - 1):
        if a[i] == b[j]:
            i, j = i + 1, j + 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
        out.append((i, j))
    return out


def _infty_np(h, a, b):
    ii, jj = zip(*_piece_pairs(list(a), list(b)))
    return h[:, list(ii), list(jj)].max(axis=1)


def _skorokhod_np(h, a, b):
    T = h.shape[0]
    n, m = len(a), len(b)
    big = np.iinfo(np.int64).max
    best = np.full((T, n, m), big, dtype=np.int64)
    best[:, 0, 0] = h[:, 0, 0]
    for i in range(n):
        lo = a[i - 1] if i else 0
        for j in range(m):
            cur = best[:, i, j]
            if j + 1 < m:
                bj = b[j]
                jc = lo - bj if bj < lo else (bj - a[i] if bj > a[i] else 0)
                val = np.maximum(np.maximum(cur, jc), h[:, i, j + 1])
                best[:, i, j + 1] = np.minimum(best[:, i, j + 1], val)
            if i + 1 < n:
                val = np.maximum(cur, h[:, i + 1, j])
                best[:, i + 1, j] = np.minimum(best[:, i + 1, j], val)
            if i + 1 < n and j + 1 < m:
                val = np.maximum(np.maximum(cur, abs(b[j] - a[i])), h[:, i + 1, j + 1])
                best[:, i + 1, j + 1] = np.minimum(best[:, i + 1, j + 1], val)
    return best[:, n - 1, m - 1]


def _sendo_np(d, hw, hv):
    fw = np.maximum(d, (hw[:, None] - hv[None, :])[None, :, :]).min(axis=2).max(axis=1)
    bw = np.maximum(d, (hv[None, :] - hw[:, None])[None, :, :]).min(axis=1).max(axis=1)
    return np.maximum(fw, bw)


def _metric_np(states, lw, a, ys, lv, b, space, L, table, metric):
    d = _dist_np(states, ys, space, L, table)
    if metric == 2:
        return _sendo_np(d, a[lw - 1], b[lv - 1])
    h = _hausdorff_np(d, lw, len(a), lv, len(b))
    if metric == 1:
        return _skorokhod_np(h, a, b)
    return _infty_np(h, a, b)


def _orbit_np(xs, lw, a, ys, lv, b, space, mapk, param, targets, table, L, metric, steps):
    # the lattice is finite, so orbits cycle; evaluate each distinct state once
    seen: dict[bytes, int] = {}
    states = []
    order = np.empty(steps, dtype=np.int64)
    cur = xs
    for n in range(steps):
        cur = _step_np(cur, mapk, param, L, targets)
        key = cur.tobytes()
        if key in seen:
            start = seen[key]
            period = len(states) - start
            rest = np.arange(steps - n)
            order[n:] = start + rest % period
            break
        seen[key] = len(states)
        order[n] = len(states)
        states.append(cur)
    values = _metric_np(np.stack(states), lw, a, ys, lv, b, space, L, table, metric)
    return values[order]


def _oracle_np(h, a, b, grid):
    n, m = len(a), len(b)
    k = m - 1
    if k == 0:
        return int(h[:, 0].max())
    combos = np.array(list(combinations(grid.tolist(), k)), dtype=np.int64)
    if combos.size == 0:
        return int(np.iinfo(np.int64).max)
    warp = np.abs(combos - b[None, :k]).max(axis=1)
    c = np.concatenate([combos, np.full((len(combos), 1), b[-1], dtype=np.int64)], axis=1)
    clo = np.concatenate([np.zeros((len(combos), 1), dtype=np.int64), c[:, :-1]], axis=1)
    dinf = np.zeros(len(combos), dtype=np.int64)
    for i in range(n):
        alo = a[i - 1] if i else 0
        for j in range(m):
            overlap = np.maximum(alo, clo[:, j]) < np.minimum(a[i], c[:, j])
            dinf = np.where(overlap, np.maximum(dinf, h[i, j]), dinf)
    return int(np.maximum(warp, dinf).min())


# -- dispatch ---------------------------------------------------------------------


def _as_i64(*arrays):
    return tuple(np.ascontiguousarray(x, dtype=np.int64) for x in arrays)


def orbit_distances(xs, lw, a, ys, lv, b, space, mapk, param, targets, table, L, metric, steps, backend=None):
    """Scaled distance from the ``n``-th image of the first set to the second,
    for ``n = 1..steps``."""
    backend = backend or BACKEND
    xs, lw, a, ys, lv, b, targets, table = _as_i64(xs, lw, a, ys, lv, b, targets, table)
    args = (xs, lw, a, ys, lv, b, int(space), int(mapk), int(param), targets, table, int(L), int(metric), int(steps))
    if backend == "numba":
        return _orbit_nb(*args)
    return _orbit_np(*args)


def metric_value(xs, lw, a, ys, lv, b, space, L, table, metric, backend=None) -> int:
    """Scaled distance between two lattice-encoded fuzzy sets."""
    backend = backend or BACKEND
    xs, lw, a, ys, lv, b, table = _as_i64(xs, lw, a, ys, lv, b, table)
    if backend == "numba":
        return int(_metric_nb(xs, lw, a, ys, lv, b, int(space), int(L), table, int(metric)))
    return int(_metric_np(xs[None, :], lw, a, ys, lv, b, int(space), int(L), table, int(metric))[0])


def grid_warp_oracle(h, a, b, grid, backend=None) -> int:
    """Brute-force ``min max(||t||, d_infty(u, t v))`` over warps sending v's
    jump levels to strictly increasing points of ``grid``."""
    backend = backend or BACKEND
    a, b, grid = _as_i64(a, b, grid)
    h = np.ascontiguousarray(h, dtype=np.int64)
    if backend == "numba":
        return int(_oracle_nb(h, a, b, grid))
    return _oracle_np(h, a, b, grid)
