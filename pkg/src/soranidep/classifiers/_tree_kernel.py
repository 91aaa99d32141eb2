"""Compiled decision-tree grower used by the random forest."""

import numpy as np
from numba import njit


@njit(cache=True)
def _splitmix64(state):
    state[0] = state[0] + np.uint64(0x9E3779B97F4A7C15)
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _randbelow(state, n):
    return np.int64(_splitmix64(state) % np.uint64(n))


@njit(cache=True)
def grow_tree(Xf, y, sample, n_classes, max_depth, m_features, min_leaf, seed):
    """Grow one tree over ``sample`` (row indices into ``Xf``, duplicates allowed).

    ``max_depth < 0`` means unlimited. Features are visited in a lazily
    shuffled order; constant ones are skipped and do not count towards
    ``m_features``. Best split maximizes sum(l^2)/n_l + sum(r^2)/n_r, which
    minimizes weighted Gini; ties go to the lower feature index, then the
    lower threshold.
    """
    n = sample.shape[0]
    V = Xf.shape[1]
    cap = 2 * n + 1
    feature = np.full(cap, -1, np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    value = np.zeros((cap, n_classes), np.int64)
    depth = np.zeros(cap, np.int64)

    idx = sample.copy()
    tmp = np.empty(n, np.int64)
    vals = np.empty(n)
    perm = np.arange(V)
    lcount = np.zeros(n_classes)
    total = np.zeros(n_classes)
    state = np.zeros(1, np.uint64)
    state[0] = np.uint64(seed)

    st_node = np.empty(cap, np.int64)
    st_lo = np.empty(cap, np.int64)
    st_hi = np.empty(cap, np.int64)
    sp = 0

    n_nodes = 1
    for i in range(n):
        value[0, y[idx[i]]] += 1
    st_node[0] = 0
    st_lo[0] = 0
    st_hi[0] = n
    sp = 1

    while sp > 0:
        sp -= 1
        node = st_node[sp]
        lo = st_lo[sp]
        hi = st_hi[sp]
        size = hi - lo
        nz = 0
        for c in range(n_classes):
            if value[node, c] > 0:
                nz += 1
        if nz <= 1 or (max_depth >= 0 and depth[node] >= max_depth) or size < 2 * min_leaf:
            continue
        for c in range(n_classes):
            total[c] = value[node, c]

        best_score = -1.0
        best_f = -1
        best_thr = 0.0
        visited = 0
        j = 0
        while j < V and visited < m_features:
            r = j + _randbelow(state, V - j)
            f = perm[r]
            perm[r] = perm[j]
            perm[j] = f
            j += 1
            vmin = np.inf
            vmax = -np.inf
            for i in range(size):
                v = Xf[idx[lo + i], f]
                vals[i] = v
                if v < vmin:
                    vmin = v
                if v > vmax:
                    vmax = v
            if not vmin < vmax:
                continue
            visited += 1
            order = np.argsort(vals[:size])
            for c in range(n_classes):
                lcount[c] = 0.0
            for k in range(size - 1):
                lcount[y[idx[lo + order[k]]]] += 1.0
                nl = k + 1
                nr = size - nl
                a = vals[order[k]]
                b = vals[order[k + 1]]
                if not a < b or nl < min_leaf or nr < min_leaf:
                    continue
                sl = 0.0
                sr = 0.0
                for c in range(n_classes):
                    sl += lcount[c] * lcount[c]
                    rc = total[c] - lcount[c]
                    sr += rc * rc
                score = sl / nl + sr / nr
                if score > best_score or (score == best_score and f < best_f):
                    best_score = score
                    best_f = f
                    thr = a + (b - a) / 2.0
                    if not (a <= thr and thr < b):
                        thr = a
                    best_thr = thr
        if best_f < 0:
            continue

        # stable partition of idx[lo:hi]
        nl = 0
        nr = 0
        for i in range(size):
            s = idx[lo + i]
            if Xf[s, best_f] <= best_thr:
                idx[lo + nl] = s
                nl += 1
            else:
                tmp[nr] = s
                nr += 1
        for i in range(nr):
            idx[lo + nl + i] = tmp[i]

        feature[node] = best_f
        threshold[node] = best_thr
        li = n_nodes
        ri = n_nodes + 1
        n_nodes += 2
        left[node] = li
        right[node] = ri
        depth[li] = depth[node] + 1
        depth[ri] = depth[node] + 1
        for i in range(lo, lo + nl):
            value[li, y[idx[i]]] += 1
        for i in range(lo + nl, hi):
            value[ri, y[idx[i]]] += 1
        # push right first so the left subtree is expanded first
        st_node[sp] = ri
        st_lo[sp] = lo + nl
        st_hi[sp] = hi
        sp += 1
        st_node[sp] = li
        st_lo[sp] = lo
        st_hi[sp] = lo + nl
        sp += 1

    return (feature[:n_nodes], threshold[:n_nodes], left[:n_nodes], right[:n_nodes],
            value[:n_nodes], depth[:n_nodes])
