"""Hot loops for batch sampling and the balance functional.

Every kernel is written once as plain Python over numpy arrays and compiled
with ``numba.njit`` when numba is importable and ``ARBOR_DISABLE_NUMBA`` is
unset (or "0").  The random numbers are always drawn outside the kernels, so
both paths return identical results for the same inputs.
"""
import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

DISABLE_ENV = "ARBOR_DISABLE_NUMBA"

USE_NUMBA = numba is not None and os.environ.get(DISABLE_ENV, "0") in ("", "0")


def _jit(func):
    if USE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


# Left-to-right leaf positions; leaves are shifted on every split, which is
# quadratic in n but n is small wherever a full history is needed.


def _yule_histories(u):
    draws, m = u.shape
    out = np.empty((draws, m), dtype=np.int64)
    for d in range(draws):
        for k in range(m):
            idx = int(u[d, k] * (k + 1))
            if idx > k:
                idx = k
            out[d, k] = idx
    return out


def _depth_histories(u):
    # depth-proportional choice; the lone root (depth 0) is always split first
    draws, m = u.shape
    out = np.empty((draws, m), dtype=np.int64)
    depth = np.empty(m + 1, dtype=np.int64)
    for d in range(draws):
        depth[0] = 0
        nleaves = 1
        total = 0
        for k in range(m):
            if total == 0:
                idx = 0
            else:
                target = u[d, k] * total
                acc = 0.0
                idx = nleaves - 1
                for j in range(nleaves):
                    acc += depth[j]
                    if target < acc:
                        idx = j
                        break
            out[d, k] = idx
            y = depth[idx] + 1
            for j in range(nleaves, idx + 1, -1):
                depth[j] = depth[j - 1]
            depth[idx] = y
            depth[idx + 1] = y
            nleaves += 1
            total += y + 1
    return out


def _beta_histories(u, b):
    # width-proportional choice (the leaf containing u), split at fraction b
    draws, m = u.shape
    out = np.empty((draws, m), dtype=np.int64)
    lo = np.empty(m + 2, dtype=np.float64)
    for d in range(draws):
        lo[0] = 0.0
        lo[1] = 1.0
        nleaves = 1
        for k in range(m):
            x = u[d, k]
            idx = nleaves - 1
            for j in range(nleaves):
                if x < lo[j + 1]:
                    idx = j
                    break
            out[d, k] = idx
            a = lo[idx]
            s = a + (lo[idx + 1] - a) * b[d, k]
            for j in range(nleaves + 1, idx + 1, -1):
                lo[j] = lo[j - 1]
            lo[idx + 1] = s
            nleaves += 1
    return out


def _sum_log_sizes(left, right, m):
    # nodes 0..m-1 are internal with children ids; ids >= m are leaves.
    # Children of an internal node always have larger ids in the Yule layout,
    # but not for Remy trees, so sizes are computed by an explicit postorder.
    size = np.zeros(m, dtype=np.int64)
    stack = np.empty(2 * m + 2, dtype=np.int64)
    state = np.zeros(m, dtype=np.int8)
    top = 0
    stack[0] = 0
    total = 0.0
    while top >= 0:
        v = stack[top]
        if state[v] == 0:
            state[v] = 1
            l = left[v]
            r = right[v]
            if l < m:
                top += 1
                stack[top] = l
            if r < m:
                top += 1
                stack[top] = r
        else:
            top -= 1
            s = 1
            if left[v] < m:
                s += size[left[v]]
            if right[v] < m:
                s += size[right[v]]
            size[v] = s
            total += math.log(s)
    return total


def _yule_neg_log_q(u):
    """-ln Q for each row of uniforms driving a Yule tree growth."""
    draws, m = u.shape
    out = np.empty(draws, dtype=np.float64)
    left = np.empty(m, dtype=np.int64)
    right = np.empty(m, dtype=np.int64)
    parent = np.empty(m + 1, dtype=np.int64)
    side = np.empty(m + 1, dtype=np.int64)
    for d in range(draws):
        if m == 0:
            out[d] = 0.0
            continue
        # leaf slots hold (parent internal node, side); the root slot is special
        nleaves = 1
        parent[0] = -1
        side[0] = 0
        for k in range(m):
            idx = int(u[d, k] * nleaves)
            if idx >= nleaves:
                idx = nleaves - 1
            p = parent[idx]
            if p >= 0:
                if side[idx] == 0:
                    left[p] = k
                else:
                    right[p] = k
            left[k] = m
            right[k] = m
            parent[idx] = k
            side[idx] = 0
            parent[nleaves] = k
            side[nleaves] = 1
            nleaves += 1
        out[d] = _sum_log_sizes_inner(left, right, m)
    return out


def _remy_neg_log_q(u, coin):
    """-ln Q for uniform plane trees grown by Remy's insertion algorithm.

    With j nodes present, a node is picked uniformly (``u``), a new internal
    node is grafted on its parent edge and a new leaf hangs on the side given
    by ``coin``.
    """
    draws, m = u.shape
    out = np.empty(draws, dtype=np.float64)
    # ids: internal nodes 0..m-1, leaves m..2m; child arrays sized for both
    total_nodes = 2 * m + 1
    child_l = np.empty(total_nodes, dtype=np.int64)
    child_r = np.empty(total_nodes, dtype=np.int64)
    par = np.empty(total_nodes, dtype=np.int64)
    nodes = np.empty(total_nodes, dtype=np.int64)
    left = np.empty(m, dtype=np.int64)
    right = np.empty(m, dtype=np.int64)
    for d in range(draws):
        if m == 0:
            out[d] = 0.0
            continue
        nodes[0] = m
        par[m] = -1
        child_l[m] = -1
        child_r[m] = -1
        count = 1
        root = m
        for k in range(m):
            pick = int(u[d, k] * count)
            if pick >= count:
                pick = count - 1
            x = nodes[pick]
            new_leaf = m + 1 + k
            p = par[x]
            if coin[d, k] < 0.5:
                child_l[k] = new_leaf
                child_r[k] = x
            else:
                child_l[k] = x
                child_r[k] = new_leaf
            par[k] = p
            par[x] = k
            par[new_leaf] = k
            child_l[new_leaf] = -1
            child_r[new_leaf] = -1
            if p < 0:
                root = k
            elif child_l[p] == x:
                child_l[p] = k
            else:
                child_r[p] = k
            nodes[count] = k
            nodes[count + 1] = new_leaf
            count += 2
        # relabel so the root is 0 and children are internal ids < m or leaf m
        order = np.empty(m, dtype=np.int64)
        newid = np.full(total_nodes, -1, dtype=np.int64)
        stack = np.empty(total_nodes, dtype=np.int64)
        top = 0
        stack[0] = root
        nid = 0
        while top >= 0:
            v = stack[top]
            top -= 1
            if v < m:
                newid[v] = nid
                order[nid] = v
                nid += 1
                top += 1
                stack[top] = child_r[v]
                top += 1
                stack[top] = child_l[v]
        for i in range(m):
            v = order[i]
            cl = child_l[v]
            cr = child_r[v]
            left[i] = newid[cl] if cl < m else m
            right[i] = newid[cr] if cr < m else m
        out[d] = _sum_log_sizes_inner(left, right, m)
    return out


sum_log_sizes = _jit(_sum_log_sizes)
_sum_log_sizes_inner = sum_log_sizes

yule_histories = _jit(_yule_histories)
depth_histories = _jit(_depth_histories)
beta_histories = _jit(_beta_histories)
yule_neg_log_q = _jit(_yule_neg_log_q)
remy_neg_log_q = _jit(_remy_neg_log_q)
