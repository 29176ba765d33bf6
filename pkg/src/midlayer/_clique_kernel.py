"""Compiled Bron-Kerbosch with Tomita pivoting, run on the complement graph.

Maximal cliques of the complement are exactly the maximal independent sets
of the original graph. This module is the cross-check oracle for the
branching engine and deliberately shares no code with it.
"""

import numpy as np
from numba import njit


def complement_words(adj, num_vertices):
    """Complement adjacency as a ``(V, W)`` uint64 array (no self-loops)."""
    words = max(1, (num_vertices + 63) // 64)
    full = (1 << num_vertices) - 1
    out = np.zeros((max(num_vertices, 1), words), dtype=np.uint64)
    for v, row in enumerate(adj):
        co = full & ~row & ~(1 << v)
        for w in range(words):
            out[v, w] = (co >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def pack(value, words):
    return np.array([(value >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(words)], dtype=np.uint64)


@njit(cache=True)
def _bits(x):
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@njit(cache=True)
def _first(x):
    i = 0
    while not (x & np.uint64(1)):
        x >>= np.uint64(1)
        i += 1
    return i


@njit(cache=True)
def _choose_pivot(co, p, x, words, nv):
    best = -1
    best_score = -1
    for w in range(words):
        cand = p[w] | x[w]
        while cand:
            b = _first(cand)
            cand &= cand - np.uint64(1)
            u = w * 64 + b
            if u >= nv:
                break
            score = 0
            for t in range(words):
                score += _bits(p[t] & co[u, t])
            if score > best_score:
                best_score = score
                best = u
    return best


@njit(cache=True)
def count_cliques(co, r0, p0, x0, node_cap, by_size):
    """Count maximal cliques of ``co`` extending ``r0`` within ``p0`` avoiding ``x0``.

    ``by_size`` receives a histogram of clique sizes. Returns
    ``(finished, nodes)``; ``finished`` is False when ``node_cap`` was hit.
    """
    nv = co.shape[0]
    words = co.shape[1]
    cap = nv + 2
    rs = np.zeros((cap, words), dtype=np.uint64)
    ps = np.zeros((cap, words), dtype=np.uint64)
    xs = np.zeros((cap, words), dtype=np.uint64)
    cs = np.zeros((cap, words), dtype=np.uint64)
    size = np.zeros(cap, dtype=np.int64)
    nodes = 1
    empty = True
    for w in range(words):
        if p0[w] or x0[w]:
            empty = False
    base = 0
    for w in range(words):
        base += _bits(r0[w])
    if empty:
        by_size[base] += 1
        return True, nodes
    for w in range(words):
        rs[0, w] = r0[w]
        ps[0, w] = p0[w]
        xs[0, w] = x0[w]
    piv = _choose_pivot(co, ps[0], xs[0], words, nv)
    for w in range(words):
        cs[0, w] = ps[0, w] & ~co[piv, w]
    size[0] = base
    top = 0
    while top >= 0:
        v = -1
        for w in range(words):
            if cs[top, w]:
                v = w * 64 + _first(cs[top, w])
                break
        if v < 0:
            top -= 1
            continue
        vw = v // 64
        vb = np.uint64(1) << np.uint64(v % 64)
        cs[top, vw] &= ~vb
        nodes += 1
        if nodes > node_cap:
            return False, nodes
        child = top + 1
        p_empty = True
        x_empty = True
        for w in range(words):
            rs[child, w] = rs[top, w]
            ps[child, w] = ps[top, w] & co[v, w]
            xs[child, w] = xs[top, w] & co[v, w]
            if ps[child, w]:
                p_empty = False
            if xs[child, w]:
                x_empty = False
        rs[child, vw] |= vb
        size[child] = size[top] + 1
        ps[top, vw] &= ~vb
        xs[top, vw] |= vb
        if p_empty:
            if x_empty:
                by_size[size[child]] += 1
            continue
        piv = _choose_pivot(co, ps[child], xs[child], words, nv)
        for w in range(words):
            cs[child, w] = ps[child, w] & ~co[piv, w]
        top = child
    return True, nodes
