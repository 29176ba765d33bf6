"""Exhaustive census of labeled triangle-free graphs on a fixed vertex count.

Edges are decided in lexicographic order of pairs; an edge is only added if
it closes no triangle, so every leaf is a distinct triangle-free graph.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _count_mis(adj, m, indep, dom):
    full = (1 << m) - 1
    indep[0] = 1
    dom[0] = 0
    total = 0
    if m == 0:
        return 1
    for s in range(1, 1 << m):
        low = s & -s
        v = 0
        while (1 << v) != low:
            v += 1
        rest = s ^ low
        indep[s] = indep[rest] and (adj[v] & rest) == 0
        dom[s] = dom[rest] | adj[v]
    for s in range(1 << m):
        if indep[s] and (s | dom[s]) == full:
            total += 1
    return total


@njit(cache=True)
def census(m):
    """Return (graphs, violations, equality_cases, equality_mismatches, max_count).

    A violation is ``mis^2 > 2^m``; an equality mismatch is a graph where
    ``mis^2 == 2^m`` disagrees with being a perfect matching.
    """
    npairs = m * (m - 1) // 2
    us = np.empty(max(npairs, 1), dtype=np.int64)
    vs = np.empty(max(npairs, 1), dtype=np.int64)
    p = 0
    for u in range(m):
        for v in range(u + 1, m):
            us[p] = u
            vs[p] = v
            p += 1
    adj = np.zeros(max(m, 1), dtype=np.int64)
    indep = np.zeros(1 << m, dtype=np.bool_)
    dom = np.zeros(1 << m, dtype=np.int64)
    # choice[i]: 0 = not yet tried, 1 = edge absent, 2 = edge present
    choice = np.zeros(npairs + 1, dtype=np.int8)
    graphs = 0
    violations = 0
    equalities = 0
    mismatches = 0
    max_count = 0
    bound_sq = 1 << m
    i = 0
    while i >= 0:
        if i == npairs:
            c = _count_mis(adj, m, indep, dom)
            graphs += 1
            if c > max_count:
                max_count = c
            if c * c > bound_sq:
                violations += 1
            eq = c * c == bound_sq
            pm = True
            for v in range(m):
                if adj[v] == 0 or (adj[v] & (adj[v] - 1)) != 0:
                    pm = False
            if eq:
                equalities += 1
            if eq != pm:
                mismatches += 1
            i -= 1
            continue
        u = us[i]
        v = vs[i]
        if choice[i] == 0:
            choice[i] = 1
            i += 1
        elif choice[i] == 1:
            choice[i] = 2
            if (adj[u] & adj[v]) == 0:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
                i += 1
        else:
            if (adj[u] >> v) & 1:
                adj[u] &= ~(1 << v)
                adj[v] &= ~(1 << u)
            choice[i] = 0
            i -= 1
    return graphs, violations, equalities, mismatches, max_count
