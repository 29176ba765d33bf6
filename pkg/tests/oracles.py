"""Brute-force reference implementations used only by the tests.

Each oracle follows a definition directly and shares no code with the
package beyond the graph's adjacency rows.
"""

from __future__ import annotations

import itertools

import numpy as np


def subsets_of_size(n: int, size: int) -> list[frozenset[int]]:
    return [frozenset(c) for c in itertools.combinations(range(1, n + 1), size)]


def brute_mis_masks(adj: list[int]) -> list[int]:
    """All maximal independent sets by scanning every subset (vectorized)."""
    n = len(adj)
    indep = np.ones(1, dtype=bool)
    dom = np.zeros(1, dtype=np.int64)
    sets = np.zeros(1, dtype=np.int64)
    for v in range(n):
        hit = (sets & adj[v]) == 0
        indep = np.concatenate([indep, indep & hit])
        dom = np.concatenate([dom, dom | adj[v]])
        sets = np.concatenate([sets, sets | (1 << v)])
    full = (1 << n) - 1
    good = indep & ((sets | dom) == full)
    return sorted(int(s) for s in sets[good])


def distance_matrix(adj: list[int]) -> list[list[float]]:
    n = len(adj)
    inf = float("inf")
    dist = [[0 if i == j else (1 if adj[i] >> j & 1 else inf) for j in range(n)] for i in range(n)]
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return dist


def brute_linked(dist, members: list[int], r: int) -> bool:
    if len(members) <= 1:
        return True
    seen = {members[0]}
    todo = [members[0]]
    while todo:
        u = todo.pop()
        for w in members:
            if w not in seen and dist[u][w] <= r:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(members)


def brute_shadow(family: set[frozenset[int]]) -> set[frozenset[int]]:
    return {s - {x} for s in family for x in s}


def brute_shift(family: set[frozenset[int]], i: int) -> set[frozenset[int]]:
    out = set()
    for s in family:
        if i in s and 1 not in s and (s - {i}) | {1} not in family:
            out.add((s - {i}) | {1})
        else:
            out.add(s)
    return out


def all_constrained_matchings(adj: list[int], independent: int, within: int | None = None):
    """Every induced matching whose edges meet ``independent`` once and whose
    vertex set has no neighbor among the unmatched members of ``independent``."""
    n = len(adj)
    within = (1 << n) - 1 if within is None else within
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if adj[u] >> v & 1 and within >> u & 1 and within >> v & 1:
                if (independent >> u & 1) + (independent >> v & 1) == 1:
                    edges.append((u, v))
    out = []

    def ok_induced(chosen):
        for (a, b), (c, d) in itertools.combinations(chosen, 2):
            if len({a, b, c, d}) < 4:
                return False
            for x in (a, b):
                for y in (c, d):
                    if adj[x] >> y & 1:
                        return False
        return True

    def isolated(chosen):
        vm = 0
        for a, b in chosen:
            vm |= (1 << a) | (1 << b)
        rest = independent & ~vm
        return all(not (adj[x] & vm & within) for x in range(n) if rest >> x & 1)

    def rec(i, chosen):
        if i == len(edges):
            if isolated(chosen):
                out.append(tuple(chosen))
            return
        rec(i + 1, chosen)
        chosen.append(edges[i])
        if ok_induced(chosen):
            rec(i + 1, chosen)
        chosen.pop()

    rec(0, [])
    return out


def oracle_matching(adj, independent, subsets=None, prefer_bit=None, within=None):
    """Order-first maximum matching under (size, preferred-direction count, sorted edges)."""
    best_key, best = None, ()
    for m in all_constrained_matchings(adj, independent, within):
        pref = 0
        if prefer_bit is not None:
            pref = sum(1 for u, v in m if subsets[u] ^ subsets[v] == prefer_bit)
        key = (-len(m), -pref, tuple(sorted(m)))
        if best_key is None or key < best_key:
            best_key, best = key, tuple(sorted(m))
    return best


def compositions(n: int):
    """All compositions of ``n`` as tuples."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def random_graph_adj(n: int, p: float, rng) -> list[int]:
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return adj
