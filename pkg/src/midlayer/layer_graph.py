"""The bipartite graph B(n, k) between two consecutive layers of the Boolean lattice.

Subsets of ``[n]`` are ints: bit ``i-1`` stands for element ``i``. Global
vertex indices list the lower layer (size ``k-1``) first and then the upper
layer (size ``k``), each ascending by bitmask.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import (
    BudgetExceeded,
    DirectionOutOfRange,
    InvalidLayer,
    NotSelfComplementary,
)
from .graph import Graph, iter_bits, mask_of

MAX_GROUND_SET = 63
DEFAULT_VERTEX_BUDGET = 10**6


def subset_bits(elements) -> int:
    """``{1, 3}`` -> ``0b101``."""
    return mask_of(e - 1 for e in elements)


def subset_elements(bits: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in iter_bits(bits))


def format_subset(bits: int) -> str:
    return "{" + ",".join(map(str, subset_elements(bits))) + "}"


def layer(n: int, size: int) -> list[int]:
    """All ``size``-subsets of ``[n]`` ascending by bitmask."""
    out = [sum(1 << i for i in c) for c in combinations(range(n), size)]
    out.sort()
    return out


class LayerGraph(Graph):
    """Immutable B(n, k): upper layer of k-sets, lower layer of (k-1)-sets."""

    __slots__ = ("n", "k", "lower", "upper", "subsets", "index", "lower_mask", "upper_mask")

    def __init__(self, n: int, k: int, lower: list[int], upper: list[int], adj: list[int]):
        super().__init__(adj)
        self.n = n
        self.k = k
        self.lower = tuple(lower)
        self.upper = tuple(upper)
        self.subsets = self.lower + self.upper
        self.index = {s: i for i, s in enumerate(self.subsets)}
        self.lower_mask = (1 << len(lower)) - 1
        self.upper_mask = self.all_mask ^ self.lower_mask

    @property
    def is_middle(self) -> bool:
        """True for the self-complementary, d-regular case n = 2k - 1."""
        return self.n == 2 * self.k - 1

    @property
    def d(self) -> int:
        """Common degree in the middle-layer case (equals k)."""
        return self.k

    @property
    def n_lower(self) -> int:
        return len(self.lower)

    def is_upper(self, v: int) -> bool:
        return v >= len(self.lower)

    def vertex(self, bits: int) -> int:
        """Global index of the subset ``bits``."""
        try:
            return self.index[bits]
        except KeyError:
            raise ValueError(f"{format_subset(bits)} is not a vertex of B({self.n},{self.k})") from None

    def vset(self, subsets) -> int:
        """Vertex set from an iterable of subset bitmasks."""
        return mask_of(self.vertex(s) for s in subsets)

    def vset_of(self, *element_lists) -> int:
        """Vertex set from element tuples, e.g. ``vset_of((1, 2), (3,))``."""
        return self.vset(subset_bits(e) for e in element_lists)

    def subsets_of(self, mask: int) -> list[int]:
        return [self.subsets[i] for i in iter_bits(mask)]

    def format_set(self, mask: int) -> str:
        return "{" + ", ".join(format_subset(s) for s in self.subsets_of(mask)) + "}"

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "n": self.n,
            "k": self.k,
            "vertices": [format(s, "x") for s in self.subsets],
            "edges": [list(e) for e in self.edges()],
        }

    def __repr__(self) -> str:
        return f"LayerGraph(n={self.n}, k={self.k})"


def build_layer_graph(n: int, k: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> LayerGraph:
    if not (1 <= k <= n):
        raise InvalidLayer(f"need 1 <= k <= n, got n={n}, k={k}")
    if n > MAX_GROUND_SET:
        raise InvalidLayer(f"ground set limited to n <= {MAX_GROUND_SET}")
    size = comb(n, k) + comb(n, k - 1)
    if size > vertex_budget:
        raise BudgetExceeded(f"B({n},{k}) has {size} vertices, budget is {vertex_budget}")
    lower = layer(n, k - 1)
    upper = layer(n, k)
    index = {s: i for i, s in enumerate(lower)}
    offset = len(lower)
    adj = [0] * size
    for j, x in enumerate(upper):
        u = offset + j
        for e in iter_bits(x):
            y = index[x ^ (1 << e)]
            adj[u] |= 1 << y
            adj[y] |= 1 << u
    return LayerGraph(n, k, lower, upper, adj)


def middle_layer_graph(d: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> LayerGraph:
    """B(2d-1, d)."""
    return build_layer_graph(2 * d - 1, d, vertex_budget)


def graph_from_json(data: dict) -> LayerGraph:
    g = build_layer_graph(int(data["n"]), int(data["k"]))
    if [format(s, "x") for s in g.subsets] != list(data["vertices"]):
        raise InvalidLayer("vertex list does not match the canonical order")
    return g


def dump_graph_json(g: LayerGraph) -> str:
    return json.dumps(g.to_json(), separators=(",", ":"))


@dataclass(frozen=True)
class CanonicalMatching:
    """All edges ``(upper, lower)`` whose upper end minus the lower end is ``direction``."""

    direction: int
    edges: tuple[tuple[int, int], ...]

    @property
    def vertices(self) -> int:
        return mask_of(v for e in self.edges for v in e)

    def partner(self) -> dict[int, int]:
        out = {}
        for x, y in self.edges:
            out[x] = y
            out[y] = x
        return out

    def __len__(self) -> int:
        return len(self.edges)


def canonical_matching(g: LayerGraph, direction: int) -> CanonicalMatching:
    if not (1 <= direction <= g.n):
        raise DirectionOutOfRange(f"direction {direction} not in [1, {g.n}]")
    bit = 1 << (direction - 1)
    offset = g.n_lower
    edges = tuple(
        (offset + j, g.index[x ^ bit]) for j, x in enumerate(g.upper) if x & bit
    )
    return CanonicalMatching(direction, edges)


def edge_direction(g: LayerGraph, u: int, v: int) -> int:
    """Element distinguishing the two ends of edge ``uv``."""
    diff = g.subsets[u] ^ g.subsets[v]
    if diff.bit_count() != 1 or not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    return diff.bit_length()


def linked_components(g: Graph, mask: int, r: int) -> list[int]:
    """Split ``mask`` into classes connected through hops of length <= r.

    Components are returned ordered by their lowest vertex.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    comps = []
    remaining = mask
    while remaining:
        start = remaining & -remaining
        comp = frontier = start
        remaining ^= start
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= g.ball(v, r)
            frontier = reach & remaining
            remaining &= ~frontier
            comp |= frontier
        comps.append(comp)
    return comps


def is_linked(g: Graph, mask: int, r: int) -> bool:
    """Empty and singleton sets count as linked."""
    return len(linked_components(g, mask, r)) <= 1


def graph_distance(g: Graph, u: int, v: int) -> float:
    return g.distance(u, v)


def vertex_complement_map(g: LayerGraph) -> tuple[int, ...]:
    """Permutation sending the vertex ``s`` to ``[n] \\ s``."""
    if not g.is_middle:
        raise NotSelfComplementary(f"B({g.n},{g.k}) needs n = 2k - 1")
    full = (1 << g.n) - 1
    return tuple(g.index[full ^ s] for s in g.subsets)


def partner_closure(g: LayerGraph, direction: int, mask: int) -> int:
    """Vertices of ``V(M_k)`` that are in ``mask`` or matched to a member of it.

    Members of ``mask`` outside ``V(M_k)`` are dropped.
    """
    bit = 1 << (direction - 1)
    out = 0
    for v in iter_bits(mask):
        s = g.subsets[v]
        if g.is_upper(v):
            if s & bit:
                out |= (1 << v) | (1 << g.index[s ^ bit])
        elif not s & bit:
            out |= (1 << v) | (1 << g.index[s | bit])
    return out
