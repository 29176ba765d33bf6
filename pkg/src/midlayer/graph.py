"""A small undirected graph with Python-int bitset adjacency.

Vertex sets everywhere in the package are plain ``int`` bitmasks over
vertex indices: bit ``i`` set means vertex ``i`` is a member.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit; ``mask`` must be nonzero."""
    return (mask & -mask).bit_length() - 1


class Graph:
    """Simple undirected graph on vertices ``0..num_vertices-1``."""

    __slots__ = ("adj", "num_vertices", "all_mask")

    def __init__(self, adj: Iterable[int]):
        self.adj = tuple(adj)
        self.num_vertices = len(self.adj)
        self.all_mask = (1 << self.num_vertices) - 1
        for v, nb in enumerate(self.adj):
            if nb >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            if nb >> self.num_vertices:
                raise ValueError(f"vertex {v} has a neighbor out of range")

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * num_vertices
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(adj)

    def __len__(self) -> int:
        return self.num_vertices

    def neighbors(self, v: int) -> int:
        return self.adj[v]

    def neighborhood(self, mask: int) -> int:
        """Union of the neighborhoods of the vertices in ``mask``."""
        out = 0
        adj = self.adj
        for v in iter_bits(mask):
            out |= adj[v]
        return out

    def closed_neighborhood(self, mask: int) -> int:
        return self.neighborhood(mask) | mask

    def degree(self, v: int, within: int | None = None) -> int:
        nb = self.adj[v]
        return (nb if within is None else nb & within).bit_count()

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(i, j)`` with ``i < j``, sorted."""
        out = []
        for u, nb in enumerate(self.adj):
            for v in iter_bits(nb >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def num_edges(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def is_independent(self, mask: int) -> bool:
        adj = self.adj
        return all(not (adj[v] & mask) for v in iter_bits(mask))

    def edges_between(self, a: int, b: int) -> int:
        """Number of edges with one end in ``a`` and the other in ``b``.

        Edges inside ``a & b`` are counted twice, which never happens for
        the disjoint sides used in this package.
        """
        adj = self.adj
        return sum((adj[v] & b).bit_count() for v in iter_bits(a))

    def ball(self, v: int, radius: int) -> int:
        """Vertices at distance at most ``radius`` from ``v``."""
        seen = frontier = 1 << v
        for _ in range(radius):
            frontier = self.neighborhood(frontier) & ~seen
            if not frontier:
                break
            seen |= frontier
        return seen

    def distance(self, u: int, v: int) -> float:
        """BFS distance; ``math.inf`` when disconnected."""
        if u == v:
            return 0
        seen = frontier = 1 << u
        dist = 0
        while frontier:
            dist += 1
            frontier = self.neighborhood(frontier) & ~seen
            if frontier >> v & 1:
                return dist
            seen |= frontier
        return float("inf")

    def is_triangle_free(self) -> bool:
        adj = self.adj
        for u, v in self.edges():
            if adj[u] & adj[v]:
                return False
        return True

    def is_perfect_matching(self) -> bool:
        """True when every vertex has degree exactly one."""
        return all(nb.bit_count() == 1 for nb in self.adj)

    def induced(self, mask: int) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``mask`` plus the new-to-old index map."""
        old = list(iter_bits(mask))
        new_of = {v: i for i, v in enumerate(old)}
        adj = []
        for v in old:
            adj.append(mask_of(new_of[u] for u in iter_bits(self.adj[v] & mask)))
        return Graph(adj), old

    def __repr__(self) -> str:
        return f"Graph(num_vertices={self.num_vertices}, num_edges={self.num_edges})"
