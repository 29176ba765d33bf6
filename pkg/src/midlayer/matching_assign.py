"""Induced-matching assignment for independent sets, and what is built on it.

``assign_matching(g, I)`` returns the first matching, in a fixed total order,
among the largest induced matchings ``M`` such that

* every edge of ``M`` has exactly one end in ``I``;
* no vertex of ``I`` outside ``V(M)`` has a neighbor in ``V(M)``.

The order prefers larger matchings, then (optionally) more edges in a chosen
canonical direction, then the lexicographically smaller sorted edge list,
edges written as ``(min index, max index)``.

Search space reduction used by the exact search: if ``xy`` is in such a
matching with ``x`` in ``I``, then ``x`` is the only ``I``-neighbor of ``y``
(another ``I``-neighbor would either be matched, breaking inducedness, or
unmatched, breaking the isolation rule). The private neighbors of distinct
``I``-vertices are disjoint, so the problem is to pick at most one private
neighbor per ``I``-vertex such that the picked vertices are pairwise
non-adjacent. The tests cross-check this against a definitional search over
all induced matchings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import BudgetExceeded, NotAnEdge, NotIndependent, NotMaximal
from .graph import Graph, iter_bits, mask_of
from .layer_graph import LayerGraph, canonical_matching, edge_direction, linked_components
from .mis_engine import MISStatus, classify_set
from .reports import IsoReport

DEFAULT_NODE_CAP = 10**8


@dataclass(frozen=True)
class InducedMatching:
    """Edges stored as sorted ``(min, max)`` index pairs, list sorted."""

    edges: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, edges) -> "InducedMatching":
        return cls(tuple(sorted((min(u, v), max(u, v)) for u, v in edges)))

    @property
    def vertices(self) -> int:
        return mask_of(v for e in self.edges for v in e)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def is_induced_matching(g: Graph, edges) -> tuple[bool, tuple | None]:
    """Check the matching and no-cross-edge conditions.

    Returns ``(True, None)`` or ``(False, (e, f))`` for a violating pair.
    """
    edges = [tuple(e) for e in edges]
    for u, v in edges:
        if not g.has_edge(u, v):
            raise NotAnEdge(f"({u}, {v}) is not an edge")
    for i, (a, b) in enumerate(edges):
        ends = (1 << a) | (1 << b)
        for c, d in edges[i + 1:]:
            other = (1 << c) | (1 << d)
            if ends & other or g.neighborhood(ends) & other:
                return False, ((a, b), (c, d))
    return True, None


def matching_order_key(m: InducedMatching, direction_overlap: int = 0):
    """Sort key realizing the matching order (smaller is preferred)."""
    return (-len(m), -direction_overlap, m.edges)


class _Search:
    """Exact branch and bound over private-neighbor choices."""

    def __init__(self, g: Graph, independent: int, within: int, direction_of, node_cap: int):
        self.node_cap = node_cap
        self.nodes = 0
        adj = [nb & within for nb in g.adj]
        cands = []
        for x in iter_bits(independent):
            for y in iter_bits(adj[x] & ~independent):
                if adj[y] & independent == 1 << x:
                    cands.append((min(x, y), max(x, y), x, y))
        cands.sort()
        self.cands = cands
        big = len(cands) + 1
        self.weight = [
            big + (1 if direction_of is not None and direction_of(x, y) else 0) for _, _, x, y in cands
        ]
        group_of = {}
        for i, (_, _, x, _) in enumerate(cands):
            group_of.setdefault(x, 0)
            group_of[x] |= 1 << i
        self.groups = list(group_of.values())
        self.conflict = []
        for i, (_, _, x, y) in enumerate(cands):
            mask = group_of[x]
            for j, (_, _, _, y2) in enumerate(cands):
                if adj[y] >> y2 & 1:
                    mask |= 1 << j
            self.conflict.append(mask)
        self.memo: dict[int, int] = {}

    def best(self, avail: int) -> int:
        """Maximum total weight of a conflict-free subset of ``avail``."""
        if not avail:
            return 0
        hit = self.memo.get(avail)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise BudgetExceeded(f"matching search exceeded {self.node_cap} nodes")
        group = next(gm for gm in self.groups if gm & avail)
        # skipping the whole group is always an option
        value = self.best(avail & ~group)
        for i in iter_bits(group & avail):
            rest = avail & ~self.conflict[i] & ~(1 << i)
            if self.weight[i] + self._bound(rest) <= value:
                continue
            value = max(value, self.weight[i] + self.best(rest))
        self.memo[avail] = value
        return value

    def _bound(self, avail: int) -> int:
        return sum(max(self.weight[i] for i in iter_bits(gm & avail)) for gm in self.groups if gm & avail)

    def solve(self) -> list[int]:
        """Indices of the order-first optimal choice."""
        all_c = (1 << len(self.cands)) - 1
        need = self.best(all_c)
        chosen = []
        avail = all_c
        while need:
            for i in iter_bits(avail):
                rest = avail & ~self.conflict[i] & ~((1 << (i + 1)) - 1)
                if self.weight[i] + self.best(rest) == need:
                    chosen.append(i)
                    need -= self.weight[i]
                    avail = rest
                    break
            else:  # pragma: no cover - best() guarantees a feasible choice
                raise AssertionError("no feasible continuation")
        return chosen


def assign_matching(
    g: Graph,
    independent: int,
    within: int | None = None,
    prefer_direction: int | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> InducedMatching:
    """Order-first maximum constrained induced matching of ``independent``.

    ``within`` restricts the search to the subgraph induced on that vertex
    set. ``prefer_direction`` switches to the refined order that ranks
    matchings with more edges in that canonical direction first.
    """
    within = g.all_mask if within is None else within
    if independent & ~within:
        raise ValueError("independent set must lie inside the subgraph")
    if not g.is_independent(independent):
        raise NotIndependent("input set is not independent")
    direction_of = None
    if prefer_direction is not None:
        bit = 1 << (prefer_direction - 1)
        subsets = g.subsets  # only layer graphs carry directions
        direction_of = lambda x, y: (subsets[x] ^ subsets[y]) == bit  # noqa: E731
    search = _Search(g, independent, within, direction_of, node_cap)
    chosen = search.solve()
    return InducedMatching(tuple((search.cands[i][0], search.cands[i][1]) for i in chosen))


def canonical_overlap(g: LayerGraph, m: InducedMatching, direction: int) -> int:
    bit = 1 << (direction - 1)
    return sum(1 for u, v in m.edges if g.subsets[u] ^ g.subsets[v] == bit)


@lru_cache(maxsize=256)
def canonical_vertices(g: LayerGraph, direction: int) -> int:
    """``V(M_k)`` as a vertex set."""
    return canonical_matching(g, direction).vertices


@dataclass(frozen=True)
class DirectionProfile:
    counts: tuple[int, ...]
    matching_size: int
    beta: Fraction


def direction_profile(g: LayerGraph, independent: int, matching: InducedMatching | None = None) -> DirectionProfile:
    m = assign_matching(g, independent) if matching is None else matching
    counts = [0] * g.n
    for u, v in m.edges:
        counts[edge_direction(g, u, v) - 1] += 1
    full = comb(g.n - 1, g.k - 1)
    return DirectionProfile(tuple(counts), len(m), 1 - Fraction(len(m), full))


def _require_maximal(g: Graph, independent: int) -> None:
    if classify_set(g, independent) is not MISStatus.MAXIMAL:
        raise NotMaximal("set is not a maximal independent set")


def is_typical_in_direction(g: LayerGraph, independent: int, direction: int) -> bool:
    """Do all 3-linked components of ``independent`` outside ``V(M_direction)`` have size <= 2?"""
    rest = independent & ~canonical_vertices(g, direction)
    return all(c.bit_count() <= 2 for c in linked_components(g, rest, 3))


def classify_typical(g: LayerGraph, independent: int) -> int | None:
    """Smallest direction in which ``independent`` is typical, or None."""
    _require_maximal(g, independent)
    for k in range(1, g.n + 1):
        if is_typical_in_direction(g, independent, k):
            return k
    return None


@dataclass(frozen=True)
class ClassificationThresholds:
    """Size thresholds for the two almost-saturated classes and the aligned class.

    Values are absolute matching sizes. ``degenerate`` flags small ``d``
    where a default multiplier leaves ``[0, 1]``.
    """

    j1_threshold: Fraction
    j2_threshold: Fraction
    u_threshold: Fraction
    degenerate: bool = False

    @classmethod
    def default(cls, d: int) -> "ClassificationThresholds":
        full = comb(2 * d - 2, d - 1)
        lg = math.log2(d) if d > 1 else 0.0
        mults = (
            1 - 2 * lg**3 / d,
            1 - 2 * lg**5 / d**1.5,
            1 - 25 * lg**5 / math.sqrt(d),
        )
        degenerate = any(not (0 <= m <= 1) for m in mults)
        j1, j2, u = (Fraction(m) * full for m in mults)
        return cls(j1, j2, u, degenerate)

    def in_j1(self, matching_size: int) -> bool:
        return matching_size > self.j1_threshold

    def in_j2(self, matching_size: int) -> bool:
        return matching_size > self.j2_threshold

    def in_u(self, overlap: int) -> bool:
        return overlap >= self.u_threshold


@dataclass(frozen=True)
class NiceTripletReport:
    count: int
    lower_bound: float
    hypothesis_met: bool


def _matched_sides(g: LayerGraph, m: InducedMatching) -> tuple[int, int]:
    vm = m.vertices
    return vm & g.upper_mask, vm & g.lower_mask


def nice_triplet_count(
    g: LayerGraph,
    independent: int,
    thresholds: ClassificationThresholds | None = None,
) -> NiceTripletReport:
    """Count triplets x-y-z with both ends matched on one side, middle unmatched.

    The middle vertex ranges over the neighbors of that matched side outside
    the matched vertices of the other side, and ``x != z``.
    """
    _require_maximal(g, independent)
    d = g.k
    m = assign_matching(g, independent)
    top, bottom = _matched_sides(g, m)
    count = 0
    for side, other in ((top, bottom), (bottom, top)):
        for v in iter_bits(g.neighborhood(side) & ~other):
            deg = (g.adj[v] & side).bit_count()
            count += deg * (deg - 1)
    lg = math.log2(d) if d > 1 else 0.0
    bound = (2 * d * (d - 1) - 24 * math.sqrt(d) * lg**5) * comb(2 * d - 2, d)
    thresholds = thresholds or ClassificationThresholds.default(d)
    return NiceTripletReport(count, bound, thresholds.in_j2(len(m)))


def matched_direction_triplet_report(g: LayerGraph, independent: int, directions) -> IsoReport:
    """Triplets leaving the matched edges of the given directions into unmatched territory.

    Counts ordered ``(x, y, z)`` with ``x`` an end of an assigned-matching
    edge in one of ``directions`` and ``y, z`` both unmatched, against
    ``d b - d b^2 / C(2d-2, d-1)`` where ``b`` is the number of such edges.
    """
    _require_maximal(g, independent)
    m = assign_matching(g, independent)
    wanted = {int(k) for k in directions}
    ends = 0
    b = 0
    for u, v in m.edges:
        if edge_direction(g, u, v) in wanted:
            ends |= (1 << u) | (1 << v)
            b += 1
    outside = g.all_mask & ~m.vertices
    lhs = 0
    for x in iter_bits(ends):
        for y in iter_bits(g.adj[x] & outside):
            lhs += (g.adj[y] & outside).bit_count()
    d = g.k
    rhs = Fraction(d * b) - Fraction(d * b * b, comb(2 * d - 2, d - 1))
    return IsoReport("matched-direction-triplets", Fraction(lhs), rhs, hypothesis_met=g.is_middle)


@dataclass(frozen=True)
class Classification:
    mis: int
    matching_size: int
    beta: Fraction
    best_k: int | None
    in_j1: bool
    in_j2: bool

    def csv_row(self) -> list[str]:
        beta = self.beta
        return [
            format(self.mis, "x"),
            str(self.matching_size),
            str(beta.numerator) if beta.denominator == 1 else f"{beta.numerator}/{beta.denominator}",
            "-" if self.best_k is None else str(self.best_k),
            "true" if self.in_j1 else "false",
            "true" if self.in_j2 else "false",
        ]


CLASSIFY_HEADER = ["mis_hex", "matching_size", "beta", "best_k", "in_J1", "in_J2"]


def classify_mis(g: LayerGraph, independent: int, thresholds: ClassificationThresholds | None = None) -> Classification:
    thresholds = thresholds or ClassificationThresholds.default(g.k)
    profile = direction_profile(g, independent)
    return Classification(
        mis=independent,
        matching_size=profile.matching_size,
        beta=profile.beta,
        best_k=classify_typical(g, independent),
        in_j1=thresholds.in_j1(profile.matching_size),
        in_j2=thresholds.in_j2(profile.matching_size),
    )
