"""Maximal independent sets planted on a canonical matching, and the lower-bound arithmetic."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath
import numpy as np

from .errors import (
    BudgetExceeded,
    ChoiceOnBlockedEdge,
    DirectionsNotDistinct,
    InvalidDefects,
    InvalidParameter,
    NotMaximal,
    SinkAborted,
)
from .graph import iter_bits
from .layer_graph import LayerGraph, build_layer_graph, canonical_matching
from .mis_engine import is_maximal

ASYMPTOTIC_MIN_DISTANCE = 10


def subset_distance(a: int, b: int) -> int:
    """Graph distance between two vertices of B(n, k), given as subset bitmasks."""
    return (a ^ b).bit_count()


@dataclass(frozen=True)
class ConstructionParams:
    """Direction, planted defect pairs ``(upper, lower)`` and one bit per matching edge.

    ``endpoint_choices`` has one entry per edge of the canonical matching (in
    its edge order): 1 picks the upper end, 0 the lower end, None leaves a
    blocked edge alone. Defects are global vertex indices.
    """

    direction: int
    defects: tuple[tuple[int, int], ...] = ()
    endpoint_choices: tuple[int | None, ...] = ()
    min_distance: int = ASYMPTOTIC_MIN_DISTANCE

    @property
    def m(self) -> int:
        return len(self.defects)

    @property
    def relaxed(self) -> bool:
        """True when defects are spaced closer than the asymptotic construction allows."""
        return self.min_distance < ASYMPTOTIC_MIN_DISTANCE


def validate_defects(g: LayerGraph, direction: int, defects, min_distance: int = ASYMPTOTIC_MIN_DISTANCE) -> None:
    bit = 1 << (direction - 1)
    if len(defects) > g.k**2:
        raise InvalidDefects(f"at most d^2 = {g.k ** 2} defects")
    for up, low in defects:
        if not (g.is_upper(up) and not g.is_upper(low)):
            raise InvalidDefects("each defect is an (upper, lower) vertex pair")
        su, sl = g.subsets[up], g.subsets[low]
        if su & bit or not sl & bit:
            raise InvalidDefects(f"the upper defect must avoid {direction} and the lower one contain it")
        if subset_distance(su, sl) != 3:
            raise InvalidDefects("each defect pair must be at distance 3")
    for (u1, _), (u2, _) in itertools.combinations(defects, 2):
        if subset_distance(g.subsets[u1], g.subsets[u2]) < min_distance:
            raise InvalidDefects(f"defects closer than {min_distance}")


def blocked_edges(g: LayerGraph, direction: int, defects) -> list[bool]:
    """Per canonical-matching edge: does an endpoint touch a defect vertex?

    Raises InvalidDefects unless each defect blocks exactly ``2k - 2`` edges
    and no edge is blocked twice.
    """
    matching = canonical_matching(g, direction)
    owner = [-1] * len(matching)
    for i, (up, low) in enumerate(defects):
        touch = g.adj[up] | g.adj[low]
        hit = 0
        for j, (x, y) in enumerate(matching.edges):
            if touch >> x & 1 or touch >> y & 1:
                if owner[j] != -1:
                    raise InvalidDefects("two defects block the same matching edge")
                owner[j] = i
                hit += 1
        if hit != 2 * g.k - 2:
            raise InvalidDefects(f"defect {i} blocks {hit} edges, expected {2 * g.k - 2}")
    return [o != -1 for o in owner]


def _seed_set(g: LayerGraph, params: ConstructionParams) -> int:
    matching = canonical_matching(g, params.direction)
    blocked = blocked_edges(g, params.direction, params.defects)
    if len(params.endpoint_choices) != len(matching):
        raise InvalidParameter(f"need {len(matching)} endpoint choices")
    chosen = 0
    for (up, low), b, c in zip(matching.edges, blocked, params.endpoint_choices):
        if b:
            if c is not None:
                raise ChoiceOnBlockedEdge("a blocked edge cannot take an endpoint choice")
            continue
        if c not in (0, 1):
            raise InvalidParameter("endpoint choices are 0 (lower) or 1 (upper)")
        chosen |= 1 << (up if c else low)
    for up, low in params.defects:
        chosen |= (1 << up) | (1 << low)
    return chosen


def generate_construction(g: LayerGraph, params: ConstructionParams) -> int:
    """The maximal independent set grown from the defects and the chosen endpoints.

    Every vertex left undominated by the seed joins; the result is the
    unique completion exactly when those vertices are pairwise non-adjacent,
    which ``completion_is_unique`` reports.
    """
    validate_defects(g, params.direction, params.defects, params.min_distance)
    seed = _seed_set(g, params)
    if not g.is_independent(seed):
        raise InvalidDefects("defects clash with the chosen endpoints")
    free = g.all_mask & ~(seed | g.neighborhood(seed))
    out = seed | free
    if not g.is_independent(free):
        # ambiguous completion: fall back to vertex order
        out = seed
        for v in iter_bits(free):
            if not g.adj[v] & out:
                out |= 1 << v
    if not is_maximal(g, out):
        raise NotMaximal("construction did not produce a maximal set")
    return out


def completion_is_unique(g: LayerGraph, params: ConstructionParams) -> bool:
    seed = _seed_set(g, params)
    return g.is_independent(g.all_mask & ~(seed | g.neighborhood(seed)))


def _m0_fast(g: LayerGraph, edges, outside: int, bits: int) -> int:
    chosen = 0
    for j, (up, low) in enumerate(edges):
        chosen |= 1 << (up if bits >> j & 1 else low)
    return chosen | (outside & ~g.neighborhood(chosen))


def enumerate_construction_m0(g: LayerGraph, direction: int, sink=None, budget: int = 1 << 22) -> int:
    """Feed every defect-free construction to ``sink``; returns how many were emitted.

    Choice vector ``b`` (bit ``j`` = upper end of edge ``j``) is emitted in
    increasing order of ``b``. A sink returning False aborts with SinkAborted.
    """
    matching = canonical_matching(g, direction)
    total = 1 << len(matching)
    if total > budget:
        raise BudgetExceeded(f"{total} constructions exceed the budget {budget}")
    outside = g.all_mask & ~matching.vertices
    for bits in range(total):
        s = _m0_fast(g, matching.edges, outside, bits)
        if sink is not None and sink(s) is False:
            raise SinkAborted(f"sink stopped after {bits + 1} sets")
    return total


def enumerate_constructions(g: LayerGraph, direction: int, defects, sink=None,
                            min_distance: int = ASYMPTOTIC_MIN_DISTANCE, budget: int = 1 << 22) -> int:
    """Every construction with the given defects, one per choice on the unblocked edges."""
    blocked = blocked_edges(g, direction, defects)
    free = [j for j, b in enumerate(blocked) if not b]
    total = 1 << len(free)
    if total > budget:
        raise BudgetExceeded(f"{total} constructions exceed the budget {budget}")
    for bits in range(total):
        choices: list[int | None] = [None] * len(blocked)
        for i, j in enumerate(free):
            choices[j] = bits >> i & 1
        s = generate_construction(g, ConstructionParams(direction, tuple(defects), tuple(choices), min_distance))
        if sink is not None and sink(s) is False:
            raise SinkAborted(f"sink stopped after {bits + 1} sets")
    return total


def sample_construction_m0(g: LayerGraph, direction: int, samples: int, seed: int = 0) -> list[tuple[int, int]]:
    """``samples`` random ``(choice bits, set)`` pairs, drawn with replacement."""
    matching = canonical_matching(g, direction)
    rng = np.random.default_rng(seed)
    width = len(matching)
    draws = rng.integers(0, 2, size=(samples, width), dtype=np.uint8)
    outside = g.all_mask & ~matching.vertices
    out = []
    for row in draws:
        bits = int(sum(int(b) << j for j, b in enumerate(row)))
        out.append((bits, _m0_fast(g, matching.edges, outside, bits)))
    return out


def find_defect_placement(g: LayerGraph, direction: int, m: int, min_distance: int = ASYMPTOTIC_MIN_DISTANCE) -> tuple[tuple[int, int], ...] | None:
    """First-fit placement of ``m`` defect pairs in vertex order, or None if none fits."""
    bit = 1 << (direction - 1)
    placed: list[tuple[int, int]] = []
    used_edges: set[int] = set()
    matching = canonical_matching(g, direction)
    for up in range(g.n_lower, g.num_vertices):
        if len(placed) == m:
            break
        su = g.subsets[up]
        if su & bit or any(subset_distance(su, g.subsets[p]) < min_distance for p, _ in placed):
            continue
        a, b = [1 << i for i in iter_bits(su)][:2]
        low = g.index[(su | bit) & ~a & ~b]
        touch = g.adj[up] | g.adj[low]
        mine = {j for j, (x, y) in enumerate(matching.edges) if (touch >> x | touch >> y) & 1}
        if mine & used_edges or any(g.adj[low] >> p & 1 for p, _ in placed):
            continue
        placed.append((up, low))
        used_edges |= mine
    return tuple(placed) if len(placed) == m else None


# --------------------------------------------------------------------------
# arithmetic


@dataclass(frozen=True)
class LowerBoundValue:
    d: int
    m_max: int
    y: Fraction
    exact_terms: tuple[Fraction, ...]
    log2_value: mpmath.mpf
    taylor_remainder_bound: mpmath.mpf
    precision_bits: int

    def to_json(self) -> dict:
        digits = max(15, int(self.precision_bits * 0.30103))
        return {
            "schema": "v1",
            "d": self.d,
            "m_max": self.m_max,
            "y": f"{self.y.numerator}/{self.y.denominator}",
            "log2_sum": mpmath.nstr(self.log2_value, digits),
            "taylor_remainder_bound": mpmath.nstr(self.taylor_remainder_bound, digits),
        }


def defect_rate(d: int) -> Fraction:
    """``(d-1)^2 / 2^(2d-1) * C(2d-2, d-1)``."""
    return Fraction((d - 1) ** 2 * comb(2 * d - 2, d - 1), 2 ** (2 * d - 1))


def lower_bound_value(d: int, m_max: int | None = None, precision_bits: int = 128) -> LowerBoundValue:
    """``sum_m y^m / m! * 2^C(2d-2, d-1)`` for ``m <= m_max`` with the Taylor tail bound."""
    if d < 2:
        raise InvalidParameter("d must be >= 2")
    m_max = d * d if m_max is None else m_max
    if not (0 <= m_max <= d * d):
        raise InvalidParameter("m_max must lie in [0, d^2]")
    y = defect_rate(d)
    base = 2 ** comb(2 * d - 2, d - 1)
    terms = [base * y**m / factorial(m) for m in range(m_max + 1)]
    total = sum(terms, Fraction(0))
    with mpmath.workprec(precision_bits):
        log2_value = mpmath.log(mpmath.mpf(total.numerator), 2) - mpmath.log(mpmath.mpf(total.denominator), 2)
        yf = mpmath.mpf(y.numerator) / y.denominator
        remainder = mpmath.exp(yf) * yf ** (m_max + 1) / mpmath.factorial(m_max + 1)
    return LowerBoundValue(d, m_max, y, tuple(terms), log2_value, remainder, precision_bits)


# --------------------------------------------------------------------------
# six-cycle overlap audit


def c6_blocks(g: LayerGraph, k1: int, k2: int, k3: int):
    """Yield ``(v, U_v)`` as (subset, six global indices in the listed order)."""
    ks = (k1, k2, k3)
    if len(set(ks)) != 3:
        raise DirectionsNotDistinct("k1, k2, k3 must be distinct")
    if not all(1 <= k <= g.n for k in ks):
        raise InvalidParameter("directions must lie in [1, n]")
    rest = [i for i in range(g.n) if i + 1 not in ks]
    b1, b2, b3 = (1 << (k - 1) for k in ks)
    for combo in itertools.combinations(rest, g.k - 2):
        v = sum(1 << i for i in combo)
        block = [v | b1, v | b2, v | b3, v | b1 | b2, v | b1 | b3, v | b2 | b3]
        yield v, tuple(g.index[s] for s in block)


def c6_pattern_audit(g: LayerGraph, independent: int, k1: int, k2: int, k3: int) -> tuple[int, int]:
    """Count occupied blocks and those whose intersection with I is not one of the three patterns."""
    if not is_maximal(g, independent):
        raise NotMaximal("audit needs a maximal independent set")
    occupied = violations = 0
    for _, (x1, x2, x3, x12, x13, x23) in c6_blocks(g, k1, k2, k3):
        # edges of the first two directions inside the block
        edges = ((x12, x2), (x13, x3), (x12, x1), (x23, x3))
        if not all(independent >> a & 1 or independent >> b & 1 for a, b in edges):
            continue
        occupied += 1
        here = sum(1 << v for v in (x1, x2, x3, x12, x13, x23) if independent >> v & 1)
        patterns = (
            (1 << x1) | (1 << x2) | (1 << x3),
            (1 << x12) | (1 << x23) | (1 << x13),
            (1 << x12) | (1 << x3),
        )
        if here not in patterns:
            violations += 1
    return occupied, violations


# --------------------------------------------------------------------------
# small-k regime


@dataclass(frozen=True)
class SmallKEstimate:
    n: int
    k: int
    per_vertex_bad: Fraction
    bad_prob_bound: Fraction
    empirical_fail_rate: float
    samples: int
    degenerate: bool


def small_k_estimate(n: int, k: int, samples: int = 10_000, seed: int = 0) -> SmallKEstimate:
    """Union bound on ``I_X`` failing to be maximal, next to a seeded Monte-Carlo rate.

    ``X`` takes each lower vertex with probability 1/2 and
    ``I_X = X + (upper layer minus N(X))``.
    """
    if not (1 <= k <= n):
        raise InvalidParameter("need 1 <= k <= n")
    per_vertex = Fraction(1, 2) * (1 - Fraction(1, 2 ** (k - 1))) ** (n - k + 1)
    bound = comb(n, k - 1) * per_vertex
    g = build_layer_graph(n, k)
    n_low = g.n_lower
    # upper neighbors of each lower vertex, as upper-layer offsets
    up_of_low = np.array([[u - n_low for u in iter_bits(g.adj[v])] for v in range(n_low)], dtype=np.int64)
    low_of_up = np.array([list(iter_bits(g.adj[u])) for u in range(n_low, g.num_vertices)], dtype=np.int64)
    rng = np.random.default_rng(seed)
    fails = 0
    for start in range(0, samples, 4096):
        rows = min(4096, samples - start)
        x = rng.random((rows, n_low)) < 0.5
        covered = x[:, low_of_up].any(axis=2)  # upper vertex lies in N(X)
        bad = ~x & covered[:, up_of_low].all(axis=2)
        fails += int(bad.any(axis=1).sum())
    return SmallKEstimate(n, k, per_vertex, bound, fails / samples if samples else 0.0, samples, degenerate=k == 1)
