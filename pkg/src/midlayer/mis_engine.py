"""Enumeration, counting and auditing of maximal independent sets.

Two algorithms with no shared code are provided:

* :func:`enumerate_mis` / :func:`count_mis` branch on the lowest undecided
  vertex (include or exclude), pruning when an excluded vertex can no longer
  be dominated.
* :func:`count_mis_oracle` enumerates maximal cliques of the complement graph
  with a pivoting Bron-Kerbosch search.

Both run as compiled kernels and accept any :class:`~midlayer.graph.Graph`.
"""

from __future__ import annotations

import enum
import math
import multiprocessing
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _branch_kernel as bk
from . import _census_kernel as tk
from . import _clique_kernel as ck
from .errors import BudgetExceeded, NotIndependent, NotTriangleFree, SinkAborted
from .graph import Graph, iter_bits

UNLIMITED = 2**62
ORACLE_VERTEX_LIMIT = 10**4
_BUFFER = 1 << 16


class MISStatus(enum.Enum):
    NOT_INDEPENDENT = "NotIndependent"
    INDEPENDENT_NOT_MAXIMAL = "IndependentNotMaximal"
    MAXIMAL = "Maximal"


def classify_set(g: Graph, s: int) -> MISStatus:
    if not g.is_independent(s):
        return MISStatus.NOT_INDEPENDENT
    dominated = g.neighborhood(s) | s
    if dominated != g.all_mask:
        return MISStatus.INDEPENDENT_NOT_MAXIMAL
    return MISStatus.MAXIMAL


def is_maximal(g: Graph, s: int) -> bool:
    return classify_set(g, s) is MISStatus.MAXIMAL


@dataclass
class EnumerationStats:
    total: int = 0
    by_size: dict[int, int] = field(default_factory=dict)
    elapsed_ms: int = 0
    workers: int = 1
    nodes: int = 0

    def add_histogram(self, hist) -> None:
        for size, count in enumerate(hist):
            if count:
                self.by_size[size] = self.by_size.get(size, 0) + int(count)
                self.total += int(count)

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "total": str(self.total),
            "by_size": {str(k): str(v) for k, v in sorted(self.by_size.items())},
            "elapsed_ms": self.elapsed_ms,
            "workers": self.workers,
        }


def _pool(workers: int) -> ProcessPoolExecutor:
    # fork keeps the already-compiled kernels in the children
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        ctx = None
    return ProcessPoolExecutor(max_workers=workers, mp_context=ctx)


def _root_frame(g: Graph):
    return (0, g.all_mask, 0, 0)


def _split_frames(adj: np.ndarray, num_vertices: int, split_depth: int):
    """Depth-first ordered frontier of the search tree at ``split_depth``."""
    words = adj.shape[1]
    stack, depth = bk.new_stack(num_vertices, words, [(0, (1 << num_vertices) - 1, 0, 0)])
    cap = 2 ** (split_depth + 1) + 2
    frames = np.zeros((cap, 4, words), dtype=np.uint64)
    hist = np.zeros(num_vertices + 1, dtype=np.int64)
    status, _, nodes, _, n_frames = bk.run(
        adj, stack, depth, 1, UNLIMITED, split_depth, hist,
        np.zeros((1, words), dtype=np.uint64), 0, frames, cap,
    )
    assert status == bk.STATUS_DONE
    return frames[:n_frames], nodes


def _run_frames(adj: np.ndarray, frames: np.ndarray, node_cap: int, collect: bool):
    """Worker body: finish every frame of ``frames`` in order."""
    num_vertices, words = adj.shape
    hist = np.zeros(num_vertices + 1, dtype=np.int64)
    found: list[int] = []
    nodes = 0
    out = np.zeros((_BUFFER if collect else 1, words), dtype=np.uint64)
    for frame in frames:
        initial = [(bk.words_to_int(frame[0]), bk.words_to_int(frame[1]), bk.words_to_int(frame[2]), int(frame[3, 0]))]
        stack, depth = bk.new_stack(num_vertices, words, initial)
        sp = 1
        while sp:
            status, sp, used, n_out, _ = bk.run(
                adj, stack, depth, sp, node_cap - nodes, -1, hist,
                out, _BUFFER if collect else 0, np.zeros((1, 4, words), dtype=np.uint64), 0,
            )
            nodes += used
            for i in range(n_out):
                found.append(bk.words_to_int(out[i]))
            if status == bk.STATUS_BUDGET:
                return hist, found, nodes, False
    return hist, found, nodes, True


def enumerate_mis(
    g: Graph,
    sink: Callable[[int], object] | None = None,
    workers: int = 1,
    budget: int | None = None,
    split_depth: int = 10,
) -> EnumerationStats:
    """Deliver every maximal independent set of ``g`` to ``sink`` exactly once.

    Sets arrive as int bitmasks in a fixed depth-first order that does not
    depend on ``workers``. If ``sink`` returns ``False`` the run stops with
    :class:`SinkAborted`. ``budget`` caps the number of search nodes.
    With ``sink=None`` nothing is materialized and only the statistics are
    computed.
    """
    start = time.perf_counter()
    node_cap = UNLIMITED if budget is None else int(budget)
    stats = EnumerationStats(workers=max(1, int(workers)))
    n = g.num_vertices
    adj = bk.adjacency_words(g.adj, n)
    collect = sink is not None

    def deliver(found):
        for mask in found:
            if sink(mask) is False:
                raise SinkAborted("sink requested stop")

    def finish():
        stats.elapsed_ms = int((time.perf_counter() - start) * 1000)
        return stats

    if n == 0:
        stats.add_histogram([1])
        if collect:
            deliver([0])
        return finish()

    if stats.workers == 1:
        words = adj.shape[1]
        stack, depth = bk.new_stack(n, words, [_root_frame(g)])
        out = np.zeros((_BUFFER if collect else 1, words), dtype=np.uint64)
        hist = np.zeros(n + 1, dtype=np.int64)
        sp = 1
        while sp:
            status, sp, used, n_out, _ = bk.run(
                adj, stack, depth, sp, node_cap - stats.nodes, -1, hist,
                out, _BUFFER if collect else 0, np.zeros((1, 4, words), dtype=np.uint64), 0,
            )
            stats.nodes += used
            if collect:
                deliver(bk.words_to_int(out[i]) for i in range(n_out))
            if status == bk.STATUS_BUDGET:
                stats.add_histogram(hist)
                finish()
                raise BudgetExceeded(f"node budget {node_cap} exhausted", partial=stats)
        stats.add_histogram(hist)
        return finish()

    frames, split_nodes = _split_frames(adj, n, split_depth)
    stats.nodes += split_nodes
    chunks = np.array_split(frames, min(len(frames), stats.workers * 8)) if len(frames) else []
    with _pool(stats.workers) as pool:
        futures = [pool.submit(_run_frames, adj, chunk, node_cap, collect) for chunk in chunks]
        aborted = False
        for fut in futures:
            hist, found, used, ok = fut.result()
            stats.nodes += used
            stats.add_histogram(hist)
            if collect and not aborted:
                deliver(found)
            aborted = aborted or not ok or stats.nodes > node_cap
    if aborted:
        finish()
        raise BudgetExceeded(f"node budget {node_cap} exhausted", partial=stats)
    return finish()


def count_mis(g: Graph, workers: int = 1, budget: int | None = None) -> int:
    """Number of maximal independent sets, computed without materializing them."""
    return enumerate_mis(g, None, workers=workers, budget=budget).total


def list_mis(g: Graph, workers: int = 1, budget: int | None = None) -> list[int]:
    out: list[int] = []
    enumerate_mis(g, out.append, workers=workers, budget=budget)
    return out


def _oracle_task(co, tasks, node_cap):
    nv, words = co.shape
    hist = np.zeros(nv + 1, dtype=np.int64)
    nodes = 0
    for r, p, x in tasks:
        ok, used = ck.count_cliques(co, ck.pack(r, words), ck.pack(p, words), ck.pack(x, words), node_cap - nodes, hist)
        nodes += used
        if not ok:
            return hist, nodes, False
    return hist, nodes, True


def count_mis_oracle(g: Graph, workers: int = 1, budget: int | None = None) -> int:
    """Count maximal independent sets as maximal cliques of the complement."""
    nv = g.num_vertices
    if nv > ORACLE_VERTEX_LIMIT:
        raise BudgetExceeded(f"oracle limited to {ORACLE_VERTEX_LIMIT} vertices, graph has {nv}")
    if nv == 0:
        return 1
    node_cap = UNLIMITED if budget is None else int(budget)
    co = ck.complement_words(g.adj, nv)
    full = (1 << nv) - 1
    if workers <= 1:
        hist, _, ok = _oracle_task(co, [(0, full, 0)], node_cap)
        if not ok:
            raise BudgetExceeded(f"node budget {node_cap} exhausted", partial=int(hist.sum()))
        return int(sum(int(c) for c in hist))
    # split at the root: each candidate outside the pivot's co-neighborhood is a task
    co_rows = [full & ~row & ~(1 << v) for v, row in enumerate(g.adj)]
    pivot = max(range(nv), key=lambda u: (co_rows[u].bit_count(), -u))
    p, x = full, 0
    tasks = []
    for v in iter_bits(full & ~co_rows[pivot]):
        tasks.append((1 << v, p & co_rows[v], x & co_rows[v]))
        p &= ~(1 << v)
        x |= 1 << v
    groups = [tasks[i::workers] for i in range(workers)]
    total = 0
    ok_all = True
    with _pool(workers) as pool:
        for hist, _, ok in pool.map(_oracle_task, [co] * len(groups), groups, [node_cap] * len(groups)):
            total += int(sum(int(c) for c in hist))
            ok_all = ok_all and ok
    if not ok_all:
        raise BudgetExceeded(f"node budget {node_cap} exhausted", partial=total)
    return total


def complete_to_mis(g: Graph, s: int) -> int:
    """Greedily extend the independent set ``s`` in global vertex order."""
    if not g.is_independent(s):
        raise NotIndependent("input set is not independent")
    blocked = g.neighborhood(s) | s
    adj = g.adj
    for v in range(g.num_vertices):
        if not blocked >> v & 1:
            s |= 1 << v
            blocked |= adj[v] | (1 << v)
    return s


@dataclass(frozen=True)
class HujterTuzaAudit:
    count: int
    num_vertices: int
    equality: bool
    is_perfect_matching: bool

    @property
    def bound(self) -> float:
        """2^(m/2) as a float, for display only."""
        return 2.0 ** (self.num_vertices / 2)

    @property
    def holds(self) -> bool:
        return self.count * self.count <= 2**self.num_vertices


def hujter_tuza_audit(g: Graph) -> HujterTuzaAudit:
    """Compare mis(g) with 2^(m/2) exactly (by squaring)."""
    if not g.is_triangle_free():
        raise NotTriangleFree("graph contains a triangle")
    count = count_mis(g)
    return HujterTuzaAudit(
        count=count,
        num_vertices=g.num_vertices,
        equality=count * count == 2**g.num_vertices,
        is_perfect_matching=g.is_perfect_matching(),
    )


@dataclass(frozen=True)
class StabilityProfile:
    deficient_count: int
    threshold: Fraction
    total: int

    @property
    def log2_deficient(self) -> float:
        return math.log2(self.deficient_count) if self.deficient_count else float("-inf")


def stability_profile(g: Graph, eps: Fraction) -> StabilityProfile:
    """Count MIS whose assigned matching is smaller than (1 - eps) * m / 2."""
    from .matching_assign import assign_matching

    eps = Fraction(eps)
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    if not g.is_triangle_free():
        raise NotTriangleFree("graph contains a triangle")
    threshold = (1 - eps) * g.num_vertices / 2
    deficient = 0
    total = 0
    for mis in list_mis(g):
        total += 1
        if len(assign_matching(g, mis)) < threshold:
            deficient += 1
    return StabilityProfile(deficient, threshold, total)


@dataclass(frozen=True)
class CensusRow:
    num_vertices: int
    graphs: int
    violations: int
    equality_cases: int
    equality_mismatches: int
    max_count: int


def hujter_tuza_census(max_vertices: int) -> list[CensusRow]:
    """Audit every labeled triangle-free graph on ``0..max_vertices`` vertices."""
    if not (0 <= max_vertices <= 10):
        raise ValueError("census supports at most 10 vertices")
    return [CensusRow(m, *(int(x) for x in tk.census(m))) for m in range(max_vertices + 1)]
