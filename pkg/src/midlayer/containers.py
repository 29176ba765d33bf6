"""Graph containers: the greedy certificate algorithm and the two-stage approximation.

The first half implements the max-degree peeling that turns a maximal
independent set into a short certificate ``xi`` plus a remainder ``Z``.
The second half implements the approximation stages for a pair
``(core, H)``: a covering set ``F'`` (phi stage) and a pair ``(S, F)``
(psi stage), for two pair families:

* ``G1Pair``: core ``A`` is a 2-linked upper-layer set, ``H`` a lower-layer set;
* ``G2Pair``: core ``Q`` is a 3-linked set avoiding ``V(M_k)``, ``H`` inside ``V(M_k)``.

Vertex order (global index order) resolves every tie.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetExceeded,
    InconsistentXi,
    InvalidPair,
    InvalidParameter,
    InvalidThresholds,
    NotMaximal,
    NotRegular,
    NotSubset,
    PreconditionFailed,
    PsiEqualsD,
    Uncoverable,
)
from .graph import Graph, iter_bits
from .layer_graph import LayerGraph, canonical_matching, is_linked, partner_closure
from .mis_engine import is_maximal
from .reports import IsoReport

# --------------------------------------------------------------------------
# basic container algorithm


class StopReason(enum.Enum):
    SIZE_BOUND = "SizeBound"
    CERT_BOUND = "CertBound"
    EXHAUSTED = "Exhausted"


@dataclass(frozen=True)
class Thresholds:
    """Stop when ``|Z| <= size_bound`` or ``|C| >= cert_bound`` (None: never)."""

    size_bound: int = 0
    cert_bound: int | None = None

    def __post_init__(self):
        if self.size_bound < 0 or (self.cert_bound is not None and self.cert_bound < 0):
            raise InvalidThresholds("thresholds must be non-negative")


@dataclass(frozen=True)
class Certificate:
    xi: tuple[int, ...]
    C: int
    Z: int
    stop_reason: StopReason
    thresholds: Thresholds

    @property
    def xi_int(self) -> int:
        """Bit ``i`` is step ``i`` of ``xi``."""
        return sum(1 << i for i, b in enumerate(self.xi) if b)

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "xi_hex": format(self.xi_int, "x"),
            "C_hex": format(self.C, "x"),
            "Z_size": self.Z.bit_count(),
            "stop_reason": self.stop_reason.value,
        }


def _stop(z: int, c: int, th: Thresholds) -> StopReason | None:
    if not z:
        return StopReason.EXHAUSTED
    if z.bit_count() <= th.size_bound:
        return StopReason.SIZE_BOUND
    if th.cert_bound is not None and c.bit_count() >= th.cert_bound:
        return StopReason.CERT_BOUND
    return None


def _max_degree_vertex(g: Graph, z: int) -> int:
    adj = g.adj
    best, best_deg = -1, -1
    for v in iter_bits(z):
        deg = (adj[v] & z).bit_count()
        if deg > best_deg:
            best, best_deg = v, deg
    return best


def run_basic_container(g: Graph, independent: int, thresholds: Thresholds, within: int | None = None) -> Certificate:
    """Peel max-degree vertices of ``G[Z]`` and record membership in ``independent``."""
    z0 = g.all_mask if within is None else within
    if within is None:
        if not is_maximal(g, independent):
            raise NotMaximal("the basic container algorithm needs a maximal independent set")
    elif independent & ~z0:
        raise ValueError("independent set must lie inside the starting set")
    z, c = z0, 0
    xi: list[int] = []
    while (reason := _stop(z, c, thresholds)) is None:
        v = _max_degree_vertex(g, z)
        if independent >> v & 1:
            c |= 1 << v
            z &= ~(g.adj[v] | (1 << v))
            xi.append(1)
        else:
            z &= ~(1 << v)
            xi.append(0)
    xi.extend([0] * (z0.bit_count() - len(xi)))
    return Certificate(tuple(xi), c, z, reason, thresholds)


def replay_certificate(g: Graph, xi, thresholds: Thresholds, within: int | None = None) -> tuple[int, int]:
    """Rebuild ``(Z, C)`` from ``xi`` alone."""
    z0 = g.all_mask if within is None else within
    xi = tuple(int(b) for b in xi)
    if len(xi) != z0.bit_count() or any(b not in (0, 1) for b in xi):
        raise InconsistentXi(f"xi must be a 0/1 vector of length {z0.bit_count()}")
    z, c, step = z0, 0, 0
    while _stop(z, c, thresholds) is None:
        v = _max_degree_vertex(g, z)
        if xi[step]:
            if g.adj[v] & c:
                raise InconsistentXi(f"step {step} accepts a vertex adjacent to the certificate")
            c |= 1 << v
            z &= ~(g.adj[v] | (1 << v))
        else:
            z &= ~(1 << v)
        step += 1
    if any(xi[step:]):
        raise InconsistentXi(f"xi has accepted steps after the stop at step {step}")
    return z, c


# --------------------------------------------------------------------------
# covers and small structural checks


def greedy_cover(g: Graph, p: int, q: int) -> int:
    """Greedy subset of ``q`` dominating ``p``: take the vertex covering most, repeat."""
    adj = g.adj
    for v in iter_bits(p):
        if not adj[v] & q:
            raise Uncoverable(f"vertex {v} has no neighbor in Q")
    uncovered, cover = p, 0
    while uncovered:
        best, gain = -1, 0
        for u in iter_bits(q & ~cover):
            hit = (adj[u] & uncovered).bit_count()
            if hit > gain:
                best, gain = u, hit
        cover |= 1 << best
        uncovered &= ~adj[best]
    return cover


def cover_bound(g: Graph, p: int, q: int) -> tuple[int, int, float]:
    """``(a, b, (|Q|/a)(1 + ln b))`` for the greedy cover guarantee."""
    if not p:
        return 0, 0, 0.0
    adj = g.adj
    a = min((adj[v] & q).bit_count() for v in iter_bits(p))
    b = max(((adj[u] & p).bit_count() for u in iter_bits(q)), default=0)
    if a == 0:
        raise Uncoverable("some vertex of P has no neighbor in Q")
    return a, b, q.bit_count() / a * (1 + math.log(max(b, 1)))


def tilde(g: LayerGraph, direction: int, mask: int) -> int:
    return partner_closure(g, direction, mask)


def bracket_closure(g: LayerGraph, direction: int, g_tilde: int) -> int:
    """Vertices outside ``V(M_k)`` whose whole neighborhood lies in ``g_tilde``."""
    outside = g.all_mask & ~canonical_matching(g, direction).vertices
    adj = g.adj
    return sum(1 << v for v in iter_bits(outside) if adj[v] & ~g_tilde == 0)


def linked_superset_count(g: Graph, v: int, k: int, t: int, budget: int = 10**6) -> tuple[int, int]:
    """Number of ``k``-linked ``t``-sets containing ``v``, with the ``d^(3kt)`` bound."""
    if t < 1:
        raise InvalidParameter("t must be >= 1")
    d = max(nb.bit_count() for nb in g.adj)
    balls = {}

    def ball(u):
        if u not in balls:
            balls[u] = g.ball(u, k) & ~(1 << u)
        return balls[u]

    level = {1 << v}
    for _ in range(t - 1):
        nxt = set()
        for s in level:
            reach = 0
            for u in iter_bits(s):
                reach |= ball(u)
            for w in iter_bits(reach & ~s):
                nxt.add(s | (1 << w))
                if len(nxt) > budget:
                    raise BudgetExceeded(f"more than {budget} linked sets")
        level = nxt
    return len(level), d ** (3 * k * t)


def _regular_degree(g: Graph) -> int:
    degrees = {nb.bit_count() for nb in g.adj}
    if len(degrees) != 1:
        raise NotRegular("graph is not regular")
    return degrees.pop()


def prop_upper_z_report(g: Graph, w: int, z: int) -> IsoReport:
    """``(d|W| + e(W, W^c)) / (2d - d')`` against ``|Z|`` (lhs is the bound)."""
    if z & ~w:
        raise NotSubset("Z must be a subset of W")
    d = _regular_degree(g)
    boundary = g.edges_between(w, g.all_mask & ~w)
    d_int = max(((g.adj[v] & z).bit_count() for v in iter_bits(z)), default=0)
    bound = Fraction(d * w.bit_count() + boundary, 2 * d - d_int)
    return IsoReport("prop-upper-z", bound, Fraction(z.bit_count()))


def linkedness_closure_check(g: Graph, a: int, t: int, m: int, r: int) -> bool:
    """Check the hypotheses, then report whether ``t`` is ``(m + 2r)``-linked."""
    if not is_linked(g, a, m):
        raise PreconditionFailed(f"A is not {m}-linked")
    reach_t = 0
    for u in iter_bits(t):
        reach_t |= g.ball(u, r)
    if a & ~reach_t:
        raise PreconditionFailed(f"some vertex of A is farther than {r} from T")
    reach_a = 0
    for u in iter_bits(a):
        reach_a |= g.ball(u, r)
    if t & ~reach_a:
        raise PreconditionFailed(f"some vertex of T is farther than {r} from A")
    return is_linked(g, t, m + 2 * r)


# --------------------------------------------------------------------------
# pair families


@dataclass(frozen=True)
class G1Pair:
    A: int
    H: int
    a: int
    h: int
    r: int
    matching: tuple[tuple[int, int], ...] = ()

    @property
    def core(self) -> int:
        return self.A


@dataclass(frozen=True)
class G2Pair:
    Q: int
    H: int
    direction: int
    q: int
    h: int
    r: int
    g_tilde: int
    matching: tuple[tuple[int, int], ...] = ()

    @property
    def core(self) -> int:
        return self.Q


@dataclass(frozen=True)
class _Roles:
    core: int
    H: int
    side: int  # where H and the helper sets live
    universe: int  # where the core and S live


def _roles(g: LayerGraph, pair) -> _Roles:
    if isinstance(pair, G1Pair):
        return _Roles(pair.A, pair.H, g.lower_mask, g.upper_mask)
    vm = canonical_matching(g, pair.direction).vertices
    return _Roles(pair.Q, pair.H, vm, g.all_mask & ~vm)


def _is_induced_extension(g: Graph, used: int, x: int, y: int) -> bool:
    """Can edge ``xy`` join a matching covering ``used`` and stay induced?"""
    ends = (1 << x) | (1 << y)
    return not (ends & used) and not ((g.adj[x] | g.adj[y]) & used)


def _condition_iv_matching(g: Graph, core: int, h: int, need_maximal: bool, node_cap: int = 10**6):
    """Search for an induced matching from ``core`` onto ``N(core) \\ H``.

    It must cover ``N(core) \\ H``, leave unmatched core vertices with no
    neighbor on the matching, and (optionally) be maximal among induced
    matchings of the bipartite graph between ``core`` and ``N(core)``.
    Returns the edges as ``(core vertex, other vertex)`` or ``None``.
    """
    adj = g.adj
    nbhd = g.neighborhood(core)
    targets = list(iter_bits(nbhd & ~h))
    nodes = 0

    def leaf_ok(edges, used):
        if g.neighborhood(used) & core & ~used:
            return False
        if need_maximal:
            for x in iter_bits(core & ~used):
                for y in iter_bits(adj[x] & nbhd):
                    if _is_induced_extension(g, used, x, y):
                        return False
        return True

    def search(i, edges, used):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise BudgetExceeded(f"condition-iv search exceeded {node_cap} nodes")
        if i == len(targets):
            return list(edges) if leaf_ok(edges, used) else None
        y = targets[i]
        for x in iter_bits(adj[y] & core):
            if _is_induced_extension(g, used, x, y):
                edges.append((x, y))
                found = search(i + 1, edges, used | (1 << x) | (1 << y))
                if found is not None:
                    return found
                edges.pop()
        return None

    return search(0, [], 0)


def verify_g1(g: LayerGraph, a: int, h: int) -> tuple[bool, tuple[int, int, int], str]:
    """Check the four defining conditions; returns ``(ok, (a, h, r), detail)``."""
    sizes = (a.bit_count(), h.bit_count(), g.edges_between(h, g.upper_mask & ~a))
    if a & ~g.upper_mask or h & ~g.lower_mask:
        return False, sizes, "A must be upper-layer and H lower-layer"
    if not is_linked(g, a, 2):
        return False, sizes, "A is not 2-linked"
    if h & ~g.neighborhood(a):
        return False, sizes, "H is not inside N(A)"
    for u in iter_bits(g.upper_mask & ~a):
        if g.adj[u] & ~h == 0:
            return False, sizes, f"vertex {u} has N(u) inside H but is not in A"
    if _condition_iv_matching(g, a, h, need_maximal=False) is None:
        return False, sizes, "no induced matching covers N(A) \\ H"
    return True, sizes, ""


def make_g1_pair(g: LayerGraph, a: int, h: int) -> G1Pair:
    ok, (na, nh, r), detail = verify_g1(g, a, h)
    if not ok:
        raise InvalidPair(detail)
    m = _condition_iv_matching(g, a, h, need_maximal=False)
    return G1Pair(a, h, na, nh, r, tuple(m))


def verify_g2(g: LayerGraph, direction: int, q: int, h: int) -> tuple[bool, tuple[int, int, int, int], str]:
    """Check the five defining conditions; returns ``(ok, (q, h, r, g~), detail)``."""
    vm = canonical_matching(g, direction).vertices
    outside = g.all_mask & ~vm
    nq = g.neighborhood(q)
    sizes = (q.bit_count(), h.bit_count(), g.edges_between(h, outside & ~q), tilde(g, direction, nq).bit_count())
    if q & vm:
        return False, sizes, "Q meets V(M_k)"
    if not is_linked(g, q, 3):
        return False, sizes, "Q is not 3-linked"
    if h & ~nq:
        return False, sizes, "H is not inside N(Q)"
    for u in iter_bits(outside & ~q):
        if g.adj[u] & ~h == 0:
            return False, sizes, f"vertex {u} has N(u) inside H but is not in Q"
    if _condition_iv_matching(g, q, h, need_maximal=True) is None:
        return False, sizes, "no maximal induced matching covers N(Q) \\ H"
    return True, sizes, ""


def make_g2_pair(g: LayerGraph, direction: int, q: int, h: int) -> G2Pair:
    ok, (nq, nh, r, gt), detail = verify_g2(g, direction, q, h)
    if not ok:
        raise InvalidPair(detail)
    m = _condition_iv_matching(g, q, h, need_maximal=True)
    return G2Pair(q, h, direction, nq, nh, r, gt, tuple(m))


# --------------------------------------------------------------------------
# approximation stages


@dataclass(frozen=True)
class ApproxPair:
    stage: str
    phi: int
    psi: int | None
    seed: int
    f_prime: int
    S: int = 0
    F: int = 0
    trace: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "stage": self.stage,
            "phi": self.phi,
            "psi": self.psi,
            "seed": self.seed,
            "F_prime_hex": format(self.f_prime, "x"),
            "S_hex": format(self.S, "x"),
            "F_hex": format(self.F, "x"),
            "trace": self.trace,
        }


MASK64 = (1 << 64) - 1


def _uniforms(seed: int, attempt: int, count: int) -> np.ndarray:
    """Per-vertex uniforms; entry ``v`` depends only on (seed, attempt, v)."""
    bitgen = np.random.Philox(key=np.array([seed & MASK64, attempt], dtype=np.uint64))
    return np.random.Generator(bitgen).random(count)


def high_degree_part(g: Graph, core: int, h: int, phi: int) -> int:
    adj = g.adj
    return sum(1 << u for u in iter_bits(h) if (adj[u] & core).bit_count() >= phi)


def phi_approx(g: LayerGraph, pair, phi: int, seed: int = 0, retries: int = 64) -> ApproxPair:
    d = g.k
    if not (1 <= phi <= d):
        raise InvalidParameter(f"phi must lie in [1, {d}]")
    roles = _roles(g, pair)
    core, h = roles.core, roles.H
    adj = g.adj
    lg = math.log2(d) if d > 1 else 0.0
    p = min(1.0, 40 * lg / (phi * d))
    hphi = high_degree_part(g, core, h, phi)
    n_h, r = h.bit_count(), pair.r
    limits = (200 * n_h * lg / (phi * d), 200 * r * lg / (phi * d), 10 * n_h / d**3)
    h_list = list(iter_bits(h))
    best = None
    for attempt in range(max(1, retries)):
        u = _uniforms(seed, attempt, g.num_vertices)
        t0 = sum(1 << v for v in h_list if u[v] < p)
        n_a_x = g.neighborhood(t0) & core
        t1 = sum(1 << v for v in iter_bits(roles.side) if (adj[v] & n_a_x).bit_count() >= 2)
        t2 = hphi & ~(t0 | t1)
        t_star = t0 | t1 | t2
        t3 = greedy_cover(g, core & ~g.neighborhood(t_star), h & ~t_star)
        omega = g.edges_between(t0, roles.universe & ~core)
        sizes = (t0.bit_count(), omega, t2.bit_count())
        met = all(s <= lim for s, lim in zip(sizes, limits))
        trace = {
            "T0": t0.bit_count(),
            "T1": t1.bit_count(),
            "T2": t2.bit_count(),
            "T3": t3.bit_count(),
            "Omega_T0": omega,
            "attempt": attempt,
            "bounds_met": met,
            "p": p,
            "T_hex": format(t0 | t2 | t3, "x"),
        }
        candidate = ApproxPair("phi", phi, None, seed, t_star | t3, trace=trace)
        if met:
            return candidate
        excess = sum(max(0.0, s - lim) for s, lim in zip(sizes, limits))
        if best is None or excess < best[0]:
            best = (excess, candidate)
    return best[1]


def verify_phi(g: LayerGraph, pair, phi: int, f_prime: int) -> tuple[bool, str]:
    roles = _roles(g, pair)
    hphi = high_degree_part(g, roles.core, roles.H, phi)
    if hphi & ~f_prime:
        return False, "F' misses a high-degree vertex of H"
    if f_prime & ~roles.H:
        return False, "F' is not inside H"
    if roles.core & ~g.neighborhood(f_prime):
        return False, "F' does not cover the core"
    return True, ""


def psi_approx(g: LayerGraph, pair, f_prime: int, psi: int, phi: int = 0, seed: int = 0) -> ApproxPair:
    """Two deterministic sweeps in vertex order turning ``F'`` into ``(S, F)``."""
    d = g.k
    if not (2 <= psi <= d):
        raise InvalidParameter(f"psi must lie in [2, {d}]")
    roles = _roles(g, pair)
    core, h = roles.core, roles.H
    adj = g.adj
    matched = 0
    for x, y in pair.matching:
        matched |= (1 << x) | (1 << y)
    f = f_prime
    # one sweep suffices: degrees into H \ F only decrease
    for u in iter_bits(core):
        if (adj[u] & h & ~f).bit_count() >= psi - 1:
            f |= adj[u]
    f_star = f
    f2 = f_star & h
    s = sum(1 << u for u in iter_bits(roles.universe) if (adj[u] & f2).bit_count() >= d - psi)
    for w in iter_bits(roles.side & ~h):
        if (adj[w] & s).bit_count() > psi:
            s &= ~adj[w]
            if matched >> w & 1:
                s |= adj[w] & core
    big = sum(1 << u for u in iter_bits(roles.side) if (adj[u] & s).bit_count() > psi)
    f_final = f2 | big
    trace = {"F_star": f_star.bit_count(), "F2": f2.bit_count(), "S": s.bit_count(), "F": f_final.bit_count()}
    return ApproxPair("psi", phi, psi, seed, f_prime, s, f_final, trace)


def verify_psi(g: LayerGraph, pair, psi: int, s: int, f: int) -> tuple[bool, str]:
    d = g.k
    roles = _roles(g, pair)
    adj = g.adj
    if f & ~roles.H:
        return False, "F is not inside H"
    if roles.core & ~s:
        return False, "S misses a core vertex"
    for u in iter_bits(s):
        if (adj[u] & f).bit_count() < d - psi:
            return False, f"vertex {u} of S has fewer than d - psi neighbors in F"
    for v in iter_bits(roles.side & ~f):
        if (adj[v] & ~s).bit_count() < d - psi:
            return False, f"vertex {v} outside F has fewer than d - psi neighbors outside S"
    return True, ""


def sf_bound_report(g: LayerGraph, pair, psi: int, s: int, f: int) -> IsoReport:
    """``|F| + (psi h - (psi - 1) |core|) / (d - psi)`` (lhs) against ``|S|`` (rhs)."""
    d = g.k
    if psi == d:
        raise PsiEqualsD("the bound needs psi < d")
    roles = _roles(g, pair)
    h, c = roles.H.bit_count(), roles.core.bit_count()
    bound = f.bit_count() + Fraction(psi * h - (psi - 1) * c, d - psi)
    return IsoReport("sf-bound", bound, Fraction(s.bit_count()))


# --------------------------------------------------------------------------
# harvesting pairs from maximal independent sets


def harvest_g1_pairs(g: LayerGraph, independent: int, matching=None) -> list[G1Pair]:
    """Split the matched-or-chosen upper vertices into 2-linked pieces with their H."""
    from .layer_graph import linked_components
    from .matching_assign import assign_matching

    m = assign_matching(g, independent) if matching is None else matching
    covered = independent | m.vertices
    upper, lower = covered & g.upper_mask, covered & g.lower_mask
    pairs = []
    for comp in linked_components(g, upper, 2):
        h = g.neighborhood(comp) & ~lower
        ok, _, _ = verify_g1(g, comp, h)
        if ok:
            pairs.append(make_g1_pair(g, comp, h))
    return pairs


def harvest_g2_pairs(g: LayerGraph, independent: int, direction: int) -> list[G2Pair]:
    """Pairs built from the 3-linked pieces of ``I`` outside ``V(M_k)``."""
    from .layer_graph import linked_components
    from .matching_assign import assign_matching

    vm = canonical_matching(g, direction).vertices
    pairs = []
    for comp in linked_components(g, independent & ~vm, 3):
        g_t = tilde(g, direction, g.neighborhood(comp))
        closed = bracket_closure(g, direction, g_t)
        region = g_t | closed
        m = assign_matching(g, independent & region, within=region, prefer_direction=direction)
        q = comp | (closed & m.vertices)
        h = g.neighborhood(q) & ~m.vertices
        ok, _, _ = verify_g2(g, direction, q, h)
        if ok:
            pairs.append(make_g2_pair(g, direction, q, h))
    return pairs
