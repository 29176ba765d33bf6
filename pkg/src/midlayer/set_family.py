"""Uniform set families: shadows, shifts, and isoperimetric inequality checks.

Every checker returns an :class:`~midlayer.reports.IsoReport` with exact
rational sides. Logarithms are base 2. The only real-valued quantity is the
inverse binomial used by the shadow bound, found by bisection with mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

from .errors import (
    HypothesisViolated,
    InvalidParameter,
    NoBracket,
    NotInducedMatching,
    NotUniform,
    ShiftIndexOutOfRange,
    UniformityZero,
    WrongLayer,
)
from .graph import iter_bits
from .layer_graph import LayerGraph, canonical_matching, partner_closure
from .reports import IsoReport


@dataclass(frozen=True)
class SetFamily:
    n: int
    m: int
    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        for s in members:
            if s.bit_count() != self.m or s >> self.n:
                raise NotUniform(f"{s:x} is not an {self.m}-subset of [{self.n}]")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, n: int, m: int, sets) -> "SetFamily":
        """Build from element collections, e.g. ``of(3, 2, [(1, 2), (2, 3)])``."""
        return cls(n, m, tuple(sum(1 << (e - 1) for e in s) for s in sets))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, s: int) -> bool:
        return s in set(self.members)

    def dumps(self) -> str:
        lines = [f"n={self.n} m={self.m}"] + [format(s, "x") for s in self.members]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SetFamily":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty set family file")
        header = dict(part.split("=") for part in lines[0].split())
        return cls(int(header["n"]), int(header["m"]), tuple(int(x, 16) for x in lines[1:]))


def family_from_vertices(g: LayerGraph, mask: int) -> SetFamily:
    if mask & ~g.upper_mask:
        raise WrongLayer("vertices must lie in the upper layer")
    return SetFamily(g.n, g.k, tuple(g.subsets_of(mask)))


def vertices_from_family(g: LayerGraph, fam: SetFamily) -> int:
    if fam.n != g.n or fam.m != g.k:
        raise WrongLayer("family does not live on the upper layer of this graph")
    return g.vset(fam.members)


def shadow(fam: SetFamily) -> SetFamily:
    if fam.m == 0:
        raise UniformityZero("the shadow of a 0-uniform family is undefined")
    out = set()
    for s in fam.members:
        for i in iter_bits(s):
            out.add(s ^ (1 << i))
    return SetFamily(fam.n, fam.m - 1, tuple(out))


def iterated_shadow(fam: SetFamily, q: int) -> SetFamily:
    for _ in range(q):
        fam = shadow(fam)
    return fam


def shift(fam: SetFamily, i: int) -> SetFamily:
    """Replace ``i`` by ``1`` in each member where that is legal.

    A member changes only if it contains ``i``, misses ``1``, and its image
    is not already a member of the original family.
    """
    if not (2 <= i <= fam.n):
        raise ShiftIndexOutOfRange(f"shift index {i} not in [2, {fam.n}]")
    src = set(fam.members)
    bit_i = 1 << (i - 1)
    out = []
    for s in fam.members:
        if s & bit_i and not s & 1:
            image = (s ^ bit_i) | 1
            out.append(s if image in src else image)
        else:
            out.append(s)
    return SetFamily(fam.n, fam.m, tuple(out))


def _binom_real(x, m: int):
    """Falling-factorial binomial coefficient for real ``x``."""
    value = mpmath.mpf(1)
    for j in range(m):
        value *= (x - j)
    return value / math.factorial(m)


def real_binomial_inverse(size, m: int, lo=None, hi=None, dps: int = 40):
    """Real ``x >= m - 1`` with ``C(x, m) = size``, to relative accuracy 1e-9 or better.

    Returns an ``mpmath.mpf``.
    """
    with mpmath.workdps(dps):
        target = mpmath.mpf(Fraction(size).numerator) / Fraction(size).denominator
        if target < 0:
            raise NoBracket("size must be non-negative")
        if m == 0:
            if target != 1:
                raise NoBracket("C(x, 0) = 1 for every x")
            return mpmath.mpf(max(lo or 0, 0))
        lo = mpmath.mpf(m - 1 if lo is None else max(lo, m - 1))
        if hi is None:
            hi = lo + 1
            while _binom_real(hi, m) < target:
                hi = 2 * hi
        hi = mpmath.mpf(hi)
        if not (_binom_real(lo, m) <= target <= _binom_real(hi, m)):
            raise NoBracket(f"size {size} outside [C(lo,{m}), C(hi,{m})]")
        tol = mpmath.mpf(10) ** -12 * max(1, target)
        for _ in range(400):
            mid = (lo + hi) / 2
            val = _binom_real(mid, m)
            if abs(val - target) <= tol:
                return mid
            if val < target:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


def _mpf_to_fraction(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    man = int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def shadow_bound_report(fam: SetFamily, q: int) -> IsoReport:
    """q-fold shadow size against the real-binomial lower bound.

    An empty family has an empty shadow and the bound is taken as 0.
    """
    if not (0 <= q <= fam.m):
        raise InvalidParameter(f"need 0 <= q <= m, got q={q}, m={fam.m}")
    lhs = len(iterated_shadow(fam, q))
    if not fam.members:
        return IsoReport(f"shadow-q{q}", Fraction(lhs), Fraction(0))
    with mpmath.workdps(40):
        x = real_binomial_inverse(len(fam), fam.m)
        rhs = _binom_real(x, fam.m - q)
    rhs_q = _mpf_to_fraction(rhs)
    tol = Fraction(1, 10**9) * max(1, rhs_q)
    return IsoReport(f"shadow-q{q}", Fraction(lhs), rhs_q, tolerance=tol)


def _require_upper(g: LayerGraph, a: int) -> None:
    if a & ~g.upper_mask:
        raise WrongLayer("set must lie in the upper layer")


def _log2(x: int) -> float:
    return math.log2(x) if x > 1 else 0.0


VERTEX_ISO_VARIANTS = ("i", "ii", "iii", "iso3", "matched-shadow", "doublesided")


def vertex_iso_report(g: LayerGraph, a: int, variant: str, *, matching=None, direction: int | None = None) -> IsoReport:
    """Neighborhood-expansion bounds.

    Variants ``i``, ``ii``, ``iii`` concern upper-layer sets of B(2d-1, d);
    ``iso3`` concerns upper-layer sets of B(2d-2, d-1); ``matched-shadow``
    takes an induced matching and ``a`` equal to its upper ends;
    ``doublesided`` needs ``direction`` and ``a`` outside ``V(M_k)``, and
    compares the partner closure of ``N(a)`` with ``2d|a| - 4|a|^2``.
    """
    size = a.bit_count()
    if variant in ("i", "ii", "iii"):
        _require_upper(g, a)
        if not g.is_middle:
            raise WrongLayer(f"variant {variant} needs B(2d-1, d)")
        d = g.k
        lhs = Fraction(g.neighborhood(a).bit_count())
        if variant == "i":
            return IsoReport("i", lhs, Fraction(d * size) - Fraction(size * size, 2), size <= d)
        if variant == "ii":
            return IsoReport("ii", lhs, Fraction(d * size, 9), size <= d**6)
        if d < 2:
            raise InvalidParameter("variant iii needs d >= 2")
        return IsoReport("iii", lhs, Fraction(d, d - 1) * size, size <= comb(2 * d - 2, d))
    if variant == "iso3":
        _require_upper(g, a)
        if g.n != 2 * g.k:
            raise WrongLayer("variant iso3 needs B(2d-2, d-1)")
        d = g.k + 1
        lg = _log2(d)
        limit = lg**6 / math.sqrt(d) * comb(2 * d - 2, d - 1)
        rhs = (1 + Fraction(lg) / (5 * d)) * size
        return IsoReport("iso3", Fraction(g.neighborhood(a).bit_count()), rhs, size <= limit)
    if variant == "matched-shadow":
        from .matching_assign import is_induced_matching

        if not g.is_middle:
            raise WrongLayer("variant matched-shadow needs B(2d-1, d)")
        edges = list(matching or ())
        ok, _ = is_induced_matching(g, edges)
        if not ok:
            raise NotInducedMatching("supplied edges are not an induced matching")
        ends = 0
        for u, v in edges:
            ends |= (1 << u) | (1 << v)
        if a != ends & g.upper_mask:
            raise WrongLayer("set must equal the upper ends of the matching")
        d = g.k
        lg = _log2(d)
        limit = lg**6 / math.sqrt(d) * comb(2 * d - 2, d - 1)
        rhs = (2 + Fraction(lg) / (5 * d)) * size
        return IsoReport("matched-shadow", Fraction(g.neighborhood(a).bit_count()), rhs, len(edges) <= limit)
    if variant == "doublesided":
        if direction is None:
            raise InvalidParameter("variant doublesided needs a direction")
        if a & canonical_matching(g, direction).vertices:
            raise WrongLayer("set must avoid the canonical matching's vertices")
        d = g.k
        lhs = partner_closure(g, direction, g.neighborhood(a)).bit_count()
        return IsoReport("doublesided", Fraction(lhs), Fraction(2 * d * size - 4 * size * size))
    raise InvalidParameter(f"unknown variant {variant!r}; choose from {VERTEX_ISO_VARIANTS}")


def _leaving_triplets(g: LayerGraph, a: int) -> int:
    """Ordered x-y-z with x in ``a`` and z an upper vertex outside ``a``."""
    total = 0
    adj = g.adj
    for x in iter_bits(a):
        for y in iter_bits(adj[x]):
            total += (adj[y] & ~a).bit_count()
    return total


def _degree_squares(g: LayerGraph, a: int) -> int:
    adj = g.adj
    return sum((adj[v] & a).bit_count() ** 2 for v in range(g.n_lower))


def adjacent_triplet_report(g: LayerGraph, a: int) -> IsoReport:
    _require_upper(g, a)
    size = a.bit_count()
    rhs = Fraction(g.n * size) - Fraction(g.k * size * size, comb(g.n - 1, g.k - 1))
    return IsoReport("adjacent-triplets", Fraction(_leaving_triplets(g, a)), rhs)


def triplet_identity_check(g: LayerGraph, a: int) -> tuple[int, int]:
    """Both sides of the degree-square / leaving-triplet double count."""
    _require_upper(g, a)
    lhs = _degree_squares(g, a)
    rhs = (g.n - g.k + 1) * g.k * a.bit_count() - _leaving_triplets(g, a)
    return lhs, rhs


def bey_bound_report(g: LayerGraph, a: int) -> IsoReport:
    _require_upper(g, a)
    n, d, size = g.n, g.k, a.bit_count()
    rhs = Fraction(d * size * size, comb(n - 1, d - 1)) + (n - d) * (d - 1) * size
    return IsoReport("bey", Fraction(_degree_squares(g, a)), rhs, sense="<=")


def edge_iso_report(g: LayerGraph, a: int, matching) -> IsoReport:
    """Edges from the unmatched part of ``N(a)`` to the rest of the upper layer."""
    from .matching_assign import is_induced_matching

    _require_upper(g, a)
    n, d = g.n, g.k
    if n == d:
        raise InvalidParameter("edge isoperimetry needs n > d")
    edges = list(matching or ())
    ok, bad = is_induced_matching(g, edges)
    if not ok:
        raise NotInducedMatching(f"edges {bad} break inducedness")
    vm = 0
    for u, v in edges:
        vm |= (1 << u) | (1 << v)
    for x in iter_bits(a & ~vm):
        if g.adj[x] & vm:
            raise HypothesisViolated(f"vertex {x} is outside the matching but adjacent to it")
    nb = g.neighborhood(a)
    h = nb & ~vm
    lhs = g.edges_between(h, g.upper_mask & ~a)
    size = a.bit_count()
    rhs = Fraction(d, n - d) * (size - Fraction(size * size, comb(n - 1, d - 1)))
    return IsoReport("edge-iso", Fraction(lhs), rhs)
