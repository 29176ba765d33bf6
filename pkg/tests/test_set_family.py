import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from midlayer.errors import NotInducedMatching, NotUniform, ShiftIndexOutOfRange, UniformityZero, WrongLayer
from midlayer.layer_graph import build_layer_graph
from midlayer.set_family import (
    SetFamily,
    adjacent_triplet_report,
    bey_bound_report,
    edge_iso_report,
    real_binomial_inverse,
    shadow,
    shadow_bound_report,
    shift,
    triplet_identity_check,
    vertex_iso_report,
)

from oracles import brute_shadow, brute_shift


def to_frozensets(fam):
    return {frozenset(i + 1 for i in range(fam.n) if s >> i & 1) for s in fam.members}


@st.composite
def families(draw, max_n=9):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(1, n))
    pool = [s for s in range(1 << n) if s.bit_count() == m]
    members = draw(st.lists(st.sampled_from(pool), max_size=min(len(pool), 40), unique=True))
    return SetFamily(n, m, tuple(members))


def test_shadow_examples():
    assert shadow(SetFamily.of(3, 2, [(1, 2), (2, 3)])) == SetFamily.of(3, 1, [(1,), (2,), (3,)])
    full = SetFamily.of(4, 2, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    assert len(shadow(full)) == 4
    assert len(shadow(SetFamily(4, 2, ()))) == 0
    with pytest.raises(UniformityZero):
        shadow(SetFamily(3, 0, (0,)))


def test_shift_examples():
    assert shift(SetFamily.of(3, 2, [(1, 2), (2, 3)]), 2) == SetFamily.of(3, 2, [(1, 2), (1, 3)])
    same = SetFamily.of(3, 2, [(1, 2), (1, 3)])
    assert shift(same, 2) == same
    blocked = SetFamily.of(3, 2, [(2, 3), (1, 3)])
    assert shift(blocked, 2) == blocked
    with pytest.raises(ShiftIndexOutOfRange):
        shift(same, 1)
    with pytest.raises(ShiftIndexOutOfRange):
        shift(same, 4)


def test_family_validation_and_roundtrip():
    with pytest.raises(NotUniform):
        SetFamily(3, 2, (0b111,))
    fam = SetFamily.of(5, 2, [(1, 5), (2, 3)])
    assert SetFamily.loads(fam.dumps()) == fam


@given(families())
def test_shadow_matches_oracle(fam):
    assert to_frozensets(shadow(fam)) == brute_shadow(to_frozensets(fam))


@given(families(), st.data())
def test_shift_properties(fam, data):
    i = data.draw(st.integers(2, fam.n))
    shifted = shift(fam, i)
    assert to_frozensets(shifted) == brute_shift(to_frozensets(fam), i)
    assert len(shifted) == len(fam)
    assert set(shadow(shifted).members) <= set(shift(shadow(fam), i).members)


@given(families(max_n=8), st.data())
def test_shadow_bound_holds(fam, data):
    q = data.draw(st.integers(0, fam.m))
    assert shadow_bound_report(fam, q).holds


@pytest.mark.parametrize("size,m,x", [(6, 2, 4), (1, 2, 2), (35, 3, 7)])
def test_real_binomial_inverse_examples(size, m, x):
    assert abs(real_binomial_inverse(size, m) - x) < 1e-9 * x


def test_shadow_bound_examples():
    full = SetFamily.of(4, 2, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    rep = shadow_bound_report(full, 1)
    assert rep.lhs == 4 and abs(rep.slack) < Fraction(1, 10**9)
    rep = shadow_bound_report(SetFamily.of(4, 2, [(1, 2)]), 1)
    assert rep.lhs == 2 and abs(rep.slack) < Fraction(1, 10**9)
    rep = shadow_bound_report(SetFamily.of(4, 2, [(1, 2), (3, 4)]), 1)
    assert rep.lhs == 4
    root = (1 + mpmath.sqrt(17)) / 2
    assert abs(float(rep.rhs) - float(root)) < 1e-12


def test_vertex_iso_examples(b32, b53):
    rep = vertex_iso_report(b32, b32.vset_of((1, 2)), "i")
    assert (rep.lhs, rep.rhs, rep.slack) == (2, Fraction(3, 2), Fraction(1, 2))
    for variant in ("i", "ii", "iii"):
        rep = vertex_iso_report(b32, 0, variant)
        assert rep.lhs == 0 and rep.rhs == 0
    rep = vertex_iso_report(b53, b53.vset_of((1, 2, 3), (1, 2, 4)), "i")
    assert (rep.lhs, rep.rhs, rep.slack) == (5, 4, 1)
    with pytest.raises(WrongLayer):
        vertex_iso_report(b32, b32.vset_of((1,)), "i")


def test_vertex_iso_exhaustive_b53(b53):
    upper = list(range(b53.n_lower, b53.num_vertices))
    for code in range(1 << len(upper)):
        a = sum(1 << upper[i] for i in range(len(upper)) if code >> i & 1)
        for variant in ("i", "iii"):
            rep = vertex_iso_report(b53, a, variant)
            assert rep.holds or not rep.hypothesis_met


def test_triplet_examples(b32):
    a = b32.vset_of((1, 2))
    rep = adjacent_triplet_report(b32, a)
    assert (rep.lhs, rep.rhs) == (2, 2)
    rep = adjacent_triplet_report(b32, b32.upper_mask)
    assert (rep.lhs, rep.rhs) == (0, 0)
    assert triplet_identity_check(b32, a) == (2, 2)
    assert triplet_identity_check(b32, b32.upper_mask) == (12, 12)
    assert triplet_identity_check(b32, 0) == (0, 0)


def test_bey_examples(b32):
    rep = bey_bound_report(b32, b32.vset_of((1, 2)))
    assert (rep.lhs, rep.rhs) == (2, 2) and rep.holds
    rep = bey_bound_report(b32, b32.upper_mask)
    assert (rep.lhs, rep.rhs) == (12, 12) and rep.holds
    assert bey_bound_report(b32, 0).slack == 0


def test_edge_iso_examples(b32, b53):
    rep = edge_iso_report(b32, 0, [])
    assert rep.lhs == 0 and rep.holds
    edge = (b32.vertex(0b001), b32.vertex(0b011))
    rep = edge_iso_report(b32, b32.vset_of((1, 2)), [edge])
    assert (rep.lhs, rep.rhs) == (1, 1)
    rep = edge_iso_report(b53, b53.vset_of((1, 2, 3)), [])
    assert (rep.lhs, rep.rhs, rep.slack) == (6, Fraction(5, 4), Fraction(19, 4))
    bad = [(b32.vertex(0b001), b32.vertex(0b011)), (b32.vertex(0b010), b32.vertex(0b011))]
    with pytest.raises(NotInducedMatching):
        edge_iso_report(b32, b32.vset_of((1, 2)), bad)


@given(st.integers(0, 2**10 - 1))
def test_identities_on_b53(code):
    g = build_layer_graph(5, 3)
    upper = range(g.n_lower, g.num_vertices)
    a = sum(1 << v for i, v in enumerate(upper) if code >> i & 1)
    lhs, rhs = triplet_identity_check(g, a)
    assert lhs == rhs
    assert bey_bound_report(g, a).holds
    assert adjacent_triplet_report(g, a).holds
    assert edge_iso_report(g, a, []).holds


def test_random_families_corpus_seeded():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(2, 12)
        m = rng.randint(1, n)
        members = {sum(1 << x for x in rng.sample(range(n), m)) for _ in range(rng.randint(0, 30))}
        fam = SetFamily(n, m, tuple(members))
        for i in range(2, n + 1):
            assert set(shadow(shift(fam, i)).members) <= set(shift(shadow(fam), i).members)
