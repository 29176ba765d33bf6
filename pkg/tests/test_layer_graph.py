import itertools
import json
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from midlayer.errors import BudgetExceeded, DirectionOutOfRange, InvalidLayer, NotSelfComplementary
from midlayer.layer_graph import (
    build_layer_graph,
    canonical_matching,
    dump_graph_json,
    edge_direction,
    format_subset,
    graph_from_json,
    is_linked,
    linked_components,
    partner_closure,
    subset_bits,
    vertex_complement_map,
)
from oracles import brute_linked, distance_matrix


def test_b32_vertex_order(b32):
    assert [format_subset(s) for s in b32.subsets] == ["{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}"]
    assert b32.num_edges == 6


@pytest.mark.parametrize("n,k", [(3, 2), (5, 3), (7, 4), (6, 2), (4, 1), (4, 4)])
def test_sizes_and_edges_match_definition(n, k):
    g = build_layer_graph(n, k)
    assert len(g.upper) == comb(n, k) and len(g.lower) == comb(n, k - 1)
    for i, x in enumerate(g.subsets):
        for j, y in enumerate(g.subsets):
            expect = (x ^ y).bit_count() == 1 and x.bit_count() != y.bit_count()
            assert g.has_edge(i, j) == expect


@pytest.mark.parametrize("d", [2, 3, 4])
def test_middle_layer_graph_is_regular(d):
    g = build_layer_graph(2 * d - 1, d)
    assert {nb.bit_count() for nb in g.adj} == {d}


def test_invalid_layers():
    with pytest.raises(InvalidLayer):
        build_layer_graph(3, 0)
    with pytest.raises(InvalidLayer):
        build_layer_graph(3, 4)
    with pytest.raises(BudgetExceeded):
        build_layer_graph(30, 15)


def test_json_round_trip(b53):
    text = dump_graph_json(b53)
    data = json.loads(text)
    assert data["schema"] == "v1" and data["n"] == 5
    assert all(v == v.lower() and not v.startswith("0") for v in data["vertices"])
    assert graph_from_json(data).subsets == b53.subsets


@pytest.mark.parametrize("n,k", [(3, 2), (5, 3), (7, 4)])
def test_canonical_matching_is_induced_and_sized(n, k):
    g = build_layer_graph(n, k)
    for direction in range(1, n + 1):
        m = canonical_matching(g, direction)
        assert len(m) == comb(n - 1, k - 1)
        vm = m.vertices
        for x, y in m.edges:
            assert g.subsets[x] ^ g.subsets[y] == 1 << (direction - 1)
            assert edge_direction(g, x, y) == direction
            # induced: each matched vertex sees exactly its partner inside V(M)
            assert (g.adj[x] & vm).bit_count() == 1 and (g.adj[y] & vm).bit_count() == 1
    with pytest.raises(DirectionOutOfRange):
        canonical_matching(g, 0)


def test_b32_canonical_matching(b32):
    m = canonical_matching(b32, 1)
    pairs = {(format_subset(b32.subsets[u]), format_subset(b32.subsets[v])) for u, v in m.edges}
    assert pairs == {("{1,2}", "{2}"), ("{1,3}", "{3}")}


def test_linked_components_against_distance_oracle(b53):
    dist = distance_matrix(b53.adj)
    for r in (1, 2, 3):
        for combo in itertools.combinations(range(b53.num_vertices), 3):
            mask = sum(1 << v for v in combo)
            assert is_linked(b53, mask, r) == brute_linked(dist, list(combo), r)


@given(st.integers(min_value=0, max_value=(1 << 20) - 1), st.integers(min_value=1, max_value=4))
def test_components_partition_and_are_separated(mask, r):
    g = build_layer_graph(5, 3)
    comps = linked_components(g, mask, r)
    assert sum(comps) == mask
    for a, b in itertools.combinations(comps, 2):
        assert a & b == 0
        for u in range(g.num_vertices):
            if a >> u & 1:
                assert not g.ball(u, r) & b


def test_distance_is_symmetric_difference(b53):
    dist = distance_matrix(b53.adj)
    for i, x in enumerate(b53.subsets):
        for j, y in enumerate(b53.subsets):
            assert dist[i][j] == (x ^ y).bit_count()
            assert b53.distance(i, j) == dist[i][j]


def test_complement_map(b53):
    perm = vertex_complement_map(b53)
    assert sorted(perm) == list(range(b53.num_vertices))
    for u, v in b53.edges():
        assert b53.has_edge(perm[u], perm[v])
    with pytest.raises(NotSelfComplementary):
        vertex_complement_map(build_layer_graph(6, 3))


def test_partner_closure_examples(b32):
    assert partner_closure(b32, 1, 0) == 0
    v12 = b32.vertex(subset_bits((1, 2)))
    assert b32.format_set(partner_closure(b32, 1, 1 << v12)) == "{{2}, {1,2}}"


@given(st.integers(min_value=0, max_value=(1 << 20) - 1), st.integers(min_value=0, max_value=(1 << 20) - 1),
       st.integers(min_value=1, max_value=5))
def test_partner_closure_idempotent_monotone(a, b, direction):
    g = build_layer_graph(5, 3)
    vm = canonical_matching(g, direction).vertices
    ta = partner_closure(g, direction, a)
    assert partner_closure(g, direction, ta) == ta
    assert ta & ~vm == 0 and (a & vm) & ~ta == 0
    assert ta.bit_count() % 2 == 0
    assert partner_closure(g, direction, a) & ~partner_closure(g, direction, a | b) == 0
