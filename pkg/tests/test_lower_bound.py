import math
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from midlayer.errors import DirectionsNotDistinct, InvalidDefects, InvalidParameter, NotMaximal, SinkAborted
from midlayer.layer_graph import build_layer_graph, canonical_matching, middle_layer_graph
from midlayer.lower_bound import (
    ConstructionParams,
    blocked_edges,
    c6_blocks,
    c6_pattern_audit,
    completion_is_unique,
    defect_rate,
    enumerate_construction_m0,
    enumerate_constructions,
    find_defect_placement,
    generate_construction,
    lower_bound_value,
    sample_construction_m0,
    small_k_estimate,
    subset_distance,
)
from midlayer.mis_engine import is_maximal


def collect_m0(g, direction):
    out = []
    enumerate_construction_m0(g, direction, out.append)
    return out


def test_generate_examples(b32):
    m = canonical_matching(b32, 2)
    s = generate_construction(b32, ConstructionParams(2, (), (1,) * len(m)))
    assert s == b32.upper_mask
    outs = {generate_construction(b32, ConstructionParams(2, (), (a, b))) for a in (0, 1) for b in (0, 1)}
    assert len(outs) == 4


def test_defect_validation():
    g = middle_layer_graph(4)
    up = g.vertex(0b0011110)
    far_low = g.vertex(0b1110000)  # distance 5, not 3
    with pytest.raises(InvalidDefects):
        generate_construction(g, ConstructionParams(4, ((up, far_low),), (), 10))


def test_fast_path_matches_generic(b53):
    for k in range(1, 6):
        m = canonical_matching(b53, k)
        fast = collect_m0(b53, k)
        for bits in (0, 1, 5, 2 ** len(m) - 1):
            choices = tuple(bits >> j & 1 for j in range(len(m)))
            assert fast[bits] == generate_construction(b53, ConstructionParams(k, (), choices))


@pytest.mark.parametrize("n,k_layer", [(3, 2), (5, 3)])
def test_m0_outputs_maximal_and_distinct(n, k_layer):
    g = build_layer_graph(n, k_layer)
    for direction in range(1, n + 1):
        outs = collect_m0(g, direction)
        assert len(outs) == 2 ** comb(n - 1, k_layer - 1)
        assert len(set(outs)) == len(outs)
        assert all(is_maximal(g, s) for s in outs)


def test_union_over_directions_equals_all_mis(b32, b53, mis_b32, mis_b53):
    for g, all_mis in ((b32, mis_b32), (b53, mis_b53)):
        union = set()
        for k in range(1, g.n + 1):
            union.update(collect_m0(g, k))
        assert union == set(all_mis)


def test_sink_abort(b32):
    with pytest.raises(SinkAborted):
        enumerate_construction_m0(b32, 1, lambda s: False)


def test_samples_d4():
    g = middle_layer_graph(4)
    draws = sample_construction_m0(g, 1, 500, seed=3)
    assert draws == sample_construction_m0(g, 1, 500, seed=3)
    for bits, s in draws:
        assert is_maximal(g, s)
    by_bits = dict(draws)
    assert len(set(by_bits.values())) == len(by_bits)


def test_defect_placement_and_constructions():
    g = middle_layer_graph(4)
    placed = find_defect_placement(g, 1, 1)
    assert placed is not None and len(placed) == 1
    assert find_defect_placement(g, 1, 2) is None
    outs = []
    total = enumerate_constructions(g, 1, placed, outs.append, budget=1 << 15)
    assert total == len(outs) == 2 ** (comb(6, 3) - 6)
    assert all(is_maximal(g, s) for s in outs[:200])


def test_relaxed_two_defects():
    g = middle_layer_graph(5)
    placed = find_defect_placement(g, 1, 2, min_distance=6)
    assert placed is not None
    up_a, up_b = (g.subsets[u] for u, _ in placed)
    assert subset_distance(up_a, up_b) >= 6
    params = ConstructionParams(1, placed, tuple(None if b else 0 for b in blocked_edges(g, 1, placed)), 6)
    assert params.relaxed
    s = generate_construction(g, params)
    assert is_maximal(g, s)
    assert isinstance(completion_is_unique(g, params), bool)


def test_lower_bound_value_examples():
    v = lower_bound_value(2, 0)
    assert v.exact_terms == (Fraction(4),)
    assert v.log2_value == 2
    assert defect_rate(2) == Fraction(1, 4)
    y10 = defect_rate(10)
    assert y10 == Fraction(81 * comb(18, 9), 2**19)
    v = lower_bound_value(10)
    assert v.taylor_remainder_bound < 1e-3
    assert v.to_json()["schema"] == "v1"
    with pytest.raises(InvalidParameter):
        lower_bound_value(3, 10)


@given(st.integers(2, 12), st.integers(0, 20))
def test_partial_sums_increase(d, m):
    m = min(m, d * d - 1)
    low = lower_bound_value(d, m, precision_bits=64)
    high = lower_bound_value(d, m + 1, precision_bits=64)
    assert high.log2_value >= low.log2_value
    assert low.log2_value >= comb(2 * d - 2, d - 1)


def test_c6_blocks_partition(b53):
    blocks = list(c6_blocks(b53, 1, 2, 3))
    assert len(blocks) == comb(2, 1)
    with pytest.raises(DirectionsNotDistinct):
        list(c6_blocks(b53, 1, 1, 2))


def test_c6_audit_all_mis(b32, b53, mis_b32, mis_b53):
    for g, all_mis in ((b32, mis_b32), (b53, mis_b53)):
        for mis in all_mis:
            _, violations = c6_pattern_audit(g, mis, 1, 2, 3)
            assert violations == 0
    with pytest.raises(NotMaximal):
        c6_pattern_audit(b32, 0, 1, 2, 3)


def test_small_k_examples():
    est = small_k_estimate(10, 2, samples=100, seed=1)
    assert est.per_vertex_bad == Fraction(1, 1024)
    assert small_k_estimate(4, 1, samples=10).degenerate
    est = small_k_estimate(12, 3, samples=10_000, seed=7)
    sigma = math.sqrt(0.25 / est.samples)
    assert est.empirical_fail_rate <= float(est.bad_prob_bound) + 3 * sigma
