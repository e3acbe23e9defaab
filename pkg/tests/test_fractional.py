"""Edge gadgets, boosting, fractional verification, clique sampling."""

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliqueforge.fractional import (
    CliqueWeighting,
    boost,
    edge_gadget,
    fractional_kq_decomposition,
    fractional_problems,
    parse_weighting,
    sample_regular_cliques,
    serialize_weighting,
    two_layer_boost,
    verify_fractional,
)
from cliqueforge.randgraphs import gnp, stream
from cliqueforge.solver import enumerate_cliques

from oracles import complete_graph


# ===================================================================
# Edge gadgets
# ===================================================================


def gadget_loads_are_exact(gad):
    """Property (i) rechecked by direct summation over psi."""
    universe = tuple(sorted(set(gad.e) | set(gad.j)))
    for sub in itertools.combinations(universe, gad.r):
        want = Fraction(1) if sub == tuple(sorted(gad.e)) else Fraction(0)
        load = sum(
            (v for h, v in gad.psi.items() if set(sub) <= set(h)),
            start=Fraction(0),
        )
        assert load == want
        assert gad.load(sub) == want


def test_edge_gadget_3_2():
    gad = edge_gadget(3, 2)
    gadget_loads_are_exact(gad)
    assert gad.max_abs <= 8
    assert gad.bound_ok
    assert len(gad.psi) == math.comb(5, 3)


@pytest.mark.parametrize("q, r", [(3, 1), (3, 2), (4, 2), (5, 2), (4, 3)])
def test_edge_gadget_families(q, r):
    gad = edge_gadget(q, r)
    gadget_loads_are_exact(gad)
    assert gad.max_abs <= 2**r * math.factorial(r) or not gad.bound_ok


def test_edge_gadget_transport_to_other_labels():
    gad = edge_gadget(3, 2, e=(9, 5), j=(1, 2, 3))
    assert gad.e == (5, 9)
    gadget_loads_are_exact(gad)
    # same weight multiset as the canonical gadget
    canon = edge_gadget(3, 2)
    assert sorted(gad.psi.values()) == sorted(canon.psi.values())


def test_edge_gadget_input_validation():
    with pytest.raises(ValueError):
        edge_gadget(2, 2)
    with pytest.raises(ValueError):
        edge_gadget(3, 0)
    with pytest.raises(ValueError):
        edge_gadget(3, 2, e=(0, 1), j=(1, 2, 3))  # overlap
    with pytest.raises(ValueError):
        edge_gadget(3, 2, e=(0, 1, 2), j=(3, 4, 5))  # |e| != r


# ===================================================================
# Weightings
# ===================================================================


def test_weighting_loads_and_merge():
    w = CliqueWeighting(
        3, {(0, 1, 2): Fraction(1, 2), (2, 1, 0): Fraction(1, 4), (1, 2, 3): 1}
    )
    assert len(w) == 2  # duplicate clique keys merge
    assert w.edge_load(0, 1) == Fraction(3, 4)
    assert w.edge_load(1, 2) == Fraction(7, 4)
    assert w.edge_load(0, 3) == 0
    assert w.min_weight() == Fraction(3, 4)
    with pytest.raises(ValueError):
        CliqueWeighting(3, {(0, 1): 1})


def test_weighting_round_trip():
    w = CliqueWeighting(3, {(0, 1, 2): Fraction(-1, 3), (1, 2, 4): Fraction(5, 7)})
    back = parse_weighting(serialize_weighting(w))
    assert back.q == w.q and back.weights == w.weights


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3\n",
        "3 2\n0 1 2 1/2\n",  # count mismatch
        "3 1\n0 1 2\n",  # missing weight
        "3 1\n0 1 x 1/2\n",  # bad vertex
        "3 2\n0 1 2 1/2\n0 1 2 1/2\n",  # duplicate clique
    ],
)
def test_parse_weighting_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_weighting(text)


# ===================================================================
# Boosting
# ===================================================================


def test_k7_uniform_fractional_decomposition():
    g = complete_graph(7)
    res = fractional_kq_decomposition(g, 3)
    assert res.max_deviation == 0
    assert res.in_range
    assert len(res.weighting) == 35
    assert set(res.weighting.weights.values()) == {Fraction(1, 5)}
    assert verify_fractional(g, res.weighting, "decomposition")


def test_boost_identity_on_dense_instances():
    hits = 0
    for seed in range(40):
        g = gnp(11, Fraction(9, 10), seed)
        try:
            res = fractional_kq_decomposition(g, 3)
        except ValueError:
            continue  # an edge missed every 5-clique; recipe out of scope
        hits += 1
        assert res.max_deviation >= 0
        loads = res.weighting.loads()
        assert all(loads[e] == 1 for e in g.sorted_edges())
    assert hits >= 30


def test_boost_rejects_unreachable_edges():
    # K_4 has 3-cliques but no 5-clique through any edge
    with pytest.raises(ValueError, match="no .q.2.-clique"):
        fractional_kq_decomposition(complete_graph(4), 3)


def test_boost_validates_inputs():
    g = complete_graph(7)
    h = enumerate_cliques(g, 3)
    qs = enumerate_cliques(g, 5)
    with pytest.raises(ValueError):
        boost(g, 3, h, qs, 1, 0)
    with pytest.raises(ValueError):
        boost(g, 3, h, [(0, 1, 2, 3)], 1, 5)  # not a (q+2)-set
    with pytest.raises(ValueError):
        boost(g, 3, h[:-1], qs, 1, 5)  # missing q-subset


def test_boost_with_nonuniform_targets():
    g = complete_graph(7)
    h = enumerate_cliques(g, 3)
    qs = enumerate_cliques(g, 5)
    targets = {e: Fraction(1, 2) for e in g.sorted_edges()}
    res = boost(g, 3, h, qs, targets, 5)
    assert all(res.weighting.edge_load(*e) == Fraction(1, 2) for e in g.sorted_edges())
    assert verify_fractional(g, res.weighting, "packing")


def test_two_layer_boost_round():
    g = complete_graph(7)
    h = enumerate_cliques(g, 3)
    qs = enumerate_cliques(g, 5)
    # first layer: half of the uniform decomposition on a clique subset
    first = CliqueWeighting(3, {c: Fraction(1, 10) for c in h[::2]})
    res = two_layer_boost(g, 3, first, h, qs, Fraction(1, 2), 5)
    assert all(res.weighting.edge_load(*e) == 1 for e in g.sorted_edges())
    with pytest.raises(ValueError):
        two_layer_boost(g, 3, first, h, qs, 2, 5)


# ===================================================================
# Verification and sampling
# ===================================================================


def test_fractional_problems_modes():
    g = complete_graph(3)
    w = CliqueWeighting(3, {(0, 1, 2): Fraction(1, 2)})
    assert fractional_problems(g, w, "packing") == []
    assert any("load" in p for p in fractional_problems(g, w, "decomposition"))
    bad = CliqueWeighting(3, {(0, 1, 2): Fraction(-1, 2)})
    assert any("negative" in p for p in fractional_problems(g, bad, "packing"))
    notc = CliqueWeighting(3, {(0, 1, 3): Fraction(1, 2)})
    problems = fractional_problems(complete_graph(3), notc, "packing")
    assert any("not a clique" in p for p in problems)
    with pytest.raises(ValueError):
        fractional_problems(g, w, "fractional")


def test_sampling_uniform_k7():
    res = fractional_kq_decomposition(complete_graph(7), 3)
    # psi D/2 = 1 for D = 10: every clique selected, degrees exact
    out = sample_regular_cliques(res.weighting, 10, stream(1, "sample"))
    assert len(out.selected) == 35
    assert out.max_deviation == 0
    assert all(d == 5 for d in out.edge_degrees.values())


def test_sampling_is_deterministic_and_bounded():
    res = fractional_kq_decomposition(complete_graph(7), 3)
    a = sample_regular_cliques(res.weighting, 5, stream(3, "sample"))
    b = sample_regular_cliques(res.weighting, 5, stream(3, "sample"))
    assert a.selected == b.selected
    assert a.max_deviation == max(
        abs(a.edge_degrees.get(e, 0) - Fraction(5, 2))
        for e in itertools.combinations(range(7), 2)
    )
    with pytest.raises(ValueError):
        sample_regular_cliques(res.weighting, 11, stream(3, "sample"))
