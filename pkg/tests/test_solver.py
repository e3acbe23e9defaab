"""Exact search: clique enumeration, decomposition, minimum leave."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliqueforge.graphs import Graph, optimal_leave_number, verify_packing
from cliqueforge.solver import (
    CliqueIndex,
    SolveBudget,
    enumerate_cliques,
    exact_cover_solutions,
    exact_decomposition,
    min_leave_packing,
)

from conftest import graphs
from oracles import brute_cliques, brute_min_leave, complete_graph, cycle_graph


# ===================================================================
# Enumeration
# ===================================================================


@given(graphs(8), st.integers(3, 5))
@settings(max_examples=120, deadline=None)
def test_enumerate_cliques_matches_oracle(g, q):
    got = enumerate_cliques(g, q)
    assert got == brute_cliques(g, q)
    assert got == sorted(got)


def test_enumerate_cliques_counts_on_k6():
    g = complete_graph(6)
    assert len(enumerate_cliques(g, 3)) == 20
    assert len(enumerate_cliques(g, 4)) == 15
    assert len(enumerate_cliques(g, 6)) == 1
    with pytest.raises(ValueError):
        enumerate_cliques(g, 1)


def test_clique_index_edge_lookup():
    g = complete_graph(5)
    index = CliqueIndex(g, 3)
    assert len(index) == 10
    through = index.through_edge(0, 1)
    assert all((0, 1) in index.clique_edges(cid) for cid in through)
    assert len(through) == 3


# ===================================================================
# Exact decomposition
# ===================================================================


def test_steiner_triple_system_on_k7():
    res = exact_decomposition(complete_graph(7), 3)
    assert res.status == "found"
    assert len(res.packing) == 7
    rep = verify_packing(complete_graph(7), res.packing)
    assert rep.valid and rep.leave.m == 0


def test_k9_triple_decomposition():
    res = exact_decomposition(complete_graph(9), 3)
    assert res.status == "found"
    assert len(res.packing) == 12


def test_k13_quadruple_decomposition():
    res = exact_decomposition(complete_graph(13), 4)
    assert res.status == "found"
    rep = verify_packing(complete_graph(13), res.packing)
    assert rep.valid and rep.leave.m == 0


def test_indivisible_graph_has_no_decomposition():
    assert exact_decomposition(complete_graph(4), 3).status == "none"


def test_divisible_but_undecomposable():
    # two disjoint triangles joined by a 3-edge matching: divisible
    # (m = 9, all degrees even) but triangle-free off the ends
    g = Graph(
        6,
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
    )
    res = exact_decomposition(g, 3)
    assert res.status == "none"


def test_empty_graph_decomposes_trivially():
    res = exact_decomposition(Graph(4, []), 3)
    assert res.status == "found" and len(res.packing) == 0


def test_budget_exhaustion_reports_budget():
    res = exact_decomposition(complete_graph(15), 3, SolveBudget(max_nodes=3))
    assert res.status == "budget"
    assert res.packing is None
    assert res.nodes >= 3


# ===================================================================
# Minimum leave
# ===================================================================


@pytest.mark.parametrize(
    "build, want",
    [
        (lambda: complete_graph(4), 3),
        (lambda: complete_graph(5), 4),
        (lambda: complete_graph(6), 3),
        (lambda: complete_graph(7), 0),
        (lambda: cycle_graph(5), 5),
    ],
)
def test_min_leave_pinned_values(build, want):
    g = build()
    res = min_leave_packing(g, 3)
    assert res.status == "optimal"
    assert res.leave == want
    rep = verify_packing(g, res.packing)
    assert rep.valid and rep.leave.m == res.leave


@given(graphs(7))
@settings(max_examples=50, deadline=None)
def test_min_leave_matches_oracle(g):
    res = min_leave_packing(g, 3)
    assert res.status == "optimal"
    assert res.leave == brute_min_leave(g, 3)
    assert res.leave >= optimal_leave_number(g, 3)


def test_min_leave_respects_budget():
    res = min_leave_packing(complete_graph(9), 3, SolveBudget(max_nodes=2))
    assert res.status == "budget"
    # the greedy seed is still a valid packing
    assert verify_packing(complete_graph(9), res.packing).valid


def test_exact_cover_generic_interface():
    # cover {0,1,2} by rows; secondary column 3 may be used at most once
    rows = [
        ("a", (0, 1)),
        ("b", (2, 3)),
        ("c", (1, 2)),
        ("d", (0, 3)),
        ("e", (2,)),
    ]
    sols = list(exact_cover_solutions(range(3), [3], rows, SolveBudget(max_nodes=10_000)))
    assert sorted(sorted(s) for s in sols) == [["a", "b"], ["a", "e"], ["c", "d"]]
