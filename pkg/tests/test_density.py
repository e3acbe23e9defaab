"""Rooted density functionals against subset-enumeration oracles.

The gadget values pinned here were computed by exhaustive enumeration:
for the anti-edge rooted at its missing pair the rooted 2-density is
(q+1)/2 for q in 3..6; for the fake edge rooted at the pair alone the
true values are 4/3 (q=3) and 25/12 (q=4), while (q+1)/2 is attained
exactly when the hubs are rooted as well.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliqueforge.density import (
    blocks,
    check_concatenation,
    evaluate_rooted_ratio,
    evaluate_two_density_ratio,
    max_2_density,
    max_rooted_density,
    rooted_2_density,
    rooted_degeneracy,
    RootedGraph,
)
from cliqueforge.gadgets import anti_edge, fake_edge
from cliqueforge.graphs import Graph

from conftest import graphs
from oracles import (
    brute_2_density,
    brute_rooted_2_density,
    brute_rooted_density,
    complete_graph,
    cycle_graph,
    path_graph,
)


def independent_roots(g):
    """Greedy independent set to root hypothesis-drawn graphs at."""
    adj = g.adjacency()
    roots = []
    for v in range(g.n):
        if all(w not in adj[v] for w in roots):
            roots.append(v)
        if len(roots) == 2:
            break
    return roots


# ===================================================================
# Oracle agreement
# ===================================================================


@given(graphs(7, min_n=2))
@settings(max_examples=120, deadline=None)
def test_rooted_density_matches_oracle(g):
    roots = independent_roots(g)
    if len(roots) == g.n:
        return
    got = max_rooted_density(g, roots)
    assert got.value == brute_rooted_density(g, roots)
    assert evaluate_rooted_ratio(g, roots, got.witness) == got.value


@given(graphs(7, min_n=3))
@settings(max_examples=120, deadline=None)
def test_two_density_matches_oracle(g):
    got = max_2_density(g)
    assert got.value == brute_2_density(g)
    assert evaluate_two_density_ratio(g, got.witness) == got.value


@given(graphs(7, min_n=3))
@settings(max_examples=100, deadline=None)
def test_rooted_2_density_is_the_max(g):
    roots = independent_roots(g)
    if len(roots) == g.n:
        return
    got = rooted_2_density(g, roots)
    assert got.value == brute_rooted_2_density(g, roots)


def test_witness_kind_prefers_rooted_on_ties():
    # a triangle hung off one root: two-density 2 beats rooted 4/3
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (1, 3)])
    got = rooted_2_density(g, [0])
    assert got.value == Fraction(2)
    assert got.kind == "two_density"
    # anti-edge(4) beside a disjoint K_4: both functionals hit 5/2
    gad = anti_edge(4)
    shifted = [(u + 4, v + 4) for u, v in complete_graph(4).edges]
    g = Graph(8, list(gad.graph.edges) + shifted)
    got = rooted_2_density(g, gad.roots)
    assert got.value == Fraction(5, 2)
    assert got.kind == "rooted"


# ===================================================================
# Pinned closed forms
# ===================================================================


@pytest.mark.parametrize("q", [3, 4, 5, 6])
def test_complete_graph_two_density(q):
    # m_2(K_q) = (binom(q,2) - 1) / (q - 2)
    want = Fraction(q * (q - 1) // 2 - 1, q - 2)
    assert max_2_density(complete_graph(q)).value == want


def test_cycle_and_path_two_density():
    assert max_2_density(cycle_graph(6)).value == Fraction(5, 4)
    assert max_2_density(path_graph(5)).value == Fraction(1, 1)


@pytest.mark.parametrize("q", [3, 4, 5, 6])
def test_anti_edge_rooted_2_density(q):
    gad = anti_edge(q)
    got = rooted_2_density(gad.graph, gad.roots)
    assert got.value == Fraction(q + 1, 2)


@pytest.mark.parametrize("q, want", [(3, Fraction(4, 3)), (4, Fraction(25, 12))])
def test_fake_edge_rooted_2_density_at_pair(q, want):
    gad = fake_edge(q)
    assert rooted_2_density(gad.graph, gad.roots).value == want


@pytest.mark.parametrize("q", [3, 4])
def test_fake_edge_rooted_2_density_with_hubs(q):
    gad = fake_edge(q)
    roots = gad.roots + tuple(range(2, q))
    assert rooted_2_density(gad.graph, roots).value == Fraction(q + 1, 2)


def test_fake_edge_beyond_enumeration_limit_raises():
    gad = fake_edge(5)
    with pytest.raises(ValueError, match="limit"):
        rooted_2_density(gad.graph, gad.roots)


# ===================================================================
# Structure and errors
# ===================================================================


def test_roots_must_be_independent():
    g = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        max_rooted_density(g, [0, 1])
    with pytest.raises(ValueError):
        RootedGraph(g, [0, 1])
    with pytest.raises(ValueError):
        RootedGraph(g, [5])


def test_everything_rooted_is_an_error():
    g = Graph(2, [])
    with pytest.raises(ValueError):
        max_rooted_density(g, [0, 1])


def test_two_density_needs_three_vertices():
    with pytest.raises(ValueError):
        max_2_density(Graph(2, [(0, 1)]))


def test_enumeration_limit_is_per_block():
    # a long path has only 2-vertex blocks, so any limit >= 2 is fine
    assert max_2_density(path_graph(40), limit=8).value == Fraction(1, 1)
    # rooted enumeration is per component of H - R and honors the limit
    with pytest.raises(ValueError, match="limit"):
        max_rooted_density(path_graph(40), [])
    got = max_rooted_density(path_graph(12), [], limit=12)
    assert got.value == Fraction(11, 12)


def test_blocks_of_two_triangles_sharing_a_vertex():
    g = Graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    got = sorted(sorted(b) for b in blocks(g) if len(b) >= 3)
    assert got == [[0, 1, 2], [2, 3, 4]]


@given(graphs(7, min_n=3))
@settings(max_examples=80, deadline=None)
def test_degeneracy_bounds_rooted_2_density(g):
    roots = independent_roots(g)
    if len(roots) == g.n:
        return
    value, order = rooted_degeneracy(g, roots)
    assert sorted(order) == [v for v in range(g.n) if v not in roots]
    if value >= 2:
        assert rooted_2_density(g, roots).value <= value


@given(graphs(7, min_n=4))
@settings(max_examples=60, deadline=None)
def test_concatenation_upper_bound(g):
    roots = independent_roots(g)
    if len(roots) >= g.n - 1:
        return
    inner = sorted(set(roots) | {min(v for v in range(g.n) if v not in roots)})
    bound = check_concatenation(g, roots, inner)
    assert rooted_2_density(g, roots).value <= bound.bound


def test_concatenation_premise_errors():
    g = complete_graph(4)
    with pytest.raises(ValueError):
        check_concatenation(g, [0], [1, 2])
    with pytest.raises(ValueError):
        check_concatenation(g, [0], [0, 1, 2, 3])
