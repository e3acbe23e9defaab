"""Brute-force reference implementations the tests check against.

Everything here recomputes results from first principles by exhaustive
enumeration, so it stays trivially auditable.  Nothing is imported from
the package beyond the Graph container itself.
"""

from fractions import Fraction
from itertools import combinations
import math

from cliqueforge.graphs import Graph


# ===================================================================
# Small graph builders
# ===================================================================


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def induced_edges(g: Graph, vs) -> int:
    s = set(vs)
    return sum(1 for u, v in g.edges if u in s and v in s)


# ===================================================================
# Densities by subset enumeration
# ===================================================================


def brute_rooted_density(g: Graph, roots) -> Fraction:
    """max e(H') / |V(H') \\ R|; induced subgraphs dominate, and adding
    all of R never hurts, so vertex subsets of V - R suffice."""
    rs = set(roots)
    others = [v for v in range(g.n) if v not in rs]
    best = None
    for k in range(1, len(others) + 1):
        for extra in combinations(others, k):
            val = Fraction(induced_edges(g, rs | set(extra)), k)
            if best is None or val > best:
                best = val
    return best


def brute_2_density(g: Graph) -> Fraction:
    best = None
    for k in range(3, g.n + 1):
        for vs in combinations(range(g.n), k):
            val = Fraction(induced_edges(g, vs) - 1, k - 2)
            if best is None or val > best:
                best = val
    return best


def brute_rooted_2_density(g: Graph, roots) -> Fraction:
    return max(brute_rooted_density(g, roots), brute_2_density(g))


# ===================================================================
# Divisibility and leaves
# ===================================================================


def brute_leave_bound(g, q: int) -> int:
    """First k >= 0 with k = e(G) mod binom(q,2) and 2k >= residue sum,
    found by linear scan rather than ceiling arithmetic."""
    period = math.comb(q, 2)
    rsum = sum(d % (q - 1) for d in g.degrees())
    for k in range(g.m + period + 1):
        if k % period == g.m % period and 2 * k >= rsum:
            return k
    raise AssertionError("scan bound too small")


def brute_cliques(g: Graph, q: int) -> list[tuple[int, ...]]:
    return [
        c
        for c in combinations(range(g.n), q)
        if all((u, v) in g.edges for u, v in combinations(c, 2))
    ]


def brute_min_leave(g: Graph, q: int) -> int:
    """Exact minimum leave by depth-first search over clique subsets.

    Only for tiny graphs; branches on the lexicographically least
    uncovered edge, which every optimal packing either covers or skips.
    """
    cliques = brute_cliques(g, q)
    by_edge: dict[tuple[int, int], list[int]] = {e: [] for e in g.edges}
    pairs = [tuple(combinations(c, 2)) for c in cliques]
    for i, ps in enumerate(pairs):
        for e in ps:
            by_edge[e].append(i)
    edges = sorted(g.edges)
    best = [g.m]

    def rec(pos: int, used: set, skipped: int) -> None:
        if skipped >= best[0]:
            return
        while pos < len(edges) and edges[pos] in used:
            pos += 1
        if pos == len(edges):
            best[0] = skipped
            return
        e = edges[pos]
        for i in by_edge[e]:
            if not used.intersection(pairs[i]):
                rec(pos + 1, used | set(pairs[i]), skipped)
        rec(pos + 1, used, skipped + 1)

    rec(0, set(), 0)
    return best[0]
