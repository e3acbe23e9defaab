"""Exact rooted density functionals over small graphs.

All values are exact rationals (fractions.Fraction); floating point is
never used here.  The three functionals:

  max_rooted_density(H, R)   max e(H') / |V(H') \\ R| over subgraphs H'
                             with V(H') \\ R nonempty,
  max_2_density(H)           max (e(H') - 1) / (v(H') - 2) over v(H') >= 3,
  rooted_2_density(H, R)     the max of the two.

Roots must be independent in H.  Maximizers can be taken edge-maximal on
their vertex set, so enumeration runs over vertex subsets with induced
edges.  Two exact reductions keep the enumeration feasible on gadget
unions well past the raw cap:

  * the rooted functional splits over connected components of H - R
    (components meet only at roots, roots span no edges, and a ratio of
    sums is at most the max of the ratios), and
  * the 2-density functional splits over 2-connected blocks (a maximizer
    with a cutvertex loses to one of its sides by the mediant
    inequality; forests and matchings are handled by closed forms).

Each enumerated piece must stay within the enumeration limit (default
24 vertices); larger pieces raise rather than approximate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .graphs import Graph

__all__ = [
    "DEFAULT_ENUMERATION_LIMIT",
    "DensityValue",
    "RootedGraph",
    "ConcatenationBound",
    "max_rooted_density",
    "max_2_density",
    "rooted_2_density",
    "rooted_degeneracy",
    "check_concatenation",
    "evaluate_rooted_ratio",
    "evaluate_two_density_ratio",
    "blocks",
]

DEFAULT_ENUMERATION_LIMIT = 24


class DensityValue:
    """An exact density value with the witness vertex set attaining it.

    kind is "rooted" or "two_density"; the witness re-evaluates to the
    value through evaluate_rooted_ratio / evaluate_two_density_ratio.
    """

    __slots__ = ("value", "witness", "kind")

    def __init__(self, value: Fraction, witness: tuple[int, ...], kind: str):
        self.value = value
        self.witness = witness
        self.kind = kind

    def __repr__(self):
        return f"DensityValue({self.value}, witness={self.witness}, kind={self.kind})"

    def __eq__(self, other):
        if isinstance(other, DensityValue):
            return (self.value, self.witness, self.kind) == (
                other.value,
                other.witness,
                other.kind,
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.witness, self.kind))


class RootedGraph:
    """A graph with an independent set of root vertices."""

    __slots__ = ("graph", "roots")

    def __init__(self, graph: Graph, roots: Iterable[int]):
        rs = frozenset(roots)
        for r in rs:
            if not 0 <= r < graph.n:
                raise ValueError(f"root {r} out of range for n={graph.n}")
        _check_roots_independent(graph, rs)
        self.graph = graph
        self.roots = rs

    def __repr__(self):
        return f"RootedGraph(n={self.graph.n}, m={self.graph.m}, roots={sorted(self.roots)})"


def _check_roots_independent(g: Graph, roots: frozenset[int]) -> None:
    for u, v in g.edges:
        if u in roots and v in roots:
            raise ValueError(f"roots are not independent: edge ({u}, {v})")


def evaluate_rooted_ratio(g: Graph, roots: Iterable[int], witness: Iterable[int]) -> Fraction:
    """e(G[W]) / |W \\ R| for re-verifying a rooted witness."""
    w = set(witness)
    rs = set(roots)
    free = len(w - rs)
    if free == 0:
        raise ValueError("witness has no non-root vertices")
    e = sum(1 for u, v in g.edges if u in w and v in w)
    return Fraction(e, free)


def evaluate_two_density_ratio(g: Graph, witness: Iterable[int]) -> Fraction:
    """(e(G[W]) - 1) / (|W| - 2) for re-verifying a 2-density witness."""
    w = set(witness)
    if len(w) < 3:
        raise ValueError("2-density witness needs at least 3 vertices")
    e = sum(1 for u, v in g.edges if u in w and v in w)
    return Fraction(e - 1, len(w) - 2)


# ===================================================================
# Structure: components off the roots, biconnected blocks
# ===================================================================


def _components_off_roots(g: Graph, roots: frozenset[int]) -> list[list[int]]:
    adj = g.adjacency()
    seen: set[int] = set()
    comps = []
    for start in range(g.n):
        if start in roots or start in seen:
            continue
        comp = [start]
        seen.add(start)
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in adj[v]:
                if w not in roots and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    frontier.append(w)
        comps.append(sorted(comp))
    return comps


def blocks(g: Graph) -> list[list[int]]:
    """Vertex sets of the biconnected blocks (bridges appear as pairs)."""
    adj = {v: sorted(g.adjacency()[v]) for v in range(g.n)}
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out: list[list[int]] = []
    counter = 0
    for root in range(g.n):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        estack: list[tuple[int, int]] = []
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in disc:
                    estack.append((v, w))
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            stack.pop()
            if stack:
                pv = stack[-1][0]
                if low[v] < low[pv]:
                    low[pv] = low[v]
                if low[v] >= disc[pv]:
                    # one block finished: pop up to and including (pv, v)
                    verts: set[int] = set()
                    while estack:
                        a, b = estack.pop()
                        verts.add(a)
                        verts.add(b)
                        if (a, b) == (pv, v):
                            break
                    if verts:
                        out.append(sorted(verts))
    return out


# ===================================================================
# Subset enumeration (Gray code, integer cross-multiplied compares)
# ===================================================================


def _best_rooted_subset(g, comp, roots, best):
    """Scan nonempty subsets of one component for max e(T u R)/|T|.

    best is (num, den, witness_tuple) or None; returns the updated best.
    Roots are always included: they add edges and never enter the
    denominator, and root-root edges do not exist.
    """
    adj = g.adjacency()
    k = len(comp)
    index = {v: i for i, v in enumerate(comp)}
    nbr_bits = [0] * k
    root_deg = [0] * k
    for i, v in enumerate(comp):
        for w in adj[v]:
            if w in roots:
                root_deg[i] += 1
            elif w in index:
                nbr_bits[i] |= 1 << index[w]
    s = 0
    members = 0
    e_inner = 0
    e_root = 0
    for code in range(1, 1 << k):
        b = (code ^ (code >> 1)) ^ ((code - 1) ^ ((code - 1) >> 1))
        i = b.bit_length() - 1
        if s & b:
            s ^= b
            e_inner -= (nbr_bits[i] & s).bit_count()
            e_root -= root_deg[i]
            members -= 1
        else:
            e_inner += (nbr_bits[i] & s).bit_count()
            e_root += root_deg[i]
            members += 1
            s ^= b
        num = e_inner + e_root
        if best is not None:
            cmp = num * best[1] - best[0] * members
            if cmp < 0:
                continue
            if cmp == 0:
                wit = tuple(comp[j] for j in range(k) if s >> j & 1)
                if wit >= best[2]:
                    continue
                best = (num, members, wit)
                continue
        best = (num, members, tuple(comp[j] for j in range(k) if s >> j & 1))
    return best


def _best_two_density_subset(g, block, best):
    """Scan subsets of one block (size >= 3) for max (e-1)/(v-2)."""
    adj = g.adjacency()
    k = len(block)
    index = {v: i for i, v in enumerate(block)}
    nbr_bits = [0] * k
    for i, v in enumerate(block):
        for w in adj[v]:
            if w in index:
                nbr_bits[i] |= 1 << index[w]
    s = 0
    members = 0
    edges = 0
    for code in range(1, 1 << k):
        b = (code ^ (code >> 1)) ^ ((code - 1) ^ ((code - 1) >> 1))
        i = b.bit_length() - 1
        if s & b:
            s ^= b
            edges -= (nbr_bits[i] & s).bit_count()
            members -= 1
        else:
            edges += (nbr_bits[i] & s).bit_count()
            members += 1
            s ^= b
        if members < 3:
            continue
        num = edges - 1
        den = members - 2
        if best is not None:
            cmp = num * best[1] - best[0] * den
            if cmp < 0:
                continue
            if cmp == 0:
                wit = tuple(block[j] for j in range(k) if s >> j & 1)
                if wit >= best[2]:
                    continue
                best = (num, den, wit)
                continue
        best = (num, den, tuple(block[j] for j in range(k) if s >> j & 1))
    return best


def _take_better(best, num, den, wit):
    if best is None:
        return (num, den, wit)
    cmp = num * best[1] - best[0] * den
    if cmp > 0 or (cmp == 0 and wit < best[2]):
        return (num, den, wit)
    return best


# ===================================================================
# Public functionals
# ===================================================================


def max_rooted_density(
    g: Graph, roots: Iterable[int], limit: int = DEFAULT_ENUMERATION_LIMIT
) -> DensityValue:
    """m(H, R): max e(H') / |V(H') \\ R|, exact, with witness."""
    rs = frozenset(roots)
    _check_roots_independent(g, rs)
    comps = _components_off_roots(g, rs)
    if not comps:
        raise ValueError("V(H) \\ R is empty")
    for comp in comps:
        if len(comp) > limit:
            raise ValueError(
                f"component of H - R has {len(comp)} vertices, "
                f"enumeration limit is {limit}"
            )
    best = None
    for comp in comps:
        best = _best_rooted_subset(g, comp, rs, best)
    witness = tuple(sorted(set(best[2]) | rs))
    return DensityValue(Fraction(best[0], best[1]), witness, "rooted")


def max_2_density(g: Graph, limit: int = DEFAULT_ENUMERATION_LIMIT) -> DensityValue:
    """m_2(H): max (e(H') - 1) / (v(H') - 2) over v(H') >= 3, exact."""
    if g.n < 3:
        raise ValueError(f"2-density needs at least 3 vertices, got {g.n}")
    big_blocks = [b for b in blocks(g) if len(b) >= 3]
    for b in big_blocks:
        if len(b) > limit:
            raise ValueError(
                f"block has {len(b)} vertices, enumeration limit is {limit}"
            )
    best = None
    for b in big_blocks:
        best = _best_two_density_subset(g, b, best)
    # Closed-form candidates for the cut/forest/matching cases.  When a
    # block exists its value exceeds 1, so these only decide sparse
    # graphs, but they are always compared for safety.
    adj = g.adjacency()
    two_path = None
    for v in range(g.n):
        if len(adj[v]) >= 2:
            ns = sorted(adj[v])[:2]
            two_path = tuple(sorted([v, ns[0], ns[1]]))
            break
    if two_path is not None:
        best = _take_better(best, 1, 1, two_path)
    elif g.m >= 2:
        # max degree <= 1, so the two smallest edges are disjoint
        es = g.sorted_edges()[:2]
        best = _take_better(best, 1, 2, tuple(sorted(es[0] + es[1])))
    elif g.m == 1:
        u, v = g.sorted_edges()[0]
        w = min(x for x in range(g.n) if x not in (u, v))
        best = _take_better(best, 0, 1, tuple(sorted((u, v, w))))
    else:
        # edgeless: (0 - 1) / (v' - 2) is maximized by all of V
        best = _take_better(best, -1, g.n - 2, tuple(range(g.n)))
    return DensityValue(Fraction(best[0], best[1]), best[2], "two_density")


def rooted_2_density(
    g: Graph, roots: Iterable[int], limit: int = DEFAULT_ENUMERATION_LIMIT
) -> DensityValue:
    """m_2(H, R) = max(m(H, R), m_2(H)); ties prefer the rooted witness."""
    rooted = max_rooted_density(g, roots, limit=limit)
    two = max_2_density(g, limit=limit)
    if two.value > rooted.value:
        return two
    return rooted


def rooted_degeneracy(g: Graph, roots: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Min-degree peeling of V(H) \\ R; returns (degeneracy, peel order).

    Degrees count edges into roots.  If the peeling never sees degree
    above d, then every subgraph has a non-root vertex of degree <= d,
    which gives m_2(H, R) <= d for d >= 2 (e(H') <= d (v' - 2) whenever
    H' keeps >= 2 roots, and e(H') <= d v' - binom(d+1, 2) in general).
    """
    rs = frozenset(roots)
    _check_roots_independent(g, rs)
    deg = {v: g.degree(v) for v in range(g.n) if v not in rs}
    adj = g.adjacency()
    order = []
    value = 0
    remaining = set(deg)
    while remaining:
        v = min(remaining, key=lambda x: (deg[x], x))
        if deg[v] > value:
            value = deg[v]
        order.append(v)
        remaining.remove(v)
        for w in adj[v]:
            if w in remaining:
                deg[w] -= 1
    return value, tuple(order)


class ConcatenationBound:
    """Pieces of the two-step density bound.

    For H rooted at R and an induced proper subgraph H1 containing R,
    m_2(H, R) <= max(m_2(H1, R), m_2(H - E(H1), V(H1))), and the same
    holds for the plain rooted functional.  bound is the max of the two
    piece values.
    """

    __slots__ = ("inner", "outer", "bound")

    def __init__(self, inner: DensityValue, outer: DensityValue, bound: Fraction):
        self.inner = inner
        self.outer = outer
        self.bound = bound

    def __repr__(self):
        return f"ConcatenationBound(inner={self.inner.value}, outer={self.outer.value})"


def check_concatenation(
    g: Graph,
    roots: Iterable[int],
    inner_vertices: Iterable[int],
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> ConcatenationBound:
    """Validate the concatenation premises and compute both pieces."""
    rs = frozenset(roots)
    inner = frozenset(inner_vertices)
    if not rs <= inner:
        raise ValueError("inner vertex set must contain the roots")
    if not inner < frozenset(range(g.n)):
        raise ValueError("inner vertex set must be a proper subset of V(H)")
    inner_edges = {e for e in g.edges if e[0] in inner and e[1] in inner}
    h1 = Graph(g.n, inner_edges)
    h2 = Graph(g.n, g.edges - inner_edges)
    d1 = rooted_2_density(h1, rs, limit=limit)
    d2 = rooted_2_density(h2, inner, limit=limit)
    return ConcatenationBound(d1, d2, max(d1.value, d2.value))
