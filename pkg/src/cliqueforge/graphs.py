"""Core graph types and K_q divisibility arithmetic.

Simple graphs live on a dense vertex range 0..n-1 with edges stored as
sorted pairs; isolated vertices are first-class (fixers must span their
host).  A multigraph variant carries per-pair multiplicities for the
divisibility fixer blueprints.  The optimal leave number implemented here
is the universal lower bound on the leave of any K_q packing: the least
k with k = e(G) mod binom(q,2) and 2k >= sum_v (d(v) mod (q-1)).
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

__all__ = [
    "Graph",
    "MultiGraph",
    "Packing",
    "PackingReport",
    "DegreeResidueProfile",
    "edge_key",
    "graph_from_edges",
    "union",
    "subtract",
    "relabel",
    "is_kq_divisible",
    "degree_residue_profile",
    "optimal_leave_number",
    "verify_packing",
    "leave_lower_bound_check",
    "parse_graph",
    "serialize_graph",
    "parse_multigraph",
    "serialize_multigraph",
    "parse_packing",
    "serialize_packing",
]


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Canonical sorted form of an edge pair."""
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


# ===================================================================
# Graph
# ===================================================================


class Graph:
    """Immutable simple graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        es = set()
        for u, v in edges:
            e = edge_key(u, v)
            if not (0 <= e[0] and e[1] < n):
                raise ValueError(f"edge {e} out of range for n={n}")
            es.add(e)
        self.n = n
        self.edges: frozenset[tuple[int, int]] = frozenset(es)
        self._adj = None

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict[int, set[int]]:
        """Adjacency sets, built once and cached.  Do not mutate."""
        if self._adj is None:
            adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
            for u, v in self.edges:
                adj[u].add(v)
                adj[v].add(u)
            self._adj = adj
        return self._adj

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])

    def degrees(self) -> list[int]:
        adj = self.adjacency()
        return [len(adj[v]) for v in range(self.n)]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    return Graph(n, edges)


def union(*graphs: Graph, expect_edge_disjoint: bool = False) -> Graph:
    """Union on a shared vertex universe (n = max of inputs)."""
    n = max((g.n for g in graphs), default=0)
    if expect_edge_disjoint:
        total = sum(g.m for g in graphs)
        out = set().union(*(g.edges for g in graphs))
        if len(out) != total:
            raise ValueError("graphs share edges but were required disjoint")
        return Graph(n, out)
    return Graph(n, set().union(*(g.edges for g in graphs)))


def subtract(g: Graph, edges: Iterable[tuple[int, int]]) -> Graph:
    drop = {edge_key(u, v) for u, v in edges}
    return Graph(g.n, g.edges - drop)


def relabel(g: Graph, mapping: dict[int, int], n: int) -> Graph:
    """Relabel through an injective vertex map into a universe of size n."""
    if len(set(mapping.values())) != len(mapping):
        raise ValueError("relabel mapping is not injective")
    return Graph(n, ((mapping[u], mapping[v]) for u, v in g.edges))


# ===================================================================
# MultiGraph
# ===================================================================


class MultiGraph:
    """Loopless multigraph: per-pair multiplicities, zero entries omitted."""

    __slots__ = ("n", "mult")

    def __init__(self, n: int, mult: dict[tuple[int, int], int] | None = None):
        self.n = n
        self.mult: dict[tuple[int, int], int] = {}
        for (u, v), k in (mult or {}).items():
            if k < 0:
                raise ValueError(f"negative multiplicity at {(u, v)}")
            if k == 0:
                continue
            e = edge_key(u, v)
            if e[1] >= n:
                raise ValueError(f"edge {e} out of range for n={n}")
            self.mult[e] = self.mult.get(e, 0) + k

    @property
    def m(self) -> int:
        return sum(self.mult.values())

    def multiplicity(self, u, v) -> int:
        return self.mult.get(edge_key(u, v), 0)

    def degree(self, v: int) -> int:
        return sum(k for (a, b), k in self.mult.items() if v in (a, b))

    def degrees(self) -> list[int]:
        d = [0] * self.n
        for (u, v), k in self.mult.items():
            d[u] += k
            d[v] += k
        return d

    def to_graph(self) -> Graph:
        """Forget multiplicities (every fat pair becomes one edge)."""
        return Graph(self.n, self.mult.keys())

    def __repr__(self):
        return f"MultiGraph(n={self.n}, m={self.m})"


# ===================================================================
# Divisibility
# ===================================================================


class DegreeResidueProfile:
    """Degree residues mod (q-1) and edge residue mod binom(q,2)."""

    __slots__ = ("q", "degree_residues", "edge_residue")

    def __init__(self, q, degree_residues, edge_residue):
        self.q = q
        self.degree_residues: tuple[int, ...] = tuple(degree_residues)
        self.edge_residue: int = edge_residue

    def is_zero(self) -> bool:
        return self.edge_residue == 0 and not any(self.degree_residues)

    def __repr__(self):
        return (
            f"DegreeResidueProfile(q={self.q}, "
            f"edge_residue={self.edge_residue}, "
            f"degree_residues={self.degree_residues})"
        )


def _check_q(q: int) -> None:
    if q < 3:
        raise ValueError(f"q must be at least 3, got {q}")


def degree_residue_profile(g: Graph | MultiGraph, q: int) -> DegreeResidueProfile:
    _check_q(q)
    return DegreeResidueProfile(
        q,
        (d % (q - 1) for d in g.degrees()),
        g.m % math.comb(q, 2),
    )


def is_kq_divisible(g: Graph | MultiGraph, q: int) -> bool:
    """binom(q,2) divides e(G) and (q-1) divides every degree."""
    return degree_residue_profile(g, q).is_zero()


def optimal_leave_number(g: Graph | MultiGraph, q: int) -> int:
    """Least k = e(G) mod binom(q,2) with 2k >= sum of degree residues.

    Every K_q packing of G leaves at least this many edges uncovered:
    the union of the packing is K_q-divisible-by-parts, so the leave H
    keeps e(H) = e(G) mod binom(q,2) and d_H(v) = d_G(v) mod (q-1), and
    2 e(H) = sum_v d_H(v) >= sum_v (d_G(v) mod (q-1)).
    """
    prof = degree_residue_profile(g, q)
    period = math.comb(q, 2)
    lb = -(-sum(prof.degree_residues) // 2)  # ceil
    k = prof.edge_residue
    if k < lb:
        k += period * (-(-(lb - k) // period))
    return k


# ===================================================================
# Packings
# ===================================================================


class Packing:
    """A set of q-vertex cliques, stored as sorted vertex tuples."""

    __slots__ = ("q", "cliques")

    def __init__(self, q: int, cliques: Iterable[Iterable[int]]):
        _check_q(q)
        cs = []
        for c in cliques:
            t = tuple(sorted(c))
            if len(t) != q or len(set(t)) != q:
                raise ValueError(f"clique {t} does not have {q} distinct vertices")
            cs.append(t)
        self.q = q
        self.cliques: tuple[tuple[int, ...], ...] = tuple(cs)

    def __len__(self):
        return len(self.cliques)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.cliques)

    def __eq__(self, other):
        return (
            isinstance(other, Packing)
            and self.q == other.q
            and sorted(self.cliques) == sorted(other.cliques)
        )

    def __hash__(self):
        return hash((self.q, tuple(sorted(self.cliques))))

    def __repr__(self):
        return f"Packing(q={self.q}, k={len(self.cliques)})"

    def covered_edges(self) -> set[tuple[int, int]]:
        out = set()
        for c in self.cliques:
            for i in range(len(c)):
                for j in range(i + 1, len(c)):
                    out.add((c[i], c[j]))
        return out


class PackingReport:
    __slots__ = ("valid", "covered", "leave", "problems")

    def __init__(self, valid, covered, leave, problems):
        self.valid: bool = valid
        self.covered: int = covered
        self.leave: Graph = leave
        self.problems: tuple[str, ...] = tuple(problems)

    def __repr__(self):
        return (
            f"PackingReport(valid={self.valid}, covered={self.covered}, "
            f"leave={self.leave.m}, problems={len(self.problems)})"
        )


def verify_packing(g: Graph, p: Packing) -> PackingReport:
    """Check edge-disjointness and membership; report the leave graph.

    The report is valid iff every clique lies in G and no edge is used
    twice.  The leave is G minus all covered edges (computed even when
    invalid, from the cliques that do fit).
    """
    problems = []
    seen: set[tuple[int, int]] = set()
    for c in p.cliques:
        if c[-1] >= g.n:
            problems.append(f"clique {c} has a vertex outside 0..{g.n - 1}")
            continue
        for i in range(len(c)):
            for j in range(i + 1, len(c)):
                e = (c[i], c[j])
                if e not in g.edges:
                    problems.append(f"clique {c} uses missing edge {e}")
                elif e in seen:
                    problems.append(f"edge {e} covered twice (clique {c})")
                else:
                    seen.add(e)
    leave = Graph(g.n, g.edges - seen)
    return PackingReport(not problems, len(seen), leave, problems)


def leave_lower_bound_check(g: Graph, p: Packing) -> bool:
    """True when the packing's leave meets the optimal leave bound."""
    rep = verify_packing(g, p)
    if not rep.valid:
        return False
    return rep.leave.m >= optimal_leave_number(g, p.q)


# ===================================================================
# Text formats
# ===================================================================
# Graphs: header "n m", then m lines "u v".  Output is lexicographic.
# Multigraphs: header "n m k" (m = edge count with multiplicity, k =
# distinct pairs), then k lines "u v mult".
# Packings: header "q k", then k lines of q vertex ids.


def _parse_ints(line: str, lineno: int, count: int, what: str) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise ValueError(
            f"line {lineno}: expected {count} fields for {what}, got {len(parts)}"
        )
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise ValueError(f"line {lineno}: non-integer field in {what!r}: {line!r}")


def _content_lines(text: str):
    """(lineno, line) pairs, 1-based, skipping blanks and # comments."""
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield i, line


def parse_graph(text: str) -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise ValueError("line 1: empty graph file, expected 'n m' header")
    lineno, header = lines[0]
    n, m = _parse_ints(header, lineno, 2, "graph header")
    if len(lines) - 1 != m:
        raise ValueError(
            f"line {lineno}: header promises {m} edges, file has {len(lines) - 1}"
        )
    edges = []
    for lineno, line in lines[1:]:
        u, v = _parse_ints(line, lineno, 2, "edge")
        if u == v:
            raise ValueError(f"line {lineno}: loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"line {lineno}: edge ({u}, {v}) out of range for n={n}")
        edges.append((u, v))
    g = Graph(n, edges)
    if g.m != m:
        raise ValueError(f"duplicate edges: header promises {m}, found {g.m} distinct")
    return g


def serialize_graph(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(out) + "\n"


def parse_multigraph(text: str) -> MultiGraph:
    lines = list(_content_lines(text))
    if not lines:
        raise ValueError("line 1: empty multigraph file, expected 'n m k' header")
    lineno, header = lines[0]
    n, m, k = _parse_ints(header, lineno, 3, "multigraph header")
    if len(lines) - 1 != k:
        raise ValueError(
            f"line {lineno}: header promises {k} pairs, file has {len(lines) - 1}"
        )
    mult: dict[tuple[int, int], int] = {}
    for lineno, line in lines[1:]:
        u, v, c = _parse_ints(line, lineno, 3, "weighted edge")
        if u == v:
            raise ValueError(f"line {lineno}: loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"line {lineno}: edge ({u}, {v}) out of range for n={n}")
        if c <= 0:
            raise ValueError(f"line {lineno}: multiplicity must be positive, got {c}")
        e = edge_key(u, v)
        if e in mult:
            raise ValueError(f"line {lineno}: pair {e} listed twice")
        mult[e] = c
    mg = MultiGraph(n, mult)
    if mg.m != m:
        raise ValueError(f"header promises {m} edges with multiplicity, found {mg.m}")
    return mg


def serialize_multigraph(mg: MultiGraph) -> str:
    out = [f"{mg.n} {mg.m} {len(mg.mult)}"]
    out.extend(f"{u} {v} {c}" for (u, v), c in sorted(mg.mult.items()))
    return "\n".join(out) + "\n"


def parse_packing(text: str) -> Packing:
    lines = list(_content_lines(text))
    if not lines:
        raise ValueError("line 1: empty packing file, expected 'q k' header")
    lineno, header = lines[0]
    q, k = _parse_ints(header, lineno, 2, "packing header")
    if q < 3:
        raise ValueError(f"line {lineno}: q must be at least 3, got {q}")
    if len(lines) - 1 != k:
        raise ValueError(
            f"line {lineno}: header promises {k} cliques, file has {len(lines) - 1}"
        )
    cliques = []
    for lineno, line in lines[1:]:
        vs = _parse_ints(line, lineno, q, "clique")
        if len(set(vs)) != q:
            raise ValueError(f"line {lineno}: repeated vertex in clique {vs}")
        cliques.append(vs)
    return Packing(q, cliques)


def serialize_packing(p: Packing) -> str:
    out = [f"{p.q} {len(p.cliques)}"]
    out.extend(" ".join(str(v) for v in c) for c in sorted(p.cliques))
    return "\n".join(out) + "\n"
