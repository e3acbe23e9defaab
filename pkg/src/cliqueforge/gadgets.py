"""Divisibility gadgets and absorber constructions.

Everything here is built explicitly, with certificates (clique lists
that decompose the advertised unions) emitted by the constructors and
machine-verified before a bundle is returned.  The ledger of residues
that makes the gadgets work:

  anti-edge on a pair S: binom(q,2)-1 edges (= -1), root degrees q-2
  (= -1 mod q-1), internal degrees q-1 (= 0);
  fake edge on S: one anti-edge per pair of S u {hubs} except S itself,
  giving (binom(q,2)-1)^2 edges (= +1), root degrees (q-2)^2 (= +1),
  hub degrees (q-1)(q-2) (= 0).

The connecting pairs inside a fake edge are not edges of the gadget;
including them would break all three residues at once.
"""

from __future__ import annotations

from typing import Iterable

from .graphs import Graph, Packing, is_kq_divisible, union
from .solver import (
    BudgetExceeded,
    SolveBudget,
    enumerate_cliques,
    exact_cover_solutions,
    exact_decomposition,
    verify_absorber,
    verify_transformer,
)

__all__ = [
    "Gadget",
    "TransformerBundle",
    "AbsorberBundle",
    "NablaExpansion",
    "anti_edge",
    "fake_edge",
    "nabla",
    "nabla_expansion",
    "tilde_nabla",
    "star_transformer",
    "anti_clique_absorber",
    "nabla_absorber",
    "trivial_absorber",
    "absorber_certificates_disjoint",
    "absorber_nonroot_degrees",
    "OmniVerifyReport",
    "verify_omni_absorber",
    "OmniAbsorber",
    "naive_omni_absorber",
    "serialize_bundle",
    "load_bundle",
]


class _Fresh:
    """Monotone vertex id allocator."""

    __slots__ = ("next",)

    def __init__(self, start: int):
        self.next = start

    def take(self, k: int) -> tuple[int, ...]:
        ids = tuple(range(self.next, self.next + k))
        self.next += k
        return ids


def _clique_pairs(vs: Iterable[int]):
    vs = sorted(vs)
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def _anti_edge_pairs(u: int, v: int, internals: tuple[int, ...]):
    """Edge set of K_q minus u-v on {u, v} u internals."""
    out = [p for p in _clique_pairs((u, v) + internals) if p != (min(u, v), max(u, v))]
    return out


# ===================================================================
# Basic gadgets
# ===================================================================


class Gadget:
    """A rooted gadget graph with a kind tag."""

    __slots__ = ("kind", "q", "graph", "roots")

    def __init__(self, kind: str, q: int, graph: Graph, roots: tuple[int, ...]):
        self.kind = kind
        self.q = q
        self.graph = graph
        self.roots = roots

    def __repr__(self):
        return f"Gadget({self.kind}, q={self.q}, n={self.graph.n}, m={self.graph.m})"


def anti_edge(q: int) -> Gadget:
    """K_q minus one edge, rooted at the missing pair (vertices 0, 1)."""
    if q < 3:
        raise ValueError(f"q must be at least 3, got {q}")
    internals = tuple(range(2, q))
    return Gadget("anti_edge", q, Graph(q, _anti_edge_pairs(0, 1, internals)), (0, 1))


def fake_edge(q: int) -> Gadget:
    """Anti-edges on every pair of {roots} u {q-2 hubs} except the root pair.

    Rooted at vertices 0, 1; hubs are 2..q-1.  Edge, root-degree and
    hub-degree residues are +1, +1, 0, the exact opposite of deleting
    one edge at the roots.
    """
    if q < 3:
        raise ValueError(f"q must be at least 3, got {q}")
    hubs = tuple(range(2, q))
    fresh = _Fresh(q)
    edges: list[tuple[int, int]] = []
    for a, b in _clique_pairs((0, 1) + hubs):
        if (a, b) == (0, 1):
            continue
        edges.extend(_anti_edge_pairs(a, b, fresh.take(q - 2)))
    return Gadget("fake_edge", q, Graph(fresh.next, edges), (0, 1))


# ===================================================================
# Nabla
# ===================================================================


class NablaExpansion:
    """One anti-edge per base edge, all internals fresh and disjoint.

    anti maps each base edge to its ordered internal vertex tuple.  The
    union base u graph decomposes into one K_q per base edge (the edge
    plus its anti-edge), available as tilde_decomposition().
    """

    __slots__ = ("q", "base", "graph", "anti")

    def __init__(self, q: int, base: Graph, graph: Graph, anti: dict):
        self.q = q
        self.base = base
        self.graph = graph
        self.anti = anti

    @property
    def full(self) -> Graph:
        return union(self.base, self.graph, expect_edge_disjoint=True)

    def tilde_decomposition(self) -> Packing:
        return Packing(
            self.q, [e + self.anti[e] for e in sorted(self.anti)]
        )

    def clique_roots(self, clique: tuple[int, ...]) -> tuple[int, ...]:
        """Vertex set of the expansion of one base clique (for rooting)."""
        vs = set(clique)
        for e in _clique_pairs(clique):
            vs.update(self.anti[e])
        return tuple(sorted(vs))


def nabla_expansion(q: int, base: Graph) -> NablaExpansion:
    fresh = _Fresh(base.n)
    anti: dict[tuple[int, int], tuple[int, ...]] = {}
    edges: list[tuple[int, int]] = []
    for e in base.sorted_edges():
        ws = fresh.take(q - 2)
        anti[e] = ws
        edges.extend(_anti_edge_pairs(e[0], e[1], ws))
    return NablaExpansion(q, base, Graph(fresh.next, edges), anti)


def nabla(q: int, base: Graph) -> Graph:
    """The edge-by-edge anti-edge replacement of base (divisibility kept)."""
    return nabla_expansion(q, base).graph


def tilde_nabla(q: int, base: Graph) -> Graph:
    """base u nabla(base); decomposes into one K_q per base edge."""
    return nabla_expansion(q, base).full


# ===================================================================
# Star transformers
# ===================================================================


class TransformerBundle:
    """A transformer T between two stars L, L' on shared root leaves.

    x is the center of L, x_prime the center of L'; leaf_roots are the
    q-1 shared leaves.  decomp_tl decomposes T u L, decomp_tl_prime
    decomposes T u L'.  internals lists the non-root vertices.
    """

    __slots__ = (
        "q",
        "k",
        "t",
        "l",
        "l_prime",
        "roots",
        "x",
        "x_prime",
        "leaf_roots",
        "internals",
        "decomp_tl",
        "decomp_tl_prime",
    )

    def __init__(self, q, k, t, l, l_prime, x, x_prime, leaf_roots, internals,
                 decomp_tl, decomp_tl_prime):
        self.q = q
        self.k = k
        self.t = t
        self.l = l
        self.l_prime = l_prime
        self.x = x
        self.x_prime = x_prime
        self.leaf_roots = leaf_roots
        self.internals = internals
        self.roots = tuple(sorted(leaf_roots + (x, x_prime)))
        self.decomp_tl = decomp_tl
        self.decomp_tl_prime = decomp_tl_prime

    def __repr__(self):
        return f"TransformerBundle(q={self.q}, k={self.k}, n={self.t.n}, m={self.t.m})"


def _triangle_transformer(k: int) -> TransformerBundle:
    # path v_0..v_{k+1} with both star centers joined to the interior
    if k < 2 or k % 2:
        raise ValueError(f"k must be even and at least 2, got {k}")
    x = k + 2
    xp = k + 3
    n = k + 4
    t_edges = [(i - 1, i) for i in range(1, k + 2)]
    t_edges += [(x, i) for i in range(1, k + 1)]
    t_edges += [(xp, i) for i in range(1, k + 1)]
    l = Graph(n, [(x, 0), (x, k + 1)])
    lp = Graph(n, [(xp, 0), (xp, k + 1)])

    def certs(a, b):
        # a plays the role of x in the L-side decomposition
        tri = [(a, 2 * i, 2 * i + 1) for i in range(k // 2 + 1)]
        tri += [(b, 2 * i - 1, 2 * i) for i in range(1, k // 2 + 1)]
        return Packing(3, tri)

    return TransformerBundle(
        q=3,
        k=k,
        t=Graph(n, t_edges),
        l=l,
        l_prime=lp,
        x=x,
        x_prime=xp,
        leaf_roots=(0, k + 1),
        internals=tuple(range(1, k + 1)),
        decomp_tl=certs(x, xp),
        decomp_tl_prime=certs(xp, x),
    )


def _grid_transformer(q: int) -> TransformerBundle:
    # (q-1) x (q-1) grid: first row holds the shared leaves, rows 2..q-1
    # and all columns are cliques, both centers join rows 2..q-1
    w = q - 1

    def vid(i, j):  # rows and columns 1-based
        return (i - 1) * w + (j - 1)

    x = w * w
    xp = w * w + 1
    n = w * w + 2
    t_edges: list[tuple[int, int]] = []
    for i in range(2, q):
        t_edges.extend(_clique_pairs([vid(i, j) for j in range(1, q)]))
    for j in range(1, q):
        t_edges.extend(_clique_pairs([vid(i, j) for i in range(1, q)]))
    for i in range(2, q):
        for j in range(1, q):
            t_edges.append((x, vid(i, j)))
            t_edges.append((xp, vid(i, j)))
    leaves = tuple(vid(1, j) for j in range(1, q))
    l = Graph(n, [(x, v) for v in leaves])
    lp = Graph(n, [(xp, v) for v in leaves])

    def certs(a, b):
        cols = [
            tuple(sorted([a] + [vid(i, j) for i in range(1, q)])) for j in range(1, q)
        ]
        rows = [
            tuple(sorted([b] + [vid(i, j) for j in range(1, q)])) for i in range(2, q)
        ]
        return Packing(q, cols + rows)

    return TransformerBundle(
        q=q,
        k=None,
        t=Graph(n, t_edges),
        l=l,
        l_prime=lp,
        x=x,
        x_prime=xp,
        leaf_roots=leaves,
        internals=tuple(vid(i, j) for i in range(2, q) for j in range(1, q)),
        decomp_tl=certs(x, xp),
        decomp_tl_prime=certs(xp, x),
    )


def star_transformer(q: int, k: int = 2) -> TransformerBundle:
    """Transformer between the stars K_{1,q-1} of two centers.

    For q = 3 the body is a path of k interior vertices (k even); the
    certificates alternate triangles between the centers.  For q >= 4
    the body is the row/column clique grid and the certificates are the
    columns with one center and the rows with the other.  Certificates
    are verified before returning.
    """
    bundle = _triangle_transformer(k) if q == 3 else _grid_transformer(q)
    problems = verify_transformer(bundle)
    if problems:
        raise AssertionError(f"transformer certificates failed: {problems[:3]}")
    return bundle


def _relabel_packing(p: Packing, mapping: dict[int, int]) -> list[tuple[int, ...]]:
    return [tuple(sorted(mapping[v] for v in c)) for c in p.cliques]


def _relabel_edges(edges, mapping):
    out = []
    for u, v in edges:
        a, b = mapping[u], mapping[v]
        out.append((a, b) if a < b else (b, a))
    return out


# ===================================================================
# Absorbers
# ===================================================================


class AbsorberBundle:
    """An absorber A for a divisible graph L, with both certificates.

    roots = support of L, independent in A.  decomp_a decomposes A and
    decomp_la decomposes L u A.  structure carries construction
    internals for analysis (piece vertex sets, bijections); it is not
    part of the certificate contract.
    """

    __slots__ = ("kind", "q", "l", "a", "roots", "decomp_a", "decomp_la", "structure")

    def __init__(self, kind, q, l, a, roots, decomp_a, decomp_la, structure=None):
        self.kind = kind
        self.q = q
        self.l = l
        self.a = a
        self.roots = roots
        self.decomp_a = decomp_a
        self.decomp_la = decomp_la
        self.structure = structure or {}

    def __repr__(self):
        return (
            f"AbsorberBundle({self.kind}, q={self.q}, roots={len(self.roots)}, "
            f"a_edges={self.a.m})"
        )


def _support(g: Graph) -> tuple[int, ...]:
    return tuple(sorted({v for e in g.edges for v in e}))


def _checked_bundle(bundle: AbsorberBundle) -> AbsorberBundle:
    problems = verify_absorber(bundle)
    if problems:
        raise AssertionError(f"absorber certificates failed: {problems[:3]}")
    return bundle


def trivial_absorber(l: Graph, q: int, budget: SolveBudget | None = None) -> AbsorberBundle:
    """The empty absorber, available exactly when L itself decomposes."""
    res = exact_decomposition(l, q, budget)
    if res.status != "found":
        raise ValueError(
            f"no decomposition of L found (status {res.status}); "
            "the empty absorber requires one"
        )
    return _checked_bundle(
        AbsorberBundle(
            "trivial_absorber",
            q,
            l,
            Graph(l.n, []),
            _support(l),
            Packing(q, []),
            res.packing,
        )
    )


def anti_clique_absorber(q: int, k: int = 2) -> AbsorberBundle:
    """Absorber for L = nabla(K_q) built from a double expansion.

    Layer plan on one vertex universe: S1 = nabla(K_q) is L itself;
    S2 = nabla(S1) is the first absorber layer.  A disjoint primed copy
    S'_0 (a fresh K_q, edges kept) expands twice to S'_1, S'_2, with a
    structural bijection phi: V(S2) -> V(S'_2).  Every edge e of S2
    gets a fresh connector clique K_{q-2} joined to the ends of e and
    of phi(e).  Finally each vertex v of S2 splits its edges into
    groups of q-1, and each (group, connector index) pair receives a
    transformer copy between the stars of v and phi(v) on the matching
    connector vertices.  The two certificates walk the layers in
    opposite directions; both are verified before returning.
    """
    base = Graph(q, _clique_pairs(range(q)))
    ex1 = nabla_expansion(q, base)  # S1 = L
    s1 = ex1.graph
    ex2 = nabla_expansion(q, s1)  # S2
    s2 = ex2.graph

    fresh = _Fresh(s2.n)
    # primed tower: fresh K_q, then two expansions mirroring the unprimed one
    p_base_ids = fresh.take(q)
    beta0 = dict(zip(range(q), p_base_ids))
    sp0 = Graph(fresh.next, _clique_pairs(p_base_ids))

    def mirrored_expansion(ex, beta):
        """Expand the primed image of ex.base, extending beta to V(ex.graph)."""
        anti_p: dict[tuple[int, int], tuple[int, ...]] = {}
        edges: list[tuple[int, int]] = []
        beta_next = dict(beta)
        for e in ex.base.sorted_edges():
            pu, pv = beta[e[0]], beta[e[1]]
            ws = fresh.take(q - 2)
            pe = (pu, pv) if pu < pv else (pv, pu)
            anti_p[pe] = ws
            edges.extend(_anti_edge_pairs(pu, pv, ws))
            for w, pw in zip(ex.anti[e], ws):
                beta_next[w] = pw
        return edges, anti_p, beta_next

    sp1_edges, anti_p1, beta1 = mirrored_expansion(ex1, beta0)
    # second mirror: expand primed S'_1 following the unprimed S2 pattern
    anti_p2: dict[tuple[int, int], tuple[int, ...]] = {}
    sp2_edge_list: list[tuple[int, int]] = []
    beta2 = dict(beta1)
    for e in s1.sorted_edges():
        pu, pv = beta1[e[0]], beta1[e[1]]
        ws = fresh.take(q - 2)
        pe = (pu, pv) if pu < pv else (pv, pu)
        anti_p2[pe] = ws
        sp2_edge_list.extend(_anti_edge_pairs(pu, pv, ws))
        for w, pw in zip(ex2.anti[e], ws):
            beta2[w] = pw

    phi = beta2  # V(S2) -> V(S'_2), a graph isomorphism by construction

    # connectors: one fresh K_{q-2} per edge of S2, joined to both images
    connectors: dict[tuple[int, int], tuple[int, ...]] = {}
    a3_edges: list[tuple[int, int]] = []
    for e in s2.sorted_edges():
        qe = fresh.take(q - 2)
        connectors[e] = qe
        a3_edges.extend(_clique_pairs(qe))
        for end in (e[0], e[1], phi[e[0]], phi[e[1]]):
            a3_edges.extend((min(end, w), max(end, w)) for w in qe)

    # transformer copies
    canonical = star_transformer(q, k)
    groups: dict[int, list[list[tuple[int, int]]]] = {}
    adj_edges: dict[int, list[tuple[int, int]]] = {}
    for e in s2.sorted_edges():
        adj_edges.setdefault(e[0], []).append(e)
        adj_edges.setdefault(e[1], []).append(e)
    for v, es in sorted(adj_edges.items()):
        if len(es) % (q - 1):
            raise AssertionError(f"S2 degree at {v} not divisible by q-1")
        es.sort()
        groups[v] = [es[i : i + q - 1] for i in range(0, len(es), q - 1)]

    a4_edges: list[tuple[int, int]] = []
    cert_unprimed: list[tuple[int, ...]] = []
    cert_primed: list[tuple[int, ...]] = []
    copies = []
    for v in sorted(groups):
        for group in groups[v]:
            for i in range(q - 2):
                mapping = {canonical.x: v, canonical.x_prime: phi[v]}
                for leaf, e in zip(canonical.leaf_roots, group):
                    mapping[leaf] = connectors[e][i]
                internals = fresh.take(len(canonical.internals))
                mapping.update(zip(canonical.internals, internals))
                a4_edges.extend(_relabel_edges(canonical.t.edges, mapping))
                cert_unprimed.extend(_relabel_packing(canonical.decomp_tl, mapping))
                cert_primed.extend(_relabel_packing(canonical.decomp_tl_prime, mapping))
                copies.append(
                    {"v": v, "phi_v": phi[v], "group": tuple(group),
                     "index": i, "internals": internals}
                )

    n = fresh.next
    l = Graph(n, s1.edges)
    sp1 = Graph(n, sp1_edges)
    sp2 = Graph(n, sp2_edge_list)
    a = union(
        Graph(n, s2.edges),
        Graph(n, sp0.edges),
        sp1,
        sp2,
        Graph(n, a3_edges),
        Graph(n, a4_edges),
        expect_edge_disjoint=True,
    )

    def anti_cliques(anti_map):
        return [e + anti_map[e] for e in sorted(anti_map)]

    decomp_la = Packing(
        q,
        anti_cliques(ex2.anti)  # covers S1 (= L) and S2
        + anti_cliques(anti_p1)  # covers S'_0 and S'_1
        + [
            tuple(sorted(connectors[e] + (phi[e[0]], phi[e[1]])))
            for e in s2.sorted_edges()
        ]  # covers S'_2, connector internals, primed joins
        + cert_unprimed,  # covers transformer bodies and unprimed joins
    )
    decomp_a = Packing(
        q,
        [tuple(sorted(p_base_ids))]  # S'_0 as one clique
        + anti_cliques(anti_p2)  # covers S'_1 and S'_2
        + [
            tuple(sorted(connectors[e] + e))
            for e in s2.sorted_edges()
        ]  # covers S2, connector internals, unprimed joins
        + cert_primed,  # covers transformer bodies and primed joins
    )
    structure = {
        "s1": s1,
        "s2": Graph(n, s2.edges),
        "sp0": Graph(n, sp0.edges),
        "sp1": sp1,
        "sp2": sp2,
        "a3": Graph(n, a3_edges),
        "a4": Graph(n, a4_edges),
        "phi": phi,
        "connectors": connectors,
        "copies": copies,
        "k": k if q == 3 else None,
    }
    return _checked_bundle(
        AbsorberBundle(
            "anti_clique_absorber", q, l, a, _support(l), decomp_a, decomp_la, structure
        )
    )


def nabla_absorber(
    l: Graph,
    booster: AbsorberBundle,
    base: AbsorberBundle | None = None,
    budget: SolveBudget | None = None,
) -> AbsorberBundle:
    """Absorber for any divisible L from a base absorber and a booster.

    The booster must be an absorber bundle for nabla(K_q) (the
    anti-clique absorber is one).  A' replaces every edge of L and of
    the base absorber A by an anti-edge, then roots one booster copy on
    the expansion of every clique of the base certificates.  Without a
    base, L itself must decompose (searched here) and A is empty.
    """
    q = booster.q
    if not is_kq_divisible(l, q):
        raise ValueError("L is not divisible")
    if base is not None:
        if base.q != q:
            raise ValueError("base and booster disagree on q")
        if base.l.edges != l.edges:
            raise ValueError("base absorber is not an absorber for this L")
        a0 = base.a
        q1 = base.decomp_a
        q2 = base.decomp_la
        universe = max(l.n, a0.n)
    else:
        res = exact_decomposition(l, q, budget)
        if res.status != "found":
            raise ValueError(
                f"no decomposition of L (status {res.status}); "
                "a base absorber is required"
            )
        a0 = Graph(l.n, [])
        q1 = Packing(q, [])
        q2 = res.packing
        universe = l.n

    la = union(Graph(universe, l.edges), Graph(universe, a0.edges))
    ex = nabla_expansion(q, la)
    fresh = _Fresh(ex.graph.n)

    # booster root layout: canonical nabla(K_q) vertices in a fixed order
    booster_base = Graph(q, _clique_pairs(range(q)))
    booster_ex = nabla_expansion(q, booster_base)
    if booster.l.edges != booster_ex.graph.edges:
        raise ValueError("booster is not an absorber for the canonical nabla(K_q)")
    booster_nonroots = tuple(
        v for v in range(booster.a.n) if v not in set(booster.roots)
    )

    def rooted_copy(clique):
        mapping = dict(zip(range(q), clique))
        for be, ws in booster_ex.anti.items():
            te = (mapping[be[0]], mapping[be[1]])
            te = te if te[0] < te[1] else (te[1], te[0])
            for w, tw in zip(ws, ex.anti[te]):
                mapping[w] = tw
        mapping.update(zip(booster_nonroots, fresh.take(len(booster_nonroots))))
        return mapping

    copy_edges: list[tuple[int, int]] = []
    q1_cliques: list[tuple[int, ...]] = []
    q2_cliques: list[tuple[int, ...]] = []
    for grp, into_q1, into_q2 in ((q2, "b2", "b1"), (q1, "b1", "b2")):
        # copies over Q2 put their absorbed certificate into Q1' and
        # their plain one into Q2'; copies over Q1 do the reverse
        for clique in sorted(grp.cliques):
            mapping = rooted_copy(clique)
            copy_edges.extend(_relabel_edges(booster.a.edges, mapping))
            b1 = _relabel_packing(booster.decomp_a, mapping)
            b2 = _relabel_packing(booster.decomp_la, mapping)
            q1_cliques.extend(b2 if into_q1 == "b2" else b1)
            q2_cliques.extend(b1 if into_q2 == "b1" else b2)

    n = fresh.next
    a_prime = union(
        Graph(n, ex.graph.edges), Graph(n, copy_edges), expect_edge_disjoint=True
    )
    tilde = [e + ex.anti[e] for e in sorted(l.edges)]
    return _checked_bundle(
        AbsorberBundle(
            "nabla_absorber",
            q,
            Graph(n, l.edges),
            a_prime,
            _support(l),
            Packing(q, q1_cliques),
            Packing(q, tilde + q2_cliques),
            {"expansion": ex, "copies": len(q1.cliques) + len(q2.cliques)},
        )
    )


def absorber_certificates_disjoint(bundle: AbsorberBundle) -> bool:
    return not set(bundle.decomp_a.cliques) & set(bundle.decomp_la.cliques)


def absorber_nonroot_degrees(bundle: AbsorberBundle) -> dict[int, int]:
    """Degrees in A of the non-root vertices incident to an A-edge."""
    roots = set(bundle.roots)
    deg: dict[int, int] = {}
    for u, v in bundle.a.edges:
        for w in (u, v):
            if w not in roots:
                deg[w] = deg.get(w, 0) + 1
    return deg


# ===================================================================
# Omni absorbers
# ===================================================================


class OmniVerifyReport:
    """Outcome of checking the omni property subgraph by subgraph.

    failures lists divisible edge subsets refuted by exhausted search
    ("none"); unknown lists those where the budget ran out ("budget").
    refinement is the max number of decompositions any single edge
    appears in, over the successful checks.
    """

    __slots__ = ("ok", "checked", "failures", "unknown", "refinement")

    def __init__(self, ok, checked, failures, unknown, refinement):
        self.ok = ok
        self.checked = checked
        self.failures = failures
        self.unknown = unknown
        self.refinement = refinement

    def __repr__(self):
        return (
            f"OmniVerifyReport(ok={self.ok}, checked={self.checked}, "
            f"failures={len(self.failures)}, unknown={len(self.unknown)}, "
            f"refinement={self.refinement})"
        )


def verify_omni_absorber(
    x: Graph,
    a: Graph,
    q: int,
    cap: int = 10,
    budget_nodes: int = 200_000,
) -> OmniVerifyReport:
    """Check that every divisible subgraph of X decomposes with A.

    Exhaustive over the 2^e(X) edge subsets, so e(X) is capped
    (default 10).  X and A must be edge-disjoint on one universe.
    """
    if x.m > cap:
        raise ValueError(f"e(X) = {x.m} exceeds the verification cap {cap}")
    if x.edges & a.edges:
        raise ValueError("X and A share edges")
    n = max(x.n, a.n)
    failures: list[tuple[tuple, str]] = []
    unknown: list[tuple[tuple, str]] = []
    checked = 0
    edge_uses: dict[tuple[int, int], int] = {}
    xedges = x.sorted_edges()
    for bits in range(1 << x.m):
        subset = tuple(xedges[i] for i in range(x.m) if bits >> i & 1)
        lg = Graph(n, subset)
        if not is_kq_divisible(lg, q):
            continue
        checked += 1
        res = exact_decomposition(
            union(lg, Graph(n, a.edges)), q, SolveBudget(max_nodes=budget_nodes)
        )
        if res.status == "found":
            for c in res.packing.cliques:
                for e in _clique_pairs(c):
                    edge_uses[e] = edge_uses.get(e, 0) + 1
        elif res.status == "none":
            failures.append((subset, "none"))
        else:
            unknown.append((subset, "budget"))
    refinement = max(edge_uses.values(), default=0)
    return OmniVerifyReport(
        not failures and not unknown, checked, failures, unknown, refinement
    )


class OmniAbsorber:
    """Private-absorber union with a per-subgraph decomposition table.

    privates maps each divisible nonempty edge subset to its own piece
    (absorber graph, outside decomposition, inside decomposition).
    """

    __slots__ = ("q", "x", "a", "table", "privates")

    def __init__(self, q, x, a, table, privates):
        self.q = q
        self.x = x
        self.a = a
        self.table: dict[frozenset, Packing] = table
        self.privates: dict[frozenset, tuple[Graph, Packing, Packing]] = privates

    def __repr__(self):
        return f"OmniAbsorber(q={self.q}, a_edges={self.a.m}, entries={len(self.table)})"


def _private_absorber_search(lg: Graph, support, q, max_fresh, budget_nodes):
    """Joint search for (A_L, D1, D2) over hosts with m fresh vertices.

    Exact cover formulation: per L-edge one primary column (covered by
    a D2 triangle); per host edge two primary columns, one for each
    side, covered either by one triangle per side (edge used by A_L)
    or together by a slack row (edge unused).  Solutions are exactly
    the pairs of decompositions agreeing on A_L = union(D1).
    """
    led = lg.sorted_edges()
    for m in range(1, max_fresh + 1):
        fresh_ids = tuple(range(lg.n, lg.n + m))
        n = lg.n + m
        host_pairs = [
            (a, b)
            for a, b in _clique_pairs(tuple(support) + fresh_ids)
            if not (a in support and b in support)
        ]
        host_set = set(host_pairs)
        full = Graph(n, list(lg.edges) + host_pairs)
        tris = enumerate_cliques(full, q)
        cols: list = [("L", e) for e in led]
        for f in host_pairs:
            cols.append(("D1", f))
            cols.append(("D2", f))
        rows = []
        for t in tris:
            pairs = _clique_pairs(t)
            lpart = [p for p in pairs if p in lg.edges]
            hpart = [p for p in pairs if p in host_set]
            rows.append((("d2", t), [("L", p) for p in lpart] + [("D2", p) for p in hpart]))
            if not lpart:
                rows.append((("d1", t), [("D1", p) for p in hpart]))
        for f in host_pairs:
            rows.append((("skip", f), [("D1", f), ("D2", f)]))
        budget = SolveBudget(max_nodes=budget_nodes)
        try:
            for sol in exact_cover_solutions(cols, (), rows, budget):
                d1 = [key[1] for key in sol if key[0] == "d1"]
                d2 = [key[1] for key in sol if key[0] == "d2"]
                a_edges = sorted(
                    set().union(*(set(_clique_pairs(t)) for t in d2)) - lg.edges
                    if d2
                    else []
                )
                return n, Graph(n, a_edges), Packing(q, d1), Packing(q, d2)
        except BudgetExceeded:
            continue
    return None


def naive_omni_absorber(
    x: Graph, q: int = 3, max_fresh: int = 6, budget_nodes: int = 2_000_000
) -> OmniAbsorber:
    """Vertex-disjoint private absorbers for every divisible L inside X.

    Bounded exact search over hosts K_m on the support of L plus m
    fresh vertices, m increasing; raises when the caps are exhausted
    (existence at some size is known, this search is just bounded).
    Only q = 3 is supported, and e(X) is capped at 6.
    """
    if q != 3:
        raise ValueError("the bounded search is only wired for q = 3")
    if x.m > 6:
        raise ValueError(f"e(X) = {x.m} exceeds the cap of 6")
    xedges = x.sorted_edges()
    privates: list[tuple[frozenset, Graph, Packing, Packing]] = []
    for bits in range(1, 1 << x.m):
        subset = tuple(xedges[i] for i in range(x.m) if bits >> i & 1)
        lg = Graph(x.n, subset)
        if not is_kq_divisible(lg, q):
            continue
        support = set(_support(lg))
        found = _private_absorber_search(lg, support, q, max_fresh, budget_nodes)
        if found is None:
            raise ValueError(
                f"no private absorber for a divisible subgraph with "
                f"{len(subset)} edges within {max_fresh} fresh vertices"
            )
        privates.append((frozenset(subset), *found[1:]))

    # relabel fresh vertices of each private absorber into one universe
    n = x.n
    placed: list[tuple[frozenset, Graph, Packing, Packing]] = []
    for key, ag, d1, d2 in privates:
        shift = n - x.n
        mapping = {
            v: (v if v < x.n else v + shift) for v in range(ag.n)
        }
        n = x.n + shift + (ag.n - x.n)
        placed.append(
            (
                key,
                Graph(n, _relabel_edges(ag.edges, mapping)),
                Packing(q, _relabel_packing(d1, mapping)),
                Packing(q, _relabel_packing(d2, mapping)),
            )
        )
    a_total = Graph(n, [e for _, ag, _, _ in placed for e in ag.edges])
    table: dict[frozenset, Packing] = {}
    keys = [key for key, _, _, _ in placed]
    for bits in range(1 << x.m):
        subset = frozenset(
            xedges[i] for i in range(x.m) if bits >> i & 1
        )
        lg = Graph(x.n, subset)
        if not is_kq_divisible(lg, q):
            continue
        cliques: list[tuple[int, ...]] = []
        for key, ag, d1, d2 in placed:
            cliques.extend(d2.cliques if key == subset else d1.cliques)
        table[subset] = Packing(q, cliques)
    pieces = {key: (ag, d1, d2) for key, ag, d1, d2 in placed}
    return OmniAbsorber(q, x, a_total, table, pieces)


# ===================================================================
# Serialization
# ===================================================================


def _packing_json(p: Packing) -> list[list[int]]:
    return [list(c) for c in p.cliques]


def serialize_bundle(obj) -> tuple[Graph, dict]:
    """(main graph, sidecar dict) for a gadget or bundle."""
    if isinstance(obj, Gadget):
        return obj.graph, {
            "kind": obj.kind,
            "q": obj.q,
            "roots": list(obj.roots),
            "certificates": {},
        }
    if isinstance(obj, TransformerBundle):
        return obj.t, {
            "kind": "star_transformer",
            "q": obj.q,
            "k": obj.k,
            "roots": list(obj.roots),
            "x": obj.x,
            "x_prime": obj.x_prime,
            "leaf_roots": list(obj.leaf_roots),
            "internals": list(obj.internals),
            "certificates": {
                "l_edges": [list(e) for e in obj.l.sorted_edges()],
                "l_prime_edges": [list(e) for e in obj.l_prime.sorted_edges()],
                "decomp_tl": _packing_json(obj.decomp_tl),
                "decomp_tl_prime": _packing_json(obj.decomp_tl_prime),
            },
        }
    if isinstance(obj, AbsorberBundle):
        return obj.a, {
            "kind": obj.kind,
            "q": obj.q,
            "roots": list(obj.roots),
            "certificates": {
                "l_edges": [list(e) for e in obj.l.sorted_edges()],
                "decomp_a": _packing_json(obj.decomp_a),
                "decomp_la": _packing_json(obj.decomp_la),
            },
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_bundle(graph: Graph, sidecar: dict):
    """Rebuild a gadget or bundle from its graph and sidecar."""
    kind = sidecar["kind"]
    q = sidecar["q"]
    certs = sidecar.get("certificates", {})
    if kind in ("anti_edge", "fake_edge"):
        return Gadget(kind, q, graph, tuple(sidecar["roots"]))
    if kind == "star_transformer":
        return TransformerBundle(
            q=q,
            k=sidecar.get("k"),
            t=graph,
            l=Graph(graph.n, [tuple(e) for e in certs["l_edges"]]),
            l_prime=Graph(graph.n, [tuple(e) for e in certs["l_prime_edges"]]),
            x=sidecar["x"],
            x_prime=sidecar["x_prime"],
            leaf_roots=tuple(sidecar["leaf_roots"]),
            internals=tuple(sidecar["internals"]),
            decomp_tl=Packing(q, certs["decomp_tl"]),
            decomp_tl_prime=Packing(q, certs["decomp_tl_prime"]),
        )
    if kind in ("anti_clique_absorber", "nabla_absorber", "trivial_absorber"):
        return AbsorberBundle(
            kind,
            q,
            Graph(graph.n, [tuple(e) for e in certs["l_edges"]]),
            graph,
            tuple(sidecar["roots"]),
            Packing(q, certs["decomp_a"]),
            Packing(q, certs["decomp_la"]),
        )
    raise ValueError(f"unknown gadget kind {kind!r}")
