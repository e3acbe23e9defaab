"""Exact K_q decomposition machinery.

Decomposition search is exact cover: columns are edge ids, rows are
q-cliques.  Branching picks the most constrained column (fewest
available cliques), breaking ties toward the lowest edge id, so runs
are deterministic.  A node budget distinguishes "no decomposition
exists" from "search gave up".  Minimum-leave packing wraps the same
machinery in branch and bound, pruning with the optimal leave number of
the still-undecided subgraph (a valid lower bound on any completion).
"""

from __future__ import annotations

import time
from typing import Iterable, Iterator

from .graphs import (
    Graph,
    Packing,
    is_kq_divisible,
    optimal_leave_number,
    union,
    verify_packing,
)

__all__ = [
    "SolveBudget",
    "BudgetExceeded",
    "DecompResult",
    "MinLeaveResult",
    "CliqueIndex",
    "enumerate_cliques",
    "exact_decomposition",
    "min_leave_packing",
    "verify_transformer",
    "verify_absorber",
]


class BudgetExceeded(Exception):
    pass


class SolveBudget:
    """Node and wall-clock caps for exact searches."""

    __slots__ = ("max_nodes", "max_seconds", "nodes", "_deadline")

    def __init__(self, max_nodes: int | None = None, max_seconds: float | None = None):
        self.max_nodes = max_nodes
        self.max_seconds = max_seconds
        self.nodes = 0
        self._deadline = (
            time.monotonic() + max_seconds if max_seconds is not None else None
        )

    def spend(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(f"node budget {self.max_nodes} exceeded")
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise BudgetExceeded(f"time budget {self.max_seconds}s exceeded")


# ===================================================================
# Clique enumeration
# ===================================================================


def enumerate_cliques(g: Graph, q: int) -> list[tuple[int, ...]]:
    """All q-cliques as sorted tuples, in lexicographic order."""
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    adj = g.adjacency()
    out: list[tuple[int, ...]] = []
    if q == 3:
        for u, v in sorted(g.edges):
            au = adj[u]
            av = adj[v]
            if len(av) < len(au):
                au, av = av, au
            for w in sorted(au):
                if w > v and w in av:
                    out.append((u, v, w))
        out.sort()
        return out

    def extend(prefix: list[int], cands: list[int]) -> None:
        if len(prefix) == q:
            out.append(tuple(prefix))
            return
        need = q - len(prefix)
        for i, v in enumerate(cands):
            if len(cands) - i < need:
                break
            prefix.append(v)
            extend(prefix, [w for w in cands[i + 1 :] if w in adj[v]])
            prefix.pop()

    for v in range(g.n):
        extend([v], sorted(w for w in adj[v] if w > v))
    return out


class CliqueIndex:
    """q-cliques of a graph with per-edge membership lookup."""

    __slots__ = ("q", "graph", "cliques", "edge_ids", "by_edge")

    def __init__(self, g: Graph, q: int, cliques: list[tuple[int, ...]] | None = None):
        self.q = q
        self.graph = g
        self.cliques: tuple[tuple[int, ...], ...] = tuple(
            enumerate_cliques(g, q) if cliques is None else cliques
        )
        self.edge_ids: dict[tuple[int, int], int] = {
            e: i for i, e in enumerate(g.sorted_edges())
        }
        by_edge: dict[tuple[int, int], list[int]] = {}
        for cid, c in enumerate(self.cliques):
            for i in range(q):
                for j in range(i + 1, q):
                    by_edge.setdefault((c[i], c[j]), []).append(cid)
        self.by_edge = {e: tuple(ids) for e, ids in by_edge.items()}

    def __len__(self):
        return len(self.cliques)

    def through_edge(self, u: int, v: int) -> tuple[int, ...]:
        e = (u, v) if u < v else (v, u)
        return self.by_edge.get(e, ())

    def clique_edges(self, cid: int) -> list[tuple[int, int]]:
        c = self.cliques[cid]
        return [
            (c[i], c[j]) for i in range(self.q) for j in range(i + 1, self.q)
        ]


# ===================================================================
# Exact cover
# ===================================================================


class _ExactCover:
    """Algorithm X over sets, with optional secondary columns.

    Primary columns must be covered exactly once; secondary columns at
    most once.  Rows are keyed by sortable hashables (clique tuples).
    """

    def __init__(self, primary, secondary, rows):
        self.row_cols: dict = {}
        self.cols: dict = {c: set() for c in primary}
        for c in secondary:
            self.cols[c] = set()
        self.primary: set = set(primary)
        for key, cols in rows:
            cs = tuple(cols)
            self.row_cols[key] = cs
            for c in cs:
                self.cols[c].add(key)
        self.active_primary: set = set(self.primary)
        self.solution: list = []

    def _select(self, key):
        removed_rows = set()
        covered = self.row_cols[key]
        for c in covered:
            removed_rows |= self.cols[c]
        for r in removed_rows:
            for c in self.row_cols[r]:
                self.cols[c].discard(r)
        covered_primary = [c for c in covered if c in self.active_primary]
        self.active_primary.difference_update(covered_primary)
        return removed_rows, covered_primary

    def _unselect(self, removed_rows, covered_primary):
        self.active_primary.update(covered_primary)
        for r in removed_rows:
            for c in self.row_cols[r]:
                self.cols[c].add(r)

    def solutions(self, budget: SolveBudget) -> Iterator[list]:
        if not self.active_primary:
            yield list(self.solution)
            return
        c = min(self.active_primary, key=lambda x: (len(self.cols[x]), x))
        if not self.cols[c]:
            return
        for key in sorted(self.cols[c]):
            budget.spend()
            state = self._select(key)
            self.solution.append(key)
            yield from self.solutions(budget)
            self.solution.pop()
            self._unselect(*state)


class DecompResult:
    """status is "found", "none", or "budget"."""

    __slots__ = ("status", "packing", "nodes")

    def __init__(self, status: str, packing: Packing | None, nodes: int):
        self.status = status
        self.packing = packing
        self.nodes = nodes

    def __repr__(self):
        return f"DecompResult(status={self.status!r}, nodes={self.nodes})"


def exact_decomposition(
    g: Graph, q: int, budget: SolveBudget | None = None
) -> DecompResult:
    """Search for a K_q decomposition of G (every edge in one clique)."""
    if budget is None:
        budget = SolveBudget(max_nodes=1_000_000)
    if not is_kq_divisible(g, q):
        return DecompResult("none", None, 0)
    if g.m == 0:
        return DecompResult("found", Packing(q, []), 0)
    index = CliqueIndex(g, q)
    rows = [
        (c, tuple(index.edge_ids[e] for e in index.clique_edges(cid)))
        for cid, c in enumerate(index.cliques)
    ]
    cover = _ExactCover(range(g.m), (), rows)
    try:
        for sol in cover.solutions(budget):
            return DecompResult("found", Packing(q, sol), budget.nodes)
    except BudgetExceeded:
        return DecompResult("budget", None, budget.nodes)
    return DecompResult("none", None, budget.nodes)


def exact_cover_solutions(
    primary_cols: Iterable,
    secondary_cols: Iterable,
    rows: Iterable[tuple],
    budget: SolveBudget,
) -> Iterator[list]:
    """Generic exact cover enumeration (used by the absorber search)."""
    yield from _ExactCover(primary_cols, secondary_cols, rows).solutions(budget)


# ===================================================================
# Minimum leave
# ===================================================================


class MinLeaveResult:
    """status is "optimal" or "budget" (best found within budget)."""

    __slots__ = ("status", "packing", "leave", "nodes")

    def __init__(self, status, packing, leave, nodes):
        self.status: str = status
        self.packing: Packing = packing
        self.leave: int = leave
        self.nodes: int = nodes

    def __repr__(self):
        return f"MinLeaveResult(status={self.status!r}, leave={self.leave})"


def min_leave_packing(
    g: Graph, q: int, budget: SolveBudget | None = None
) -> MinLeaveResult:
    """Branch and bound for a K_q packing minimizing the leave."""
    if budget is None:
        budget = SolveBudget(max_nodes=500_000)
    index = CliqueIndex(g, q)
    edges = g.sorted_edges()
    clique_edge_sets = [frozenset(index.clique_edges(cid)) for cid in range(len(index))]
    per_edge = {e: index.through_edge(*e) for e in edges}
    global_lb = optimal_leave_number(g, q)

    # greedy seed, lexicographic
    taken: list[int] = []
    used: set[tuple[int, int]] = set()
    for cid in range(len(index)):
        es = clique_edge_sets[cid]
        if not es & used:
            taken.append(cid)
            used |= es
    best_leave = g.m - len(used)
    best_cliques = list(taken)

    qsize = q * (q - 1) // 2
    covered: set[tuple[int, int]] = set()
    left: set[tuple[int, int]] = set()
    chosen: list[int] = []
    out_of_budget = False

    def undecided_bound() -> int:
        und = [e for e in edges if e not in covered and e not in left]
        if not und:
            return 0
        return optimal_leave_number(Graph(g.n, und), q)

    def rec() -> None:
        nonlocal best_leave, best_cliques, out_of_budget
        if out_of_budget or best_leave <= global_lb:
            return
        try:
            budget.spend()
        except BudgetExceeded:
            out_of_budget = True
            return
        target = None
        for e in edges:
            if e not in covered and e not in left:
                target = e
                break
        if target is None:
            if len(left) < best_leave:
                best_leave = len(left)
                best_cliques = list(chosen)
            return
        if len(left) + undecided_bound() >= best_leave:
            return
        for cid in per_edge[target]:
            es = clique_edge_sets[cid]
            if es & covered or es & left:
                continue
            covered.update(es)
            chosen.append(cid)
            rec()
            chosen.pop()
            covered.difference_update(es)
        left.add(target)
        rec()
        left.discard(target)

    rec()
    packing = Packing(q, [index.cliques[cid] for cid in best_cliques])
    status = "budget" if out_of_budget else "optimal"
    leave = g.m - qsize * len(best_cliques)
    return MinLeaveResult(status, packing, leave, budget.nodes)


# ===================================================================
# Certificate verification
# ===================================================================


def _assert_decomposes(host: Graph, packing: Packing, what: str, problems: list[str]):
    rep = verify_packing(host, packing)
    if not rep.valid:
        problems.extend(f"{what}: {p}" for p in rep.problems[:5])
    elif rep.leave.m:
        problems.append(f"{what}: {rep.leave.m} edges uncovered")


def verify_transformer(bundle) -> list[str]:
    """Check a transformer bundle; returns a list of problems (empty = ok).

    Expects fields q, t, l, l_prime (graphs), roots (iterable), and the
    two certificates decomp_tl, decomp_tl_prime.
    """
    problems: list[str] = []
    roots = set(bundle.roots)
    for u, v in bundle.t.edges:
        if u in roots and v in roots:
            problems.append(f"T has an edge inside the root set: ({u}, {v})")
    for name, lg in (("L", bundle.l), ("L'", bundle.l_prime)):
        for u, v in lg.edges:
            if u not in roots or v not in roots:
                problems.append(f"{name} edge ({u}, {v}) leaves the root set")
    _assert_decomposes(
        union(bundle.t, bundle.l), bundle.decomp_tl, "decomp of T u L", problems
    )
    _assert_decomposes(
        union(bundle.t, bundle.l_prime),
        bundle.decomp_tl_prime,
        "decomp of T u L'",
        problems,
    )
    return problems


def verify_absorber(bundle) -> list[str]:
    """Check an absorber bundle; returns a list of problems (empty = ok).

    Expects fields q, l, a (graphs), roots (= V(L)), decomp_a and
    decomp_la.  L must be K_q-divisible, roots independent in A, and
    both certificates must decompose exactly.
    """
    problems: list[str] = []
    roots = set(bundle.roots)
    if not is_kq_divisible(bundle.l, bundle.q):
        problems.append("L is not divisible")
    for u, v in bundle.a.edges:
        if u in roots and v in roots:
            problems.append(f"A has an edge inside the root set: ({u}, {v})")
    for u, v in bundle.l.edges:
        if u not in roots or v not in roots:
            problems.append(f"L edge ({u}, {v}) leaves the root set")
    _assert_decomposes(bundle.a, bundle.decomp_a, "decomp of A", problems)
    _assert_decomposes(
        union(bundle.l, bundle.a), bundle.decomp_la, "decomp of L u A", problems
    )
    return problems
