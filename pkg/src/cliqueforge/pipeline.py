"""Design hypergraphs and the end-to-end packing pipeline.

The pipeline packs a sampled random graph in stages: embed a spanning
divisibility fixer (Hamilton path power plus fake-edge gadgets placed
in a dedicated slice), reserve an edge slice, pack the rest greedily
through the design hypergraph, complete leftovers through reserve
cliques (scarcest first), apply the fixer, then polish the whole
packing with augmenting exchanges and optionally absorb a tiny
leftover.  Stage failures always degrade to a larger leave, never to
an invalid packing.

Accounting: stages fixer_deleted / nibble / reserve / absorbed plus
the reported leave partition e(G) exactly.  The classical lower bound
applies to all uncovered edges, deleted or not, so the validity check
is fixer_deleted + leave >= optimal_leave_number(G).
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .fixers import FixerBlueprint, EmbeddedFixer, apply_fixer, simplify_fixer
from .gadgets import naive_omni_absorber
from .graphs import Graph, Packing, optimal_leave_number, verify_packing
from .randgraphs import gnd, gnp, slice_graph, stream
from .solver import enumerate_cliques, min_leave_packing

__all__ = [
    "DesignHypergraph",
    "ReserveHypergraph",
    "design_hypergraph",
    "reserve_hypergraph",
    "random_greedy_matching",
    "ReserveMatchingResult",
    "matching_with_reserves",
    "PackOptions",
    "PackReport",
    "pack_gnp",
    "pack_gnd",
    "bench",
    "EmbedFailure",
    "embed_fixer",
    "fix_by_deletion",
]


# ===================================================================
# Hypergraphs over edge keys
# ===================================================================


class DesignHypergraph:
    """Vertices are edge keys of the base; hyperedges are its q-cliques."""

    __slots__ = ("base", "q", "cliques", "hedges", "_through")

    def __init__(self, base: Graph, q: int, cliques=None):
        self.base = base
        self.q = q
        self.cliques: tuple[tuple[int, ...], ...] = tuple(
            enumerate_cliques(base, q) if cliques is None else cliques
        )
        self.hedges: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple((c[i], c[j]) for i in range(q) for j in range(i + 1, q))
            for c in self.cliques
        )
        self._through = None

    def __len__(self):
        return len(self.cliques)

    def vertices(self) -> set[tuple[int, int]]:
        return set(self.base.edges)

    def through(self, edge: tuple[int, int]) -> tuple[int, ...]:
        """Indices of the hyperedges containing an edge key."""
        if self._through is None:
            through: dict[tuple[int, int], list[int]] = {}
            for i, hedge in enumerate(self.hedges):
                for e in hedge:
                    through.setdefault(e, []).append(i)
            self._through = {e: tuple(ix) for e, ix in through.items()}
        return self._through.get(edge, ())

    def degree(self, edge: tuple[int, int]) -> int:
        return len(self.through(edge))

    def codegree(self, e1, e2) -> int:
        return len(set(self.through(e1)) & set(self.through(e2)))

    def max_codegree(self) -> int:
        best = 0
        seen: set[frozenset] = set()
        for hedge in self.hedges:
            for e1, e2 in itertools.combinations(hedge, 2):
                key = frozenset((e1, e2))
                if key not in seen:
                    seen.add(key)
                    best = max(best, self.codegree(e1, e2))
        return best

    def __repr__(self):
        return f"DesignHypergraph(q={self.q}, hyperedges={len(self.cliques)})"


class ReserveHypergraph:
    """Cliques with exactly one edge in A and all others in B."""

    __slots__ = ("q", "a", "b", "cliques", "hedges")

    def __init__(self, q, a, b, cliques, hedges):
        self.q = q
        self.a: frozenset = a
        self.b: frozenset = b
        self.cliques = cliques
        self.hedges = hedges

    def __len__(self):
        return len(self.cliques)

    def __repr__(self):
        return f"ReserveHypergraph(q={self.q}, hyperedges={len(self.cliques)})"


def design_hypergraph(g: Graph, q: int) -> DesignHypergraph:
    return DesignHypergraph(g, q)


def reserve_hypergraph(g: Graph, a, b, q: int) -> ReserveHypergraph:
    a = frozenset((min(u, v), max(u, v)) for u, v in a)
    b = frozenset((min(u, v), max(u, v)) for u, v in b)
    if a & b:
        raise ValueError(f"A and B overlap on {sorted(a & b)[:3]}")
    cliques = []
    hedges = []
    if q == 3:
        # wedge walk: two B-edges at a common vertex closed by an A-edge
        badj: dict[int, list[int]] = {}
        for u, v in sorted(b):
            badj.setdefault(u, []).append(v)
            badj.setdefault(v, []).append(u)
        for w in sorted(badj):
            ns = sorted(badj[w])
            for x, y in itertools.combinations(ns, 2):
                if ((x, y) if x < y else (y, x)) in a:
                    c = tuple(sorted((w, x, y)))
                    cliques.append(c)
                    hedges.append(
                        tuple(
                            (c[i], c[j])
                            for i in range(3)
                            for j in range(i + 1, 3)
                        )
                    )
    else:
        pool = Graph(g.n, a | b)
        for c in enumerate_cliques(pool, q):
            pairs = tuple(
                (c[i], c[j]) for i in range(q) for j in range(i + 1, q)
            )
            if sum(1 for e in pairs if e in a) == 1:
                cliques.append(c)
                hedges.append(pairs)
    return ReserveHypergraph(q, a, b, tuple(cliques), tuple(hedges))


def random_greedy_matching(h: DesignHypergraph, rng):
    """Uniform random greedy to maximality.

    Draws hyperedges uniformly from the remaining pool (conflicted ones
    are discarded as drawn; they can never become valid again), so each
    accepted draw is uniform over the currently valid hyperedges.
    Returns chosen hyperedge indices and the uncovered edge keys.
    """
    pool = list(range(len(h.cliques)))
    used: set[tuple[int, int]] = set()
    chosen: list[int] = []
    while pool:
        i = rng.randrange(len(pool))
        idx = pool[i]
        pool[i] = pool[-1]
        pool.pop()
        hedge = h.hedges[idx]
        if any(e in used for e in hedge):
            continue
        chosen.append(idx)
        used.update(hedge)
    return chosen, h.vertices() - used


# ===================================================================
# Local search: fill plus bounded augmenting exchanges
# ===================================================================


def _fill_pass(h: DesignHypergraph, chosen: list[int], used: set) -> int:
    gain = 0
    for i, hedge in enumerate(h.hedges):
        if all(e not in used for e in hedge):
            chosen.append(i)
            used.update(hedge)
            gain += len(hedge)
    return gain


def _augment_pass(h: DesignHypergraph, chosen: list[int], used: set) -> int:
    """Swap out 1 or 2 blockers for a new hyperedge plus refills.

    For each uncovered edge, try every hyperedge through it whose
    conflicts touch at most two chosen hyperedges; tentatively swap,
    refill greedily through the freed edges, and keep the move only if
    it covers strictly more (at least as many refills as blockers).
    Coverage strictly grows on every accepted move, so passes make
    progress until a fixpoint.
    """
    owner: dict[tuple[int, int], int] = {}
    for i in chosen:
        for e in h.hedges[i]:
            owner[e] = i
    chosen_set = set(chosen)
    gain = 0
    per = len(h.hedges[0]) if h.hedges else 0
    for e in sorted(h.vertices() - used):
        if e in used:
            continue
        for t in h.through(e):
            hedge = h.hedges[t]
            blockers = sorted({owner[x] for x in hedge if x in used})
            if not 1 <= len(blockers) <= 2:
                continue
            freed = [
                x for c in blockers for x in h.hedges[c] if x not in hedge
            ]
            for c in blockers:
                chosen_set.discard(c)
                for x in h.hedges[c]:
                    used.discard(x)
                    owner.pop(x, None)
            chosen_set.add(t)
            used.update(hedge)
            for x in hedge:
                owner[x] = t
            fills = []
            for fe in freed:
                if fe in used:
                    continue
                for t2 in h.through(fe):
                    h2 = h.hedges[t2]
                    if all(x not in used for x in h2):
                        fills.append(t2)
                        used.update(h2)
                        for x in h2:
                            owner[x] = t2
                        break
            if len(fills) >= len(blockers):
                chosen_set.update(fills)
                gain += per * (1 + len(fills) - len(blockers))
                break
            for t2 in fills:
                for x in h.hedges[t2]:
                    used.discard(x)
                    owner.pop(x, None)
            chosen_set.discard(t)
            for x in hedge:
                used.discard(x)
                owner.pop(x, None)
            for c in blockers:
                chosen_set.add(c)
                for x in h.hedges[c]:
                    used.add(x)
                    owner[x] = c
    chosen[:] = sorted(chosen_set)
    return gain


def _polish(h: DesignHypergraph, chosen: list[int], used: set, passes: int) -> int:
    total = 0
    for _ in range(passes):
        gain = _augment_pass(h, chosen, used) + _fill_pass(h, chosen, used)
        total += gain
        if not gain:
            break
    return total


# ===================================================================
# Nibble with reserves
# ===================================================================


class ReserveMatchingResult:
    """ok, the combined packing, per-source clique lists, stranded A-edges."""

    __slots__ = ("ok", "packing", "nibble_cliques", "reserve_cliques", "stranded")

    def __init__(self, ok, packing, nibble_cliques, reserve_cliques, stranded):
        self.ok: bool = ok
        self.packing: Packing = packing
        self.nibble_cliques = nibble_cliques
        self.reserve_cliques = reserve_cliques
        self.stranded: tuple = stranded

    def __repr__(self):
        return f"ReserveMatchingResult(ok={self.ok}, stranded={len(self.stranded)})"


def matching_with_reserves(
    h1: DesignHypergraph,
    h2: ReserveHypergraph,
    a,
    rng,
    passes: int = 0,
) -> ReserveMatchingResult:
    """Nibble on h1, then complete uncovered A-edges from h2.

    The two hypergraphs must not share cliques and may only meet on A.
    Completion is scarcest-first: the A-edge with the fewest remaining
    reserve cliques goes first, each choice uniform among its valid
    cliques.  Failure lists the stranded A-edges; the returned packing
    is always a valid partial packing.
    """
    a = frozenset((min(u, v), max(u, v)) for u, v in a)
    if set(h1.cliques) & set(h2.cliques):
        raise ValueError("h1 and h2 share cliques")
    h2_verts = {e for hedge in h2.hedges for e in hedge}
    meet = h1.vertices() & h2_verts
    if not meet <= a:
        raise ValueError("h1 and h2 meet outside A")

    chosen, _ = random_greedy_matching(h1, rng)
    used = {e for idx in chosen for e in h1.hedges[idx]}
    _polish(h1, chosen, used, passes)
    uncovered = h1.vertices() - used

    by_a: dict[tuple[int, int], list[int]] = {}
    for idx, hedge in enumerate(h2.hedges):
        (a_edge,) = [e for e in hedge if e in h2.a]
        by_a.setdefault(a_edge, []).append(idx)

    need = sorted(e for e in uncovered if e in a)
    reserve_chosen: list[int] = []
    reserve_used: set = set()
    stranded: list = []
    while need:

        def options(e):
            return [
                idx
                for idx in by_a.get(e, ())
                if not any(x in used or x in reserve_used for x in h2.hedges[idx])
            ]

        live = sorted((len(options(e)), e) for e in need)
        count, target = live[0]
        need.remove(target)
        opts = options(target)
        if not opts:
            stranded.append(target)
            continue
        idx = opts[rng.randrange(len(opts))]
        reserve_chosen.append(idx)
        reserve_used.update(h2.hedges[idx])

    nibble_cliques = [h1.cliques[i] for i in chosen]
    reserve_cliques = [h2.cliques[i] for i in reserve_chosen]
    packing = Packing(h1.q, nibble_cliques + reserve_cliques)
    return ReserveMatchingResult(
        not stranded, packing, nibble_cliques, reserve_cliques, tuple(stranded)
    )


# ===================================================================
# Fixer embedding
# ===================================================================


class EmbedFailure(Exception):
    pass


def _hamilton_path_power(g: Graph, power: int, rng, tries: int, need_02: bool,
                         prefix=None):
    """Spanning path whose i..i+power windows are cliques; None if stuck.

    power 1 rotates (reverse the tail segment at a pivot) when boxed
    in; higher powers restart instead.  need_02 additionally requires
    the 0-2 chord for the fat triangle of a q=3 blueprint.  A prefix
    pins the first vertices (the caller guarantees its own adjacency);
    rotations never touch it.
    """
    n = g.n
    adj = g.adjacency()
    keep = len(prefix) if prefix else 1
    if n <= 2:
        return None if need_02 else list(range(n))
    for _ in range(tries):
        path = list(prefix) if prefix else [rng.randrange(n)]
        inside = set(path)
        steps = 0
        while len(path) < n and steps < 6 * n:
            steps += 1
            back = path[-min(power, len(path)) :]
            cands = set(adj[back[-1]])
            for v in back[:-1]:
                cands &= adj[v]
            cands -= inside
            if cands:
                ordered = sorted(cands)
                nxt = ordered[rng.randrange(len(ordered))]
                path.append(nxt)
                inside.add(nxt)
            elif power == 1:
                pivots = [
                    u for u in sorted(adj[path[-1]] & inside)
                    if path.index(u) >= keep - 1
                ]
                if len(pivots) <= 1:
                    break
                u = pivots[rng.randrange(len(pivots))]
                i = path.index(u)
                if i + 1 >= len(path):
                    break
                path[i + 1 :] = reversed(path[i + 1 :])
            else:
                break
        if len(path) == n:
            if prefix or not need_02:
                return path
            if g.has_edge(path[0], path[2]):
                return path
            if g.has_edge(path[-1], path[-3]):
                return list(reversed(path))
    return None


def _fat_prefixes(body: Graph, pool: Graph, t: int, demand: int, cap: int = 40):
    """t-cliques of the body whose vertices have pool degree >= demand.

    The fat-zone vertices each anchor (t-1)(q(q-1)-1) gadgets, so they
    must start with that many spare pool edges; candidates are scanned
    in decreasing pool-degree order.
    """
    pool_adj = pool.adjacency()
    body_adj = body.adjacency()
    for cutoff in (demand, demand - 2, 0):
        cands = sorted(
            (v for v in range(body.n) if len(pool_adj[v]) >= cutoff),
            key=lambda v: (-len(pool_adj[v]), v),
        )[:30]
        out = []
        for combo in itertools.combinations(cands, t):
            if all(
                y in body_adj[x] for x, y in itertools.combinations(combo, 2)
            ):
                out.append(combo)
                if len(out) == cap:
                    break
        if out:
            return out
    return []


def embed_fixer(
    g: Graph,
    q: int,
    rng,
    gadget_pool: Graph,
    hamilton_tries: int = 60,
    gadget_tries: int = 40,
) -> EmbeddedFixer:
    """Place a spanning fixer: path power outside the pool, gadgets in it.

    Raises EmbedFailure when no spanning path power shows up or some
    fake-edge gadget cannot be placed edge-disjointly in the pool.
    """
    body = Graph(g.n, g.edges - gadget_pool.edges)
    t = max(3, q - 2)
    demand = (t - 1) * (q * (q - 1) - 1) + 2
    prefixes = _fat_prefixes(body, gadget_pool, t, demand)
    order = None
    per = max(4, hamilton_tries // max(1, len(prefixes)))
    for prefix in prefixes:
        order = _hamilton_path_power(
            body, q - 2, rng, per, need_02=False, prefix=list(prefix)
        )
        if order is not None:
            break
    if order is None:
        order = _hamilton_path_power(
            body, q - 2, rng, hamilton_tries, need_02=(q == 3)
        )
    if order is None:
        raise EmbedFailure("no spanning path power found")
    blueprint = FixerBlueprint(q, g.n)
    simplified = simplify_fixer(blueprint)
    avail = {v: set(ws) for v, ws in gadget_pool.adjacency().items()}

    def take(x, y):
        avail[x].discard(y)
        avail[y].discard(x)

    def internals_for(x, y, count, banned):
        """count mutually adjacent common available neighbors of x and y."""
        commons = sorted((avail[x] & avail[y]) - banned)
        if count == 1:
            return commons[:1] or None
        for i, w1 in enumerate(commons):
            group = [w1]
            for w2 in commons[i + 1 :]:
                if all(w2 in avail[w] for w in group):
                    group.append(w2)
                    if len(group) == count:
                        return group
        return None

    maps: dict[tuple[int, int, int], dict[int, int]] = {}
    for key in sorted(simplified.registry):
        u, v, _ = key
        ru, rv = order[u], order[v]
        placed = None
        for _ in range(gadget_tries):
            mp = {0: ru, 1: rv}
            hub_pool = sorted(
                (w for w in range(g.n) if w not in (ru, rv) and len(avail[w]) >= q),
                key=lambda w: -len(avail[w]),
            )[: 6 * q]
            if len(hub_pool) < q - 2:
                break
            hubs: list[int] = []
            while len(hubs) < q - 2:
                w = hub_pool[rng.randrange(len(hub_pool))]
                if w not in hubs:
                    hubs.append(w)
            for h, w in zip(range(2, q), hubs):
                mp[h] = w
            taken_edges: list[tuple[int, int]] = []
            ok = True
            nxt = q
            banned = set(mp.values())
            for a in range(q):
                for b in range(a + 1, q):
                    if (a, b) == (0, 1):
                        continue
                    ws = internals_for(mp[a], mp[b], q - 2, banned)
                    if ws is None:
                        ok = False
                        break
                    for w in ws:
                        mp[nxt] = w
                        banned.add(w)
                        nxt += 1
                    for w in ws:
                        for x in (mp[a], mp[b]):
                            taken_edges.append((x, w))
                            take(x, w)
                    for i, w1 in enumerate(ws):
                        for w2 in ws[i + 1 :]:
                            taken_edges.append((w1, w2))
                            take(w1, w2)
                if not ok:
                    break
            if ok:
                placed = mp
                break
            for x, y in taken_edges:
                avail[x].add(y)
                avail[y].add(x)
        if placed is None:
            raise EmbedFailure(f"gadget {key} could not be placed in the pool")
        maps[key] = placed
    emb = EmbeddedFixer(simplified, order, maps)
    problems = emb.validate(g)
    if problems:
        raise EmbedFailure("embedding failed validation: " + problems[0])
    return emb


def fix_by_deletion(g: Graph, q: int, rng) -> tuple[Graph, list[tuple[int, int]]]:
    """Greedy deletion repair toward divisibility (fallback path).

    q=3 pairs odd-degree vertices along shortest paths (interior
    parities survive), then removes a cycle of the right length mod 3.
    q>=4 burns residues on edges between bad vertices, then removes a
    3-regular 6-vertex subgraph when the edge count needs a half-period
    shift.  Gives up gracefully; the caller just keeps a larger leave.
    """
    edges = set(g.edges)
    deg = g.degrees()
    deleted: list[tuple[int, int]] = []
    adj = {v: set(ws) for v, ws in g.adjacency().items()}

    def drop(u, w):
        _drop_edge(adj, deg, edges, deleted, u, w)

    if q == 3:
        odd = sorted(v for v in range(g.n) if deg[v] % 2)
        while odd:
            src = odd[0]
            prev = {src: src}
            queue = [src]
            found = None
            while queue and found is None:
                nxt_queue = []
                for u in queue:
                    for w in sorted(adj[u]):
                        if w in prev:
                            continue
                        prev[w] = u
                        if w != src and deg[w] % 2:
                            found = w
                            break
                        nxt_queue.append(w)
                    if found:
                        break
                queue = nxt_queue
            if found is None:
                break
            w = found
            while w != src:
                drop(prev[w], w)
                w = prev[w]
            odd = sorted(v for v in range(g.n) if deg[v] % 2)
    else:
        for _ in range(6 * g.m):
            bad = [v for v in range(g.n) if deg[v] % (q - 1)]
            if not bad:
                break
            badset = set(bad)
            pairs = [(u, w) for u in bad for w in sorted(adj[u]) if w in badset and u < w]
            if pairs:
                drop(*pairs[rng.randrange(len(pairs))])
            else:
                u = bad[rng.randrange(len(bad))]
                if not adj[u]:
                    break
                ws = sorted(adj[u])
                drop(u, ws[rng.randrange(len(ws))])

    period = q * (q - 1) // 2
    r = len(edges) % period
    if r and not any(deg[v] % (q - 1) for v in range(g.n)):
        if q == 3:
            _drop_cycle_mod(adj, deg, edges, deleted, r)
        else:
            _drop_half_period(adj, deg, edges, deleted, q, rng)
    return Graph(g.n, edges), deleted


def _drop_edge(adj, deg, edges, deleted, u, w):
    e = (u, w) if u < w else (w, u)
    if e in edges:
        edges.discard(e)
        adj[u].discard(w)
        adj[w].discard(u)
        deg[u] -= 1
        deg[w] -= 1
        deleted.append(e)


def _drop_cycle_mod(adj, deg, edges, deleted, r):
    """Delete one cycle with length = r (mod 3), found via BFS trees."""
    for root in sorted(adj):
        depth = {root: 0}
        parent = {root: root}
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                for w in sorted(adj[u]):
                    if w not in depth:
                        depth[w] = depth[u] + 1
                        parent[w] = u
                        nxt.append(w)
            queue = nxt
        for u in sorted(depth):
            for w in sorted(adj[u]):
                if w <= u or parent.get(w) == u or parent.get(u) == w:
                    continue
                pu, pw = u, w
                left, right = [u], [w]
                while pu != pw:
                    if depth[pu] >= depth[pw]:
                        pu = parent[pu]
                        left.append(pu)
                    else:
                        pw = parent[pw]
                        right.append(pw)
                cycle = left + right[-2::-1]
                if len(cycle) % 3 == r:
                    for i, x in enumerate(cycle):
                        y = cycle[(i + 1) % len(cycle)]
                        _drop_edge(adj, deg, edges, deleted, x, y)
                    return True
    return False


def _drop_half_period(adj, deg, edges, deleted, q, rng):
    """q=4 shift by 3 mod 6: remove a prism (two triangles + a matching)."""
    if q != 4 or len(edges) % (q * (q - 1) // 2) != 3:
        return False
    verts = sorted(v for v in adj if adj[v])
    for _ in range(4000):
        if len(verts) < 6:
            return False
        u = verts[rng.randrange(len(verts))]
        ns = sorted(adj[u])
        if len(ns) < 2:
            continue
        a, b = rng.sample(ns, 2)
        if b not in adj[a]:
            continue
        t1 = (u, a, b)
        pool = sorted(set(verts) - set(t1))
        if not pool:
            continue
        x = pool[rng.randrange(len(pool))]
        ms = sorted(adj[x] - set(t1))
        if len(ms) < 2:
            continue
        y, z = rng.sample(ms, 2)
        if z not in adj[y] or y in t1 or z in t1:
            continue
        t2 = (x, y, z)
        for perm in itertools.permutations(t2):
            if all(p in adj[s] for s, p in zip(t1, perm)):
                for s, p in zip(t1, perm):
                    _drop_edge(adj, deg, edges, deleted, s, p)
                for t in (t1, t2):
                    for i in range(3):
                        _drop_edge(adj, deg, edges, deleted, t[i], t[(i + 1) % 3])
                return True
    return False


# ===================================================================
# Packing pipeline
# ===================================================================


class PackOptions:
    """Pipeline knobs; defaults tuned for the benchmark scales."""

    __slots__ = (
        "reserve_frac",
        "gadget_frac",
        "absorb",
        "absorb_cap",
        "exact_cutoff",
        "polish_passes",
        "hamilton_tries",
        "gadget_tries",
    )

    def __init__(
        self,
        reserve_frac=Fraction(1, 24),
        gadget_frac=Fraction(1, 4),
        absorb: bool = False,
        absorb_cap: int = 6,
        exact_cutoff: int = 30,
        polish_passes: int = 8,
        hamilton_tries: int = 60,
        gadget_tries: int = 40,
    ):
        self.reserve_frac = Fraction(reserve_frac)
        self.gadget_frac = Fraction(gadget_frac)
        self.absorb = absorb
        self.absorb_cap = absorb_cap
        self.exact_cutoff = exact_cutoff
        self.polish_passes = polish_passes
        self.hamilton_tries = hamilton_tries
        self.gadget_tries = gadget_tries


class PackReport:
    """Result of one pipeline run; to_json follows the stable schema."""

    __slots__ = (
        "n",
        "p",
        "d",
        "q",
        "seed",
        "stages",
        "leave",
        "optimal_leave",
        "valid",
        "ms",
        "packing",
        "fixer_mode",
        "deleted",
    )

    def __init__(self, n, p, d, q, seed, stages, leave, optimal_leave, valid, ms,
                 packing, fixer_mode, deleted):
        self.n = n
        self.p = p
        self.d = d
        self.q = q
        self.seed = seed
        self.stages: dict[str, int] = stages
        self.leave: int = leave
        self.optimal_leave: int = optimal_leave
        self.valid: bool = valid
        self.ms: int = ms
        self.packing: Packing = packing
        self.fixer_mode: str = fixer_mode
        self.deleted = deleted

    def to_json(self, include_ms: bool = True) -> dict:
        out = {
            "version": 1,
            "params": {
                "n": self.n,
                "p": None if self.p is None else str(Fraction(self.p)),
                "d": self.d,
                "q": self.q,
                "seed": self.seed,
            },
            "stages": dict(self.stages),
            "leave": self.leave,
            "optimal_leave": self.optimal_leave,
            "valid": self.valid,
        }
        if include_ms:
            out["ms"] = self.ms
        return out

    def __repr__(self):
        return (
            f"PackReport(n={self.n}, q={self.q}, leave={self.leave}, "
            f"valid={self.valid})"
        )


def _embed_pattern(n: int, pattern: list, fixed: dict, free: set):
    """Injective vertex assignment landing every pattern edge in free.

    fixed pins some pattern vertices to host vertices; the rest are
    assigned by DFS over host vertices.  Returns the full map or None.
    """
    fresh = sorted(
        {v for e in pattern for v in e if v not in fixed}
    )
    assign = dict(fixed)

    def extend(i) -> bool:
        if i == len(fresh):
            return True
        w = fresh[i]
        placed = set(assign.values())
        for host in range(n):
            if host in placed:
                continue
            ok = True
            pend: list = []
            for x, y in pattern:
                if w not in (x, y):
                    continue
                other = y if x == w else x
                if other not in assign:
                    continue
                e = (assign[other], host)
                e = e if e[0] < e[1] else (e[1], e[0])
                if e not in free or e in pend:
                    ok = False
                    break
                pend.append(e)
            if not ok:
                continue
            assign[w] = host
            if extend(i + 1):
                return True
            del assign[w]
        return False

    return dict(assign) if extend(0) else None


def _reserve_absorber(g: Graph, x_res: Graph, main: Graph, q: int):
    """Build the omni absorber for the reserve zone and place it in main.

    Returns (omni, vertex map, embedded edge set) or None.  The
    embedded edges are set aside: excluded from every packing stage so
    the final table lookup can spend them on the actual leftover.
    """
    try:
        omni = naive_omni_absorber(Graph(g.n, x_res.edges), q)
    except ValueError:
        return None
    support = sorted({v for e in x_res.edges for v in e})
    pattern = omni.a.sorted_edges()
    mapping = _embed_pattern(
        g.n, pattern, {v: v for v in support}, set(main.edges)
    )
    if mapping is None:
        return None
    emb_edges = set()
    for x, y in pattern:
        a, b = mapping[x], mapping[y]
        emb_edges.add((a, b) if a < b else (b, a))
    return omni, mapping, frozenset(emb_edges)


def _pairs(c):
    return [(c[i], c[j]) for i in range(len(c)) for j in range(i + 1, len(c))]


def _pack(g: Graph, q: int, seed: int, opts: PackOptions, p, d) -> PackReport:
    t0 = time.perf_counter()
    rng_embed = stream(seed, "embed")
    rng_nibble = stream(seed, "nibble")
    opt_bound = optimal_leave_number(g, q)
    stages = {"fixer_deleted": 0, "nibble": 0, "reserve": 0, "absorbed": 0}

    if g.m <= opts.exact_cutoff:
        res = min_leave_packing(g, q)
        covered = res.packing.covered_edges()
        stages["nibble"] = len(covered)
        leave = g.m - len(covered)
        ms = int((time.perf_counter() - t0) * 1000)
        rep = verify_packing(g, res.packing)
        valid = rep.valid and leave >= opt_bound
        return PackReport(
            g.n, p, d, q, seed, stages, leave, opt_bound, valid, ms,
            res.packing, "exact", (),
        )

    # (ii) fixer: embed, or repair by deletion
    gadget_pool, _ = slice_graph(g, opts.gadget_frac, 1, seed ^ 0x67616467)
    emb = None
    base = g
    deleted: list = []
    try:
        emb = embed_fixer(
            g, q, rng_embed, gadget_pool, opts.hamilton_tries, opts.gadget_tries
        )
        fixer_edges = frozenset(emb.realized_edges())
        fixer_mode = "embedded"
    except EmbedFailure:
        base, deleted = fix_by_deletion(g, q, rng_embed)
        fixer_edges = frozenset()
        fixer_mode = "deletion"
        stages["fixer_deleted"] = len(deleted)

    # (iii) reserve slice from the non-fixer part; set aside an omni
    # absorber for the reserve zone when asked and the zone is tiny
    pool = Graph(g.n, base.edges - fixer_edges)
    x_res, main = slice_graph(pool, opts.reserve_frac, 1, seed ^ 0x72657376)
    absorber = None
    if opts.absorb and q == 3 and 0 < x_res.m <= opts.absorb_cap:
        absorber = _reserve_absorber(g, x_res, main, q)
    aside = absorber[2] if absorber else frozenset()
    if aside:
        main = Graph(g.n, main.edges - aside)

    # (iv) + (v) nibble on the main slice, completion through reserves
    h1 = design_hypergraph(main, q)
    h2 = reserve_hypergraph(base, main.edges, x_res.edges, q)
    match = matching_with_reserves(
        h1, h2, main.edges, rng_nibble, opts.polish_passes
    )
    reserve_set = set(match.reserve_cliques)

    # (vi) apply the fixer, then polish globally over the remainder;
    # with a live absorber the zone's unused edges are off limits (they
    # are spent by the table, or stay in the leave on a miss)
    if emb is not None:
        res = apply_fixer(g, emb)
        deleted = list(res.deleted)
        stages["fixer_deleted"] = len(deleted)
        base = res.graph
    armed = absorber is not None and len(absorber[0].table) > 1
    exclude = set(aside)
    if armed:
        covered_x = {
            e for c in match.reserve_cliques for e in _pairs(c) if e in x_res.edges
        }
        exclude |= x_res.edges - covered_x
    h_full = design_hypergraph(Graph(g.n, base.edges - exclude), q)
    index = {c: i for i, c in enumerate(h_full.cliques)}
    chosen = [index[c] for c in match.packing.cliques]
    used = {e for i in chosen for e in h_full.hedges[i]}
    _polish(h_full, chosen, used, opts.polish_passes)
    cliques = [h_full.cliques[i] for i in chosen]

    # (vii) absorb: if the leftover sits inside the zone, the table
    # decomposes it together with the whole set-aside absorber
    if absorber is not None:
        omni, mapping, _ = absorber
        leftover = frozenset(base.edges - aside - used)
        if leftover in omni.table:
            for c in omni.table[leftover].cliques:
                mapped = tuple(sorted(mapping[v] for v in c))
                cliques.append(mapped)
                stages["absorbed"] += len(_pairs(mapped))
            used |= leftover | aside

    per = q * (q - 1) // 2
    stages["reserve"] = per * sum(1 for c in cliques if c in reserve_set)
    stages["nibble"] = len(used) - stages["reserve"] - stages["absorbed"]
    packing = Packing(q, cliques)
    leave = base.m - len(used)
    ms = int((time.perf_counter() - t0) * 1000)
    rep = verify_packing(base, packing)
    valid = (
        rep.valid
        and rep.leave.m == leave
        and stages["fixer_deleted"] + leave >= opt_bound
        and sum(stages.values()) + leave == g.m
    )
    return PackReport(
        g.n, p, d, q, seed, stages, leave, opt_bound, valid, ms,
        packing, fixer_mode, tuple(deleted),
    )


def pack_gnp(n: int, p, q: int, seed: int, opts: PackOptions | None = None) -> PackReport:
    """Sample G(n, p) and run the staged packing pipeline on it."""
    opts = opts or PackOptions()
    g = gnp(n, p, seed)
    return _pack(g, q, seed, opts, Fraction(p), None)


def pack_gnd(n: int, d: int, q: int, seed: int, opts: PackOptions | None = None) -> PackReport:
    """Sample a d-regular graph and run the staged packing pipeline."""
    opts = opts or PackOptions()
    g = gnd(n, d, seed)
    return _pack(g, q, seed, opts, None, d)


# ===================================================================
# Benchmarks
# ===================================================================


def bench(
    kind: str,
    n: int,
    q: int,
    trials: int,
    master_seed: int,
    threads: int = 1,
    p=None,
    d=None,
    opts: PackOptions | None = None,
) -> tuple[dict, list[PackReport]]:
    """Seed-split trials, optionally in parallel; JSON is schedule-free.

    Per-trial wall times are deliberately left out of the JSON (they
    are the only schedule-dependent values); callers wanting timings
    read them off the returned reports.
    """
    if kind not in ("gnp", "gnd"):
        raise ValueError(f"kind must be gnp or gnd, got {kind!r}")
    seeds = [stream(master_seed, "trial", i).getrandbits(63) for i in range(trials)]

    def run(s):
        if kind == "gnp":
            return pack_gnp(n, p, q, s, opts)
        return pack_gnd(n, d, q, s, opts)

    if threads <= 1:
        reports = [run(s) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run, seeds))

    leaves = [r.leave for r in reports]
    ratios = [
        Fraction(r.stages["fixer_deleted"] + r.leave, max(r.optimal_leave, 1))
        for r in reports
    ]
    doc = {
        "version": 1,
        "kind": kind,
        "params": {
            "n": n,
            "p": None if p is None else str(Fraction(p)),
            "d": d,
            "q": q,
            "seed": master_seed,
            "trials": trials,
        },
        "trials": [r.to_json(include_ms=False) for r in reports],
        "aggregate": {
            "leave_mean": str(Fraction(sum(leaves), max(len(leaves), 1))),
            "leave_min": min(leaves, default=0),
            "leave_max": max(leaves, default=0),
            "bound_ratio_min": str(min(ratios)) if ratios else None,
            "all_valid": all(r.valid for r in reports),
        },
    }
    return doc, reports
