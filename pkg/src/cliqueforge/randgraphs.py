"""Seeded random graph models.

All randomness flows through named streams derived from one master
seed: stream(seed, tag, index) hashes the triple, so every consumer
gets an independent generator and identical triples replay identical
streams regardless of call order elsewhere.

Edge coins are 64-bit threshold draws against floor(p 2^64): exact for
dyadic p, off by less than 2^-64 otherwise.  The d-regular model is
the pairing model with double-edge-switch repair; it is deterministic
under the seed but exact uniformity over d-regular graphs is not
claimed.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction

from .graphs import Graph

__all__ = ["stream", "bernoulli", "gnp", "slice_graph", "gnd"]


def stream(master: int, tag: str, index: int = 0) -> random.Random:
    """Independent generator for (master seed, purpose tag, index)."""
    digest = hashlib.sha256(f"{master}:{tag}:{index}".encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def _threshold(p: Fraction) -> int:
    return (p.numerator << 64) // p.denominator


def bernoulli(rng: random.Random, p: Fraction) -> bool:
    return rng.getrandbits(64) < _threshold(p)


def _as_probability(p) -> Fraction:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    return p


def gnp(n: int, p, seed: int) -> Graph:
    """Binomial random graph: every pair flips one coin, in pair order."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    p = _as_probability(p)
    rng = stream(seed, "gnp")
    threshold = _threshold(p)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.getrandbits(64) < threshold
    ]
    return Graph(n, edges)


def slice_graph(g: Graph, p1, p, seed: int) -> tuple[Graph, Graph]:
    """Split G into (G1, G - G1) keeping each edge with probability p1/p.

    When G ~ G(n, p) the first part is marginally G(n, p1); the coins
    run over sorted edges so the split depends only on the edge set.
    """
    p1 = Fraction(p1)
    p = Fraction(p)
    if not 0 <= p1 <= p:
        raise ValueError(f"need 0 <= p1 <= p, got p1={p1}, p={p}")
    if p == 0:
        return Graph(g.n, []), g
    rng = stream(seed, "slice")
    threshold = _threshold(p1 / p)
    kept = [e for e in g.sorted_edges() if rng.getrandbits(64) < threshold]
    first = Graph(g.n, kept)
    return first, Graph(g.n, g.edges - first.edges)


def gnd(n: int, d: int, seed: int) -> Graph:
    """Random d-regular simple graph via stub pairing plus switch repair.

    Pairs the n*d stubs uniformly, then removes loops and duplicate
    edges with double edge switches against randomly chosen partners;
    restarts on a stuck configuration.  Degrees are exactly d.
    """
    if d < 0 or d >= n:
        raise ValueError(f"need 0 <= d < n, got d={d}, n={n}")
    if n * d % 2:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    rng = stream(seed, "gnd")
    for _ in range(200):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]
        if _repair(pairs, rng):
            return Graph(n, pairs)
    raise RuntimeError(f"pairing model failed to produce a simple graph (n={n}, d={d})")


def _repair(pairs: list[tuple[int, int]], rng: random.Random) -> bool:
    """Switch away loops and duplicates in place; False when stuck."""

    def key(i):
        u, v = pairs[i]
        return (u, v) if u < v else (v, u)

    counts: dict[tuple[int, int], int] = {}
    bad: set[int] = set()
    for i, (u, v) in enumerate(pairs):
        if u == v:
            bad.add(i)
        else:
            counts[key(i)] = counts.get(key(i), 0) + 1
    for i in range(len(pairs)):
        if pairs[i][0] != pairs[i][1] and counts[key(i)] > 1:
            bad.add(i)

    budget = 200 * max(len(pairs), 1)
    while bad and budget:
        budget -= 1
        i = min(bad)
        j = rng.randrange(len(pairs))
        if j == i:
            continue
        u, v = pairs[i]
        a, b = pairs[j]
        # switch to (u, a), (v, b); requires both new pairs simple and fresh
        if u == a or v == b:
            continue
        new1 = (u, a) if u < a else (a, u)
        new2 = (v, b) if v < b else (b, v)
        if new1 == new2 or counts.get(new1, 0) or counts.get(new2, 0):
            continue
        # remove both old pairs from the counts, then re-add the new ones
        for idx in (i, j):
            u0, v0 = pairs[idx]
            if u0 != v0:
                counts[key(idx)] -= 1
        pairs[i] = (u, a)
        pairs[j] = (v, b)
        counts[new1] = counts.get(new1, 0) + 1
        counts[new2] = counts.get(new2, 0) + 1
        bad.discard(i)
        bad.discard(j)
        # a removed duplicate may have freed its twin
        stale = [t for t in bad if pairs[t][0] != pairs[t][1] and counts[key(t)] == 1]
        for t in stale:
            bad.discard(t)
    return not bad
