"""Fractional K_q machinery over exact rationals.

An edge gadget on an r-set e and a disjoint q-set J assigns rational
weights to the q-subsets of e u J so that the load on every r-subset
is 1 at e and 0 elsewhere.  The linear system is square (there are as
many q-subsets as r-subsets of a (q+r)-set) and nonsingular, so the
gadget is unique; its weights can be negative, which is why weightings
here carry signed rationals and verification enforces nonnegativity
separately.

Boosting perturbs the uniform weighting 1/d by gadget multiples so
that every edge load lands exactly on its target: the per-edge
corrections do not interact because each gadget loads only its own
edge.  Everything is Fraction arithmetic; there are no tolerances.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from .graphs import Graph

__all__ = [
    "EdgeGadget",
    "edge_gadget",
    "CliqueWeighting",
    "parse_weighting",
    "serialize_weighting",
    "BoostResult",
    "boost",
    "fractional_kq_decomposition",
    "two_layer_boost",
    "verify_fractional",
    "fractional_problems",
    "SampleResult",
    "sample_regular_cliques",
]


# ===================================================================
# Exact linear algebra
# ===================================================================


def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over rationals; None when singular."""
    n = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def _solve_min_norm(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Minimum-norm solution of an underdetermined full-row-rank system."""
    rows = len(a)
    cols = len(a[0])
    gram = [
        [sum(a[i][k] * a[j][k] for k in range(cols)) for j in range(rows)]
        for i in range(rows)
    ]
    y = _solve_square(gram, b)
    if y is None:
        return None
    return [sum(a[i][k] * y[i] for i in range(rows)) for k in range(cols)]


# ===================================================================
# Edge gadgets
# ===================================================================


class EdgeGadget:
    """Signed weights on the q-subsets of e u J with unit load on e only."""

    __slots__ = ("q", "r", "e", "j", "psi", "max_abs", "bound_ok")

    def __init__(self, q, r, e, j, psi):
        self.q = q
        self.r = r
        self.e = e
        self.j = j
        self.psi: dict[tuple[int, ...], Fraction] = psi
        self.max_abs = max(abs(v) for v in psi.values())
        self.bound_ok = self.max_abs <= 2**r * math.factorial(r)

    def load(self, sub: tuple[int, ...]) -> Fraction:
        """Total weight of the q-subsets containing sub."""
        s = set(sub)
        return sum(
            (v for h, v in self.psi.items() if s <= set(h)), start=Fraction(0)
        )

    def __repr__(self):
        return f"EdgeGadget(q={self.q}, r={self.r}, max_abs={self.max_abs})"


@lru_cache(maxsize=None)
def _canonical_gadget(q: int, r: int) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    verts = range(q + r)
    cols = list(itertools.combinations(verts, q))
    rows = list(itertools.combinations(verts, r))
    e = tuple(range(r))
    a = [
        [Fraction(1 if set(row) <= set(col) else 0) for col in cols] for row in rows
    ]
    b = [Fraction(1 if row == e else 0) for row in rows]
    if len(rows) == len(cols):
        x = _solve_square(a, b)
    else:
        x = _solve_min_norm(a, b)
    if x is None:
        raise AssertionError(
            f"internal error: gadget system (q={q}, r={r}) is singular"
        )
    return tuple(zip(cols, x))


def edge_gadget(q: int, r: int = 2, e=None, j=None) -> EdgeGadget:
    """The unique gadget for e over J (canonical labels when omitted).

    Solved once per (q, r) and transported by relabeling; uniqueness of
    the solution makes the transport independent of the order chosen.
    """
    if q < 3:
        raise ValueError(f"q must be at least 3, got {q}")
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    e = tuple(sorted(e)) if e is not None else tuple(range(r))
    j = tuple(sorted(j)) if j is not None else tuple(range(r, r + q))
    if len(e) != r or len(j) != q or set(e) & set(j):
        raise ValueError("need |e| = r and |J| = q with e, J disjoint")
    labels = e + j
    psi = {
        tuple(sorted(labels[i] for i in h)): v for h, v in _canonical_gadget(q, r)
    }
    return EdgeGadget(q, r, e, j, psi)


# ===================================================================
# Weightings
# ===================================================================


class CliqueWeighting:
    """Rational weights on q-cliques; weights may be negative.

    Nonnegativity is a property of valid fractional packings, not of
    the container: boost outputs are allowed to go negative and are
    then reported as such by verification.
    """

    __slots__ = ("q", "weights", "_loads")

    def __init__(self, q: int, weights: dict):
        self.q = q
        ws: dict[tuple[int, ...], Fraction] = {}
        for c, v in weights.items():
            t = tuple(sorted(c))
            if len(t) != q or len(set(t)) != q:
                raise ValueError(f"clique {t} does not have {q} distinct vertices")
            ws[t] = ws.get(t, Fraction(0)) + Fraction(v)
        self.weights = ws
        self._loads = None

    def loads(self) -> dict[tuple[int, int], Fraction]:
        """Edge load map, computed once.  Do not mutate."""
        if self._loads is None:
            out: dict[tuple[int, int], Fraction] = {}
            for c, v in self.weights.items():
                for i in range(self.q):
                    for k in range(i + 1, self.q):
                        e = (c[i], c[k])
                        out[e] = out.get(e, Fraction(0)) + v
            self._loads = out
        return self._loads

    def edge_load(self, u: int, v: int) -> Fraction:
        e = (u, v) if u < v else (v, u)
        return self.loads().get(e, Fraction(0))

    def min_weight(self) -> Fraction:
        return min(self.weights.values(), default=Fraction(0))

    def __len__(self):
        return len(self.weights)

    def __repr__(self):
        return f"CliqueWeighting(q={self.q}, cliques={len(self.weights)})"


def serialize_weighting(w: CliqueWeighting) -> str:
    out = [f"{w.q} {len(w.weights)}"]
    for c in sorted(w.weights):
        out.append(" ".join(str(v) for v in c) + f" {w.weights[c]}")
    return "\n".join(out) + "\n"


def parse_weighting(text: str) -> CliqueWeighting:
    lines = [
        (i, ln.strip())
        for i, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise ValueError("line 1: empty weighting file, expected 'q k' header")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ValueError(f"line {lineno}: expected 'q k' header")
    q, k = int(parts[0]), int(parts[1])
    if len(lines) - 1 != k:
        raise ValueError(
            f"line {lineno}: header promises {k} cliques, file has {len(lines) - 1}"
        )
    weights = {}
    for lineno, ln in lines[1:]:
        fields = ln.split()
        if len(fields) != q + 1:
            raise ValueError(f"line {lineno}: expected {q} vertices and a weight")
        try:
            c = tuple(int(x) for x in fields[:q])
            v = Fraction(fields[q])
        except ValueError:
            raise ValueError(f"line {lineno}: bad clique or weight in {ln!r}")
        if c in weights:
            raise ValueError(f"line {lineno}: clique {c} listed twice")
        weights[c] = v
    return CliqueWeighting(q, weights)


# ===================================================================
# Boosting
# ===================================================================


class BoostResult:
    """Weighting plus the exactness and range diagnostics of one boost."""

    __slots__ = ("weighting", "in_range", "max_deviation", "c_range")

    def __init__(self, weighting, in_range, max_deviation, c_range):
        self.weighting: CliqueWeighting = weighting
        self.in_range: bool = in_range
        self.max_deviation: Fraction = max_deviation
        self.c_range: tuple[Fraction, Fraction] = c_range

    def __repr__(self):
        return (
            f"BoostResult(cliques={len(self.weighting)}, in_range={self.in_range}, "
            f"max_deviation={self.max_deviation})"
        )


def _as_targets(g: Graph, phi) -> dict[tuple[int, int], Fraction]:
    if isinstance(phi, dict):
        out = {}
        for e in g.sorted_edges():
            if e not in phi:
                raise ValueError(f"target missing for edge {e}")
            out[e] = Fraction(phi[e])
        return out
    val = Fraction(phi)
    return {e: val for e in g.sorted_edges()}


def boost(g: Graph, q: int, h_cliques, qset_cliques, phi, d) -> BoostResult:
    """Weighting on h_cliques with edge loads exactly phi.

    Starts every clique at 1/d, then adds c_e/d gadget multiples over
    the (q+2)-cliques at each edge, c_e = (d phi(e) - |H(e)|)/|Q(e)|.
    Every q-subset of every member of qset_cliques must be in
    h_cliques, and every edge needs at least one member; the final
    loads are asserted equal to the targets (the corrections at
    different edges never interact).
    """
    d = Fraction(d)
    if d <= 0:
        raise ValueError(f"d must be positive, got {d}")
    targets = _as_targets(g, phi)
    hset = {tuple(sorted(c)) for c in h_cliques}
    psi: dict[tuple[int, ...], Fraction] = {h: 1 / d for h in hset}
    h_at_edge: dict[tuple[int, int], int] = {}
    for h in hset:
        for e in itertools.combinations(h, 2):
            h_at_edge[e] = h_at_edge.get(e, 0) + 1
    q_at_edge: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    for qc in qset_cliques:
        qc = tuple(sorted(qc))
        if len(qc) != q + 2:
            raise ValueError(f"{qc} is not a (q+2)-set")
        for sub in itertools.combinations(qc, q):
            if sub not in hset:
                raise ValueError(
                    f"q-subset {sub} of {qc} is not among the chosen cliques"
                )
        for e in itertools.combinations(qc, 2):
            q_at_edge.setdefault(e, []).append(qc)

    c_values = []
    for e in g.sorted_edges():
        at = q_at_edge.get(e)
        if not at:
            raise ValueError(f"cannot boost: edge {e} is in no (q+2)-clique")
        c_e = (d * targets[e] - h_at_edge.get(e, 0)) / len(at)
        c_values.append(c_e)
        if not c_e:
            continue
        scale = c_e / d
        for qc in at:
            gad = edge_gadget(q, 2, e, tuple(v for v in qc if v not in e))
            for h, v in gad.psi.items():
                psi[h] += scale * v

    weighting = CliqueWeighting(q, psi)
    for e in g.sorted_edges():
        if weighting.edge_load(*e) != targets[e]:
            raise AssertionError(f"boost identity failed at edge {e}")
    lo, hi = Fraction(1, 2) / d, Fraction(3, 2) / d
    in_range = all(lo <= v <= hi for v in psi.values())
    max_dev = max((abs(d * v - 1) for v in psi.values()), default=Fraction(0))
    c_range = (min(c_values), max(c_values)) if c_values else (Fraction(0),) * 2
    return BoostResult(weighting, in_range, max_dev, c_range)


def fractional_kq_decomposition(g: Graph, q: int) -> BoostResult:
    """Boost over all q-cliques and (q+2)-cliques with unit targets.

    d is the mean number of q-cliques per edge.  Fails when some edge
    lies in no (q+2)-clique (then this recipe cannot reach load 1).
    """
    from .solver import enumerate_cliques

    if g.m == 0:
        return BoostResult(
            CliqueWeighting(q, {}), True, Fraction(0), (Fraction(0), Fraction(0))
        )
    h = enumerate_cliques(g, q)
    qs = enumerate_cliques(g, q + 2)
    d = Fraction(len(h) * math.comb(q, 2), g.m)
    if d == 0:
        raise ValueError("graph has no q-cliques at all")
    return boost(g, q, h, qs, 1, d)


def two_layer_boost(
    g: Graph, q: int, first: CliqueWeighting, h_cliques, qset_cliques, p, d
) -> BoostResult:
    """Finish a partial first layer into a full fractional decomposition.

    The first layer is scaled by 1/p (it was built on a p-fraction of
    its cliques); the residual targets 1 - first(e)/p are boosted over
    h_cliques and the layers are merged.  Residual targets must land
    in [0, 1].
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError(f"p must be in (0, 1], got {p}")
    targets = {}
    for e in g.sorted_edges():
        t = 1 - first.edge_load(*e) / p
        if not 0 <= t <= 1:
            raise ValueError(f"residual target {t} at edge {e} is outside [0, 1]")
        targets[e] = t
    res = boost(g, q, h_cliques, qset_cliques, targets, d)
    merged = dict(res.weighting.weights)
    for c, v in first.weights.items():
        merged[c] = merged.get(c, Fraction(0)) + v / p
    weighting = CliqueWeighting(q, merged)
    for e in g.sorted_edges():
        if weighting.edge_load(*e) != 1:
            raise AssertionError(f"two-layer identity failed at edge {e}")
    return BoostResult(weighting, res.in_range, res.max_deviation, res.c_range)


# ===================================================================
# Verification and sampling
# ===================================================================


def fractional_problems(g: Graph, w: CliqueWeighting, mode: str) -> list[str]:
    if mode not in ("packing", "decomposition"):
        raise ValueError(f"mode must be packing or decomposition, got {mode!r}")
    problems = []
    for c, v in sorted(w.weights.items()):
        if v < 0:
            problems.append(f"negative weight {v} on {c}")
        for i in range(w.q):
            for k in range(i + 1, w.q):
                if not g.has_edge(c[i], c[k]):
                    problems.append(f"{c} is not a clique of the graph")
                    break
            else:
                continue
            break
    for e in g.sorted_edges():
        load = w.edge_load(*e)
        if mode == "decomposition" and load != 1:
            problems.append(f"edge {e} has load {load}, expected 1")
        elif mode == "packing" and not 0 <= load <= 1:
            problems.append(f"edge {e} has load {load}, outside [0, 1]")
    return problems


def verify_fractional(g: Graph, w: CliqueWeighting, mode: str) -> bool:
    return not fractional_problems(g, w, mode)


class SampleResult:
    """Outcome of one Bernoulli clique draw."""

    __slots__ = ("selected", "edge_degrees", "max_deviation")

    def __init__(self, selected, edge_degrees, max_deviation):
        self.selected: tuple[tuple[int, ...], ...] = tuple(selected)
        self.edge_degrees: dict[tuple[int, int], int] = edge_degrees
        self.max_deviation: Fraction = max_deviation

    def __repr__(self):
        return (
            f"SampleResult(selected={len(self.selected)}, "
            f"max_deviation={self.max_deviation})"
        )


def sample_regular_cliques(w: CliqueWeighting, big_d, rng) -> SampleResult:
    """Keep each clique independently with probability psi(Q) D/2.

    Probabilities are realized as 64-bit thresholds (floor(p 2^64)),
    exact for dyadic p and off by under 2^-64 otherwise.  Every
    probability must be a genuine probability; the expected per-edge
    degree is load(e) D/2 and the max absolute deviation from it is
    reported.
    """
    big_d = Fraction(big_d)
    probs = {}
    for c, v in sorted(w.weights.items()):
        p = v * big_d / 2
        if not 0 <= p <= 1:
            raise ValueError(f"psi(Q) D/2 = {p} at {c} is not a probability")
        probs[c] = p
    selected = []
    for c, p in probs.items():
        threshold = (p.numerator << 64) // p.denominator
        if rng.getrandbits(64) < threshold:
            selected.append(c)
    degrees: dict[tuple[int, int], int] = {}
    for c in selected:
        for e in itertools.combinations(c, 2):
            degrees[e] = degrees.get(e, 0) + 1
    max_dev = Fraction(0)
    for e, load in w.loads().items():
        dev = abs(degrees.get(e, 0) - load * big_d / 2)
        max_dev = max(max_dev, dev)
    return SampleResult(selected, degrees, max_dev)
