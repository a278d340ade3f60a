"""Unimodality of edge-linear functions and superlevel-set geometry.

A superlevel set ``{f >= c}`` of an edge-linear function on a graph is a union
of vertices and closed sub-intervals of edges. Points on an edge ``(u, v)``
are addressed by ``t`` in ``[0, 1]``: ``t = 0`` is ``u``, ``t = 1`` is ``v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import Graph, VertexFunction, bits, component_masks, to_rational


@dataclass(frozen=True)
class Verdict:
    """Boolean answer carrying a witness when the answer is negative."""

    ok: bool
    reason: str | None = None
    witness: object = None

    def __bool__(self):
        return self.ok


def _check_nonnegative(f: VertexFunction):
    for i, x in enumerate(f.values):
        if x < 0:
            raise ValueError(f"value at vertex {i} is negative")


def is_unimodal(g: Graph, f: VertexFunction) -> Verdict:
    """Linear-time unimodality test.

    The support must induce a tree, and ``f`` must be non-increasing along
    every edge oriented away from a maximum vertex (smallest index on ties).
    Negative reasons: ``"empty support"``, ``"disconnected"`` (witness: a pair
    of support vertices in different components), ``"cycle"`` (witness: the
    cycle's vertex list) and ``"increasing edge"`` (witness: ``(u, w)`` with
    ``u`` the parent).
    """
    _check_nonnegative(f)
    vals = f.values
    adj = g.adjacency
    supp = [v for v in range(g.vertex_count) if vals[v] > 0]
    if not supp:
        return Verdict(False, "empty support")
    root = supp[0]
    for v in supp:
        if vals[v] > vals[root]:
            root = v
    parent = {root: -1}
    order = [root]
    q = deque([root])
    non_tree = None
    while q:
        u = q.popleft()
        for w in adj[u]:
            if vals[w] <= 0:
                continue
            if w not in parent:
                parent[w] = u
                order.append(w)
                q.append(w)
            elif w != parent[u] and non_tree is None:
                non_tree = (u, w)
    if len(parent) != len(supp):
        missing = next(v for v in supp if v not in parent)
        return Verdict(False, "disconnected", (root, missing))
    if non_tree is not None:
        return Verdict(False, "cycle", _tree_cycle(parent, *non_tree))
    for w in order[1:]:
        u = parent[w]
        if vals[w] > vals[u]:
            return Verdict(False, "increasing edge", (u, w))
    return Verdict(True)


def _tree_cycle(parent: dict, a: int, b: int) -> list[int]:
    """Cycle closed by the non-tree edge ``(a, b)`` of a BFS tree."""
    anc_a = [a]
    while parent[anc_a[-1]] != -1:
        anc_a.append(parent[anc_a[-1]])
    pos = {v: i for i, v in enumerate(anc_a)}
    path_b = [b]
    while path_b[-1] not in pos:
        path_b.append(parent[path_b[-1]])
    meet = path_b[-1]
    return anc_a[: pos[meet] + 1] + path_b[-2::-1]


# ------------------------------------------------------------- complexes

def edge_interval(fu: Fraction, fv: Fraction, c: Fraction):
    """``{t in [0,1] : (1-t) fu + t fv >= c}`` as ``(lo, hi)`` or ``None``."""
    if fu >= c and fv >= c:
        return (Fraction(0), Fraction(1))
    if fu < c and fv < c:
        return None
    # exactly one endpoint clears c; the breakpoint has nonzero denominator
    t = (c - fu) / (fv - fu)
    return (Fraction(0), t) if fu >= c else (t, Fraction(1))


@dataclass(frozen=True)
class SuperlevelComplex:
    """``{f >= threshold}``: retained vertices plus one closed interval per
    edge that the set meets (full edges appear as ``(0, 1)``)."""

    graph: Graph
    threshold: Fraction
    vertices: int
    segments: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.vertices and not self.segments


@dataclass(frozen=True)
class IntersectionComplex:
    """Intersection of several superlevel sets, one per (function, threshold)."""

    graph: Graph
    parts: tuple
    vertices: int
    segments: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.vertices and not self.segments


def superlevel(g: Graph, f: VertexFunction, c) -> SuperlevelComplex:
    c = to_rational(c)
    if c <= 0:
        raise ValueError("threshold must be positive")
    vals = f.values
    verts = 0
    for v in range(g.vertex_count):
        if vals[v] >= c:
            verts |= 1 << v
    segs = []
    for u, v in g.sorted_edges():
        iv = edge_interval(vals[u], vals[v], c)
        if iv is not None:
            segs.append(((u, v), iv))
    return SuperlevelComplex(g, c, verts, tuple(segs))


def intersection_complex(g: Graph, parts: Sequence) -> IntersectionComplex:
    """``parts`` is a sequence of ``(VertexFunction, threshold)`` pairs."""
    parts = tuple((f, to_rational(c)) for f, c in parts)
    if not parts:
        raise ValueError("need at least one superlevel set")
    verts = g.full_mask
    for f, c in parts:
        m = 0
        for v in range(g.vertex_count):
            if f.values[v] >= c:
                m |= 1 << v
        verts &= m
    segs = []
    for u, v in g.sorted_edges():
        lo, hi = Fraction(0), Fraction(1)
        for f, c in parts:
            iv = edge_interval(f.values[u], f.values[v], c)
            if iv is None:
                lo, hi = Fraction(1), Fraction(0)
                break
            lo, hi = max(lo, iv[0]), min(hi, iv[1])
        if lo <= hi:
            segs.append(((u, v), (lo, hi)))
    return IntersectionComplex(g, parts, verts, tuple(segs))


def complex_pieces(cx) -> tuple[int, bool]:
    """Number of connected components and whether a cycle is present."""
    g = cx.graph
    parent = {v: v for v in bits(cx.vertices)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    floating = 0
    cycle = False
    for (u, v), (lo, hi) in cx.segments:
        at_u, at_v = lo == 0, hi == 1
        if at_u and at_v:
            a, b = find(u), find(v)
            if a == b:
                cycle = True
            else:
                parent[a] = b
        elif not at_u and not at_v:
            floating += 1
    roots = {find(v) for v in parent}
    return len(roots) + floating, cycle


def is_contractible(cx) -> bool:
    """Nonempty, connected and acyclic. Empty complexes return ``False``."""
    if cx.is_empty:
        return False
    count, cycle = complex_pieces(cx)
    return count == 1 and not cycle


# ------------------------------------------------------ strong condition

@dataclass(frozen=True)
class StrongVerdict:
    """Result of :func:`is_strong_decomposition`.

    On failure ``thresholds`` maps component indices to thresholds whose
    superlevel sets have a disconnected intersection, ``case`` says which
    pattern produced it and ``complex`` is the offending intersection.
    """

    ok: bool
    thresholds: dict = field(default_factory=dict)
    case: str | None = None
    complex: IntersectionComplex | None = None

    def __bool__(self):
        return self.ok


def is_strong_decomposition(g: Graph, components: Sequence[VertexFunction]) -> StrongVerdict:
    """Decide whether every intersection of component superlevel sets is
    contractible or empty.

    Every superlevel set of a unimodal component is a tree, so intersections
    can only fail by being disconnected. A disconnected intersection shows one
    of three patterns, each decided exactly:

    * ``"vertices"``: the retained vertices induce a disconnected subgraph.
      Vertex membership only changes at vertex values, so thresholds range over
      each component's distinct positive values.
    * ``"vertex+segment"``: some vertex is retained and some edge carries an
      interior-only segment. Two components suffice (one excluding each end).
    * ``"two segments"``: two edges carry interior-only segments. At most four
      components are involved (the end excluders).

    In the last two patterns every requirement is an upper bound on thresholds
    except the strict exclusions, so feasibility is decided by pushing each
    threshold down to its exclusion bound.
    """
    comps = list(components)
    for i, h in enumerate(comps):
        verdict = is_unimodal(g, h)
        if not verdict:
            raise ValueError(f"component {i} is not unimodal ({verdict.reason})")
    if len(comps) < 2:
        return StrongVerdict(True)

    found = _vertex_pattern(g, comps)
    if found is None:
        found = _segment_patterns(g, comps)
    if found is None:
        return StrongVerdict(True)
    thresholds, case = found
    cx = intersection_complex(g, [(comps[i], c) for i, c in sorted(thresholds.items())])
    # re-derive the failure from the definition; a mismatch is a bug
    if cx.is_empty or is_contractible(cx):
        raise AssertionError(f"strong-check witness {thresholds} does not disconnect")
    return StrongVerdict(False, dict(sorted(thresholds.items())), case, cx)


def _vertex_pattern(g: Graph, comps):
    n = g.vertex_count
    levels = []
    for h in comps:
        vals = sorted({x for x in h.values if x > 0})
        sets = []
        for c in vals:
            m = 0
            for v in range(n):
                if h.values[v] >= c:
                    m |= 1 << v
            sets.append((c, m))
        levels.append(sets)
    # reachable vertex sets -> the thresholds that produced them
    reach = {g.full_mask: {}}
    for i, sets in enumerate(levels):
        new = dict(reach)
        for m0, th in reach.items():
            for c, m in sets:
                s = m0 & m
                if s and s not in new:
                    t2 = dict(th)
                    t2[i] = c
                    new[s] = t2
        reach = new
    for s, th in sorted(reach.items(), key=lambda kv: (len(kv[1]), kv[0])):
        if len(th) >= 2 and len(component_masks(g, s)) > 1:
            return th, "vertices"
    return None


def _segment_patterns(g: Graph, comps):
    vals = [h.values for h in comps]
    k = len(comps)
    # edges where one component rises and another falls: (edge, riser, faller)
    floats = []
    for u, v in g.sorted_edges():
        for i in range(k):
            if vals[i][v] > vals[i][u]:
                for j in range(k):
                    if j != i and vals[j][u] > vals[j][v]:
                        floats.append(((u, v), i, j))
    if not floats:
        return None

    for (u, v), i, j in floats:
        # riser i excludes u, faller j excludes v
        low = {i: vals[i][u], j: vals[j][v]}
        for w in range(g.vertex_count):
            if vals[i][w] > low[i] and vals[j][w] > low[j]:
                th = _float_thresholds(low, comps, [(u, v)], [w])
                if th is not None:
                    return th, "vertex+segment"

    for a in range(len(floats)):
        (e1, i1, j1) = floats[a]
        for b in range(a + 1, len(floats)):
            (e2, i2, j2) = floats[b]
            if e1 == e2:
                continue
            low = {}
            for idx, bound in ((i1, vals[i1][e1[0]]), (j1, vals[j1][e1[1]]),
                               (i2, vals[i2][e2[0]]), (j2, vals[j2][e2[1]])):
                low[idx] = max(low.get(idx, bound), bound)
            th = _float_thresholds(low, comps, [e1, e2], [])
            if th is not None:
                return th, "two segments"
    return None


def _float_thresholds(low: dict, comps, edges, vertices):
    """Thresholds just above ``low`` keeping ``vertices`` retained and an
    interior point of each edge inside every involved superlevel set; ``None``
    when even the limit ``c -> low`` fails."""
    margin = None

    def take(gap):
        nonlocal margin
        margin = gap if margin is None else min(margin, gap)

    for w in vertices:
        for i, lo in low.items():
            gap = comps[i].values[w] - lo
            if gap <= 0:
                return None
            take(gap)
    for u, v in edges:
        # open interval of t where every involved component exceeds its bound
        a, b = Fraction(0), Fraction(1)
        for i, lo in low.items():
            fu, fv = comps[i].values[u], comps[i].values[v]
            if fu == fv:
                if fu <= lo:
                    return None
                continue
            t = (lo - fu) / (fv - fu)
            if fv > fu:
                a = max(a, t)
            else:
                b = min(b, t)
        if a >= b:
            return None
        mid = (a + b) / 2
        for i, lo in low.items():
            fu, fv = comps[i].values[u], comps[i].values[v]
            take((1 - mid) * fu + mid * fv - lo)
    return {i: lo + margin / 2 for i, lo in low.items()}
