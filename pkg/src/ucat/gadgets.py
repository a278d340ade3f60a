"""Reduction instances and a harness checking each equivalence on small graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import oracles
from .exact import Budget, exact_ucat, min_tree_cover, ucat_leq
from .graph import (
    Graph,
    VertexFunction,
    bits,
    constant,
    format_rational,
    instance_to_dict,
    is_tree_mask,
)

MAX_TWO_TREES_VERTICES = 20


@dataclass(frozen=True)
class GadgetInstance:
    kind: str  # "coloring-apex" or "vertex-cover"
    source: Graph
    graph: Graph
    function: VertexFunction
    params: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = instance_to_dict(self.graph, self.function)
        prov = {}
        for key, val in self.provenance.items():
            if isinstance(val, dict):
                prov[key] = {("-".join(map(str, k)) if isinstance(k, tuple) else str(k)): v
                             for k, v in val.items()}
            else:
                prov[key] = sorted(val) if isinstance(val, (set, frozenset)) else val
        doc["kind"] = self.kind
        doc["params"] = dict(self.params)
        doc["provenance"] = prov
        doc["source"] = instance_to_dict(self.source)
        return doc


def coloring_gadget(g: Graph, k: int) -> GadgetInstance:
    """Add ``k`` mutually adjacent apex vertices joined to every vertex of
    ``g``; the function is constant 1. ``g`` is ``k``-colourable iff this
    function splits into at most ``k`` unimodal summands."""
    if k < 3:
        raise ValueError("the apex construction needs k >= 3")
    n = g.vertex_count
    apexes = list(range(n, n + k))
    edges = set(g.edges)
    for a in apexes:
        for v in range(n):
            edges.add((v, a))
    for i, a in enumerate(apexes):
        for b in apexes[i + 1:]:
            edges.add((a, b))
    labels = None
    if g.labels is not None:
        labels = tuple(g.labels) + tuple(f"w{i}" for i in range(k))
    h = Graph(n + k, frozenset(edges), labels)
    return GadgetInstance("coloring-apex", g, h, constant(h, 1), {"k": k},
                          {"original": {v: v for v in range(n)}, "apex": apexes})


def vertex_cover_gadget(g: Graph) -> GadgetInstance:
    """Subdivide every edge once; degree at original vertices, 1 at midpoints.

    Isolated vertices get value 0 and are listed under ``provenance["isolated"]``.
    """
    n = g.vertex_count
    edges = []
    values = [Fraction(g.degree(v)) for v in range(n)]
    midpoint = {}
    labels = list(g.labels) if g.labels is not None else None
    for idx, (u, v) in enumerate(g.sorted_edges()):
        m = n + idx
        midpoint[(u, v)] = m
        edges += [(u, m), (m, v)]
        values.append(Fraction(1))
        if labels is not None:
            labels.append(f"{g.label(u)}~{g.label(v)}")
    h = Graph(n + len(midpoint), frozenset(edges), tuple(labels) if labels else None)
    isolated = [v for v in range(n) if g.degree(v) == 0]
    return GadgetInstance("vertex-cover", g, h, VertexFunction(h, tuple(values)), {},
                          {"original": {v: v for v in range(n)}, "midpoint": midpoint,
                           "isolated": isolated})


class NotACover(ValueError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} has no endpoint in the cover")
        self.edge = edge


def cover_component_functions(instance: GadgetInstance, cover) -> list[VertexFunction]:
    """One summand per cover vertex, following the star construction.

    The summand for cover vertex ``c`` takes ``deg(c)`` at ``c``, 1 at
    neighbours outside the cover and at midpoints towards them, and 1/2 at
    midpoints of edges whose other end is also in the cover.
    """
    if instance.kind != "vertex-cover":
        raise ValueError("expected a vertex-cover gadget")
    g = instance.source
    cover = sorted(set(cover))
    ok, edge = oracles.cover_check(g, cover)
    if not ok:
        raise NotACover(edge)
    in_cover = set(cover)
    mid = instance.provenance["midpoint"]
    h = instance.graph
    out = []
    for c in cover:
        vals = [Fraction(0)] * h.vertex_count
        vals[c] = Fraction(g.degree(c))
        for w in g.adjacency[c]:
            m = mid[(min(c, w), max(c, w))]
            if w in in_cover:
                vals[m] = Fraction(1, 2)
            else:
                vals[w] = Fraction(1)
                vals[m] = Fraction(1)
        out.append(VertexFunction(h, tuple(vals)))
    return out


@dataclass(frozen=True)
class TwoTrees:
    ok: bool
    parts: tuple | None = None

    def __bool__(self):
        return self.ok


def two_trees_decision(g: Graph, disjoint: bool) -> TwoTrees:
    """Can the vertices be covered by two induced trees (disjoint if asked)?

    Brute force over vertex subsets. Nonempty parts are preferred; a graph
    with no such split that is itself a tree (a single vertex) is answered
    with an empty second part, so the answer reads "at most two trees".
    """
    n = g.vertex_count
    if n > MAX_TWO_TREES_VERTICES:
        raise oracles.OracleBudgetExceeded(
            f"two-trees limit is {MAX_TWO_TREES_VERTICES} vertices, graph has {n}")
    full = (1 << n) - 1
    if disjoint:
        for s in range(1, full + 1, 2):  # vertex 0 goes in the first part
            rest = full & ~s
            if rest and is_tree_mask(g, s) and is_tree_mask(g, rest):
                return TwoTrees(True, (tuple(bits(s)), tuple(bits(rest))))
        if is_tree_mask(g, full):
            return TwoTrees(True, (tuple(bits(full)), ()))
        return TwoTrees(False)
    trees = [s for s in range(1, full + 1) if is_tree_mask(g, s)]
    for s in trees:
        if not s & 1:
            continue
        for t in trees:
            if s | t == full:
                return TwoTrees(True, (tuple(bits(s)), tuple(bits(t))))
    return TwoTrees(False)


@dataclass(frozen=True)
class ReductionReport:
    kind: str
    lhs: object
    rhs: object
    agree: bool
    certificates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "lhs": self.lhs, "rhs": self.rhs,
                "agree": self.agree, "certificates": self.certificates}


def _decomposition_doc(dec) -> list:
    if dec is None:
        return []
    return [[format_rational(x) for x in c.values] for c in dec.components]


def verify_reduction(kind: str, g: Graph, params: dict | None = None,
                     budget: Budget | None = None) -> ReductionReport:
    """Compute both sides of a reduction's equivalence independently.

    ``kind`` is one of ``"coloring"`` (needs ``params["k"]``),
    ``"vertex-cover"``, ``"two-trees"`` and ``"tree-cover"``.
    """
    params = dict(params or {})
    if kind == "coloring":
        k = params.get("k", 3)
        lhs = oracles.chromatic_decision(g, k)
        gadget = coloring_gadget(g, k)
        rhs = ucat_leq(gadget.graph, gadget.function, k, budget=budget)
        certs = {"coloring": lhs.witness, "decomposition": _decomposition_doc(rhs.certificate)}
        return ReductionReport(kind, bool(lhs), bool(rhs), bool(lhs) == bool(rhs), certs)
    if kind == "vertex-cover":
        lhs = oracles.min_vertex_cover(g)
        gadget = vertex_cover_gadget(g)
        rhs = exact_ucat(gadget.graph, gadget.function, budget=budget)
        certs = {"cover": sorted(lhs.witness),
                 "decomposition": _decomposition_doc(rhs.certificate)}
        return ReductionReport(kind, lhs.value, rhs.value, lhs.value == rhs.value, certs)
    if kind == "two-trees":
        lhs = ucat_leq(g, constant(g, 1), 2, budget=budget)
        rhs = two_trees_decision(g, disjoint=True)
        certs = {"decomposition": _decomposition_doc(lhs.certificate),
                 "partition": rhs.parts}
        return ReductionReport(kind, bool(lhs), bool(rhs), bool(lhs) == bool(rhs), certs)
    if kind == "tree-cover":
        count, cover = min_tree_cover(g, budget)
        rhs = two_trees_decision(g, disjoint=False)
        certs = {"cover": [bits(t) for t in cover], "parts": rhs.parts}
        return ReductionReport(kind, count <= 2, bool(rhs), (count <= 2) == bool(rhs), certs)
    raise ValueError(f"unknown reduction kind {kind!r}")
