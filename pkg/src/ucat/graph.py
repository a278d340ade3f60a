"""Simple graphs, exact vertex functions, and induced-subtree enumeration.

Vertices are dense integer indices ``0..n-1``. Vertex subsets are plain Python
ints used as bitsets (bit ``i`` set means vertex ``i`` is a member).
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

INFINITY = math.inf


def bits(mask: int) -> list[int]:
    """Vertex indices contained in a bitset, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_rational(value) -> Fraction:
    """Parse ints, Fractions or ``"p/q"`` strings. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an int, Fraction or 'p/q' string")
    # gmpy2.mpq and friends
    return Fraction(int(value.numerator), int(value.denominator))


def format_rational(q: Fraction) -> str:
    """Canonical string form: ``"3"`` for integers, ``"p/q"`` otherwise."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..vertex_count-1``."""

    vertex_count: int
    edges: frozenset = frozenset()
    labels: tuple | None = None
    adjacency: tuple = field(init=False, repr=False, compare=False)
    neighbor_masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex_count must be nonnegative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {e} has an endpoint outside 0..{n - 1}")
            norm.add((min(u, v), max(u, v)))
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("need exactly one label per vertex")
        adj = [[] for _ in range(n)]
        masks = [0] * n
        for u, v in sorted(norm):
            adj[u].append(v)
            adj[v].append(u)
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "neighbor_masks", tuple(masks))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        norm = set()
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key in norm:
                raise ValueError(f"duplicate edge {key}")
            norm.add(key)
        return cls(n, frozenset(norm), tuple(labels) if labels is not None else None)

    @property
    def full_mask(self) -> int:
        return (1 << self.vertex_count) - 1

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (self.neighbor_masks[u] >> v) & 1 == 1

    def label(self, v: int) -> str:
        return str(self.labels[v]) if self.labels is not None else str(v)

    def __len__(self):
        return self.vertex_count


@dataclass(frozen=True)
class VertexFunction:
    """Nonnegative exact values at the vertices, extended linearly along edges."""

    graph: Graph
    values: tuple

    def __post_init__(self):
        vals = tuple(to_rational(x) for x in self.values)
        if len(vals) != self.graph.vertex_count:
            raise ValueError(
                f"expected {self.graph.vertex_count} values, got {len(vals)}")
        for i, x in enumerate(vals):
            if x < 0:
                raise ValueError(f"value at vertex {i} is negative ({x})")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, v: int) -> Fraction:
        return self.values[v]

    def __len__(self):
        return len(self.values)

    @property
    def support(self) -> int:
        m = 0
        for i, x in enumerate(self.values):
            if x > 0:
                m |= 1 << i
        return m

    def is_zero(self) -> bool:
        return not any(self.values)

    def power(self, p: int) -> "VertexFunction":
        if p < 1:
            raise ValueError("p must be a positive integer")
        return VertexFunction(self.graph, tuple(x ** p for x in self.values))

    def at_edge(self, u: int, v: int, t: Fraction) -> Fraction:
        """Value at the point a fraction ``t`` of the way from ``u`` to ``v``."""
        return (1 - t) * self.values[u] + t * self.values[v]

    def max_vertex(self) -> int:
        """Smallest index attaining the maximum."""
        best = 0
        for i, x in enumerate(self.values):
            if x > self.values[best]:
                best = i
        return best


def constant(g: Graph, c=1) -> VertexFunction:
    return VertexFunction(g, (to_rational(c),) * g.vertex_count)


# ---------------------------------------------------------------- structure

def induced_subgraph(g: Graph, s) -> tuple[Graph, list[int]]:
    """Subgraph on the vertices of ``s`` (bitset or iterable).

    Returns the new graph and ``index_map`` where ``index_map[new] = old``.
    """
    verts = bits(s) if isinstance(s, int) else sorted(set(s))
    pos = {v: i for i, v in enumerate(verts)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    labels = tuple(g.label(v) for v in verts) if g.labels is not None else None
    return Graph(len(verts), frozenset(edges), labels), verts


def component_masks(g: Graph, within: int | None = None) -> list[int]:
    """Connected components of the subgraph induced by ``within``, ordered by
    their smallest vertex."""
    if within is None:
        within = g.full_mask
    nbr = g.neighbor_masks
    rest = within
    comps = []
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            new = nbr[b.bit_length() - 1] & within & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def induced_edge_count(g: Graph, s: int) -> int:
    nbr = g.neighbor_masks
    total = 0
    m = s
    while m:
        b = m & -m
        m ^= b
        total += (nbr[b.bit_length() - 1] & s).bit_count()
    return total // 2


def is_connected_mask(g: Graph, s: int) -> bool:
    if not s:
        return False
    low = s & -s
    comp = low
    frontier = low
    nbr = g.neighbor_masks
    while frontier:
        b = frontier & -frontier
        frontier ^= b
        new = nbr[b.bit_length() - 1] & s & ~comp
        comp |= new
        frontier |= new
    return comp == s


def is_tree_mask(g: Graph, s: int) -> bool:
    """Whether ``s`` induces a tree in ``g`` (empty set does not)."""
    if not s:
        return False
    return induced_edge_count(g, s) == s.bit_count() - 1 and is_connected_mask(g, s)


def is_tree(g: Graph) -> bool:
    """Connected with ``|E| = |V| - 1``. The empty graph is not a tree."""
    if g.vertex_count == 0:
        return False
    return len(g.edges) == g.vertex_count - 1 and is_connected_mask(g, g.full_mask)


def girth(g: Graph):
    """Length of a shortest cycle, or ``math.inf`` for forests."""
    best = INFINITY
    adj = g.adjacency
    for s in range(g.vertex_count):
        dist = {s: 0}
        parent = {s: -1}
        q = deque([s])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


@dataclass(frozen=True)
class SubdivisionPoint:
    """Where a subdivision vertex sits: a fraction ``t`` along ``edge`` from its
    first endpoint (``t = 0``) to its second (``t = 1``)."""

    edge: tuple
    t: Fraction

    @property
    def barycentric(self) -> Fraction:
        """Weight on the first endpoint."""
        return 1 - self.t


def subdivide(g: Graph, f: VertexFunction, r: int):
    """Replace every edge by a path with ``r`` interior vertices.

    New vertices get the edge-linear interpolant of ``f``. Returns the refined
    graph, refined function and a provenance dict mapping each new vertex to its
    :class:`SubdivisionPoint`. Original vertices keep their indices.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if f.graph != g:
        raise ValueError("function is defined on a different graph")
    if r == 0:
        return g, f, {}
    n = g.vertex_count
    edges = []
    values = list(f.values)
    provenance = {}
    labels = list(g.labels) if g.labels is not None else None
    nxt = n
    for u, v in g.sorted_edges():
        prev = u
        for k in range(1, r + 1):
            t = Fraction(k, r + 1)
            values.append(f.at_edge(u, v, t))
            provenance[nxt] = SubdivisionPoint((u, v), t)
            if labels is not None:
                labels.append(f"{g.label(u)}~{g.label(v)}:{k}")
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, v))
    h = Graph(nxt, frozenset(edges), tuple(labels) if labels is not None else None)
    return h, VertexFunction(h, tuple(values)), provenance


def enumerate_induced_subtrees(g: Graph, max_size: int | None = None) -> Iterator[int]:
    """Yield every vertex set of size ``<= max_size`` inducing a tree.

    Connected sets are grown vertex by vertex (each set is generated once, from
    its smallest vertex); a vertex is only added when it has exactly one
    neighbour in the current set, which keeps every intermediate set a tree.
    Output is sorted by bitset value.
    """
    if max_size is None:
        max_size = g.vertex_count
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    found = list(_grow_subtrees(g, max_size))
    found.sort()
    yield from found


def _grow_subtrees(g: Graph, max_size: int):
    nbr = g.neighbor_masks
    n = g.vertex_count

    def extend(sub: int, size: int, ext: int, excluded: int):
        yield sub
        if size == max_size:
            return
        while ext:
            b = ext & -ext
            ext ^= b
            w = b.bit_length() - 1
            if (nbr[w] & sub).bit_count() != 1:
                # w closes a cycle in every superset; it stays excluded
                excluded |= b
                continue
            new_ext = ext | (nbr[w] & ~sub & ~excluded & ~b & ~ext)
            yield from extend(sub | b, size + 1, new_ext & ~excluded, excluded | b)
            excluded |= b

    for v in range(n):
        below = (1 << v) - 1  # smaller vertices belong to other roots
        yield from extend(1 << v, 1, nbr[v] & ~below & ~(1 << v), below | (1 << v))


def maximal_induced_subtrees(g: Graph, within: int | None = None) -> list[int]:
    """Induced subtrees of ``g[within]`` that cannot be extended by any vertex."""
    if within is None:
        within = g.full_mask
    h, index = induced_subgraph(g, within)
    out = []
    nbr = h.neighbor_masks
    for s in _grow_subtrees(h, h.vertex_count):
        frontier = 0
        m = s
        while m:
            b = m & -m
            m ^= b
            frontier |= nbr[b.bit_length() - 1]
        frontier &= ~s
        maximal = True
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            if (nbr[b.bit_length() - 1] & s).bit_count() == 1:
                maximal = False
                break
        if maximal:
            out.append(mask_of(index[i] for i in bits(s)))
    out.sort()
    return out


# ------------------------------------------------------------ constructors

def automorphisms(g: Graph, colors: Sequence | None = None,
                  limit: int = 256) -> list[tuple[int, ...]]:
    """Up to ``limit`` colour-preserving automorphisms, as tuples ``perm``
    with ``perm[v]`` the image of ``v``. The identity is always first."""
    n = g.vertex_count
    colors = list(colors) if colors is not None else [0] * n
    key = [(colors[v], g.degree(v)) for v in range(n)]
    # place vertices so that each one after the first of its component has
    # an already placed neighbour
    order, seen = [], set()
    for s in range(n):
        if s in seen:
            continue
        seen.add(s)
        q = deque([s])
        while q:
            u = q.popleft()
            order.append(u)
            for w in g.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    q.append(w)
    nbr = g.neighbor_masks
    out: list[tuple[int, ...]] = []
    image = [-1] * n
    placed = [False] * n  # targets already used

    def extend(depth):
        if len(out) >= limit:
            return
        if depth == n:
            out.append(tuple(image))
            return
        v = order[depth]
        for t in range(n):
            if placed[t] or key[t] != key[v]:
                continue
            ok = True
            for u in order[:depth]:
                if ((nbr[v] >> u) & 1) != ((nbr[t] >> image[u]) & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = t
            placed[t] = True
            extend(depth + 1)
            placed[t] = False
            image[v] = -1

    extend(0)
    out.sort(key=lambda p: p != tuple(range(n)))
    return out


def map_mask(perm: Sequence[int], mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a simple cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to ``leaves`` leaves."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# --------------------------------------------------------------------- JSON

def instance_to_dict(g: Graph, f: VertexFunction | None = None) -> dict:
    doc = {
        "vertices": [g.label(v) for v in range(g.vertex_count)],
        "edges": [list(e) for e in g.sorted_edges()],
    }
    if f is not None:
        doc["values"] = [format_rational(x) for x in f.values]
    return doc


class InstanceError(ValueError):
    """Malformed graph/function document; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def instance_from_dict(doc: dict) -> tuple[Graph, VertexFunction | None]:
    if not isinstance(doc, dict):
        raise InstanceError("<root>", "expected a JSON object")
    if "vertices" not in doc:
        raise InstanceError("vertices", "missing")
    verts = doc["vertices"]
    if isinstance(verts, int):
        n, labels = verts, None
    elif isinstance(verts, list):
        n, labels = len(verts), tuple(str(x) for x in verts)
        if labels == tuple(str(i) for i in range(n)):
            labels = None  # default names carry no information
    else:
        raise InstanceError("vertices", "expected a list of names or a count")
    edges = []
    seen = set()
    for i, e in enumerate(doc.get("edges", [])):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise InstanceError(f"edges[{i}]", f"expected [i, j], got {e!r}")
        u, v = e
        if u == v:
            raise InstanceError(f"edges[{i}]", "self-loop")
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceError(f"edges[{i}]", f"endpoint out of range 0..{n - 1}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InstanceError(f"edges[{i}]", "duplicate edge")
        seen.add(key)
        edges.append(key)
    g = Graph(n, frozenset(edges), labels)
    if "values" not in doc:
        return g, None
    vals = doc["values"]
    if not isinstance(vals, list) or len(vals) != n:
        raise InstanceError("values", f"expected a list of {n} rationals")
    parsed = []
    for i, x in enumerate(vals):
        try:
            q = to_rational(x)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InstanceError(f"values[{i}]", f"not an exact rational: {x!r}") from exc
        if q < 0:
            raise InstanceError(f"values[{i}]", f"negative value {format_rational(q)}")
        parsed.append(q)
    return g, VertexFunction(g, tuple(parsed))


def dumps_instance(g: Graph, f: VertexFunction | None = None, **extra) -> str:
    doc = instance_to_dict(g, f)
    doc.update(extra)
    return json.dumps(doc, indent=2)


def loads_instance(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}", exc.msg) from exc
    return instance_from_dict(doc)
