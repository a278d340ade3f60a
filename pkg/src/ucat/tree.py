"""Minimal unimodal decompositions on trees.

The greedy procedure repeatedly takes a peak ``v`` of the current remainder,
pulls the function ``h_{f,v}`` (follow ``f`` down, stay level where ``f``
rises), subtracts it and recurses on the components of what is left. The peak
is a *leaf peak*: all other peaks of the remainder lie beyond one of its
neighbours.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, VertexFunction, bits, component_masks, is_tree, mask_of


@dataclass(frozen=True)
class Component:
    """One unimodal summand: its support bitset, mode vertex and values."""

    support: int
    root: int
    values: tuple

    def function(self, g: Graph) -> VertexFunction:
        return VertexFunction(g, self.values)


@dataclass(frozen=True)
class Decomposition:
    target: VertexFunction
    mode: str  # "sum" or "max"
    components: tuple

    def __len__(self):
        return len(self.components)

    def functions(self) -> list[VertexFunction]:
        g = self.target.graph
        return [c.function(g) for c in self.components]

    def verify(self) -> bool:
        """Exact re-check: components are unimodal and combine to the target."""
        from .unimodality import is_unimodal

        g = self.target.graph
        n = g.vertex_count
        for c in self.components:
            if not is_unimodal(g, c.function(g)):
                return False
        for v in range(n):
            vals = [c.values[v] for c in self.components]
            got = sum(vals, Fraction(0)) if self.mode == "sum" else max(vals, default=Fraction(0))
            if got != self.target.values[v]:
                return False
        return True


def make_component(values, root: int | None = None) -> Component:
    vals = tuple(Fraction(x) for x in values)
    supp = mask_of(i for i, x in enumerate(vals) if x > 0)
    if root is None:
        root = max(range(len(vals)), key=lambda i: (vals[i], -i)) if supp else 0
    return Component(supp, root, vals)


def _require_tree(g: Graph):
    if not is_tree(g):
        raise ValueError("graph is not a tree")


def _pull_within(g: Graph, vals, v: int, within: int) -> list:
    """``h_{f,v}`` on the subtree induced by ``within`` (zero elsewhere)."""
    h = [Fraction(0)] * g.vertex_count
    h[v] = vals[v]
    seen = {v}
    q = deque([v])
    adj = g.adjacency
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w in seen or not (within >> w) & 1:
                continue
            seen.add(w)
            if vals[w] > vals[u]:
                h[w] = h[u]
            else:
                h[w] = max(h[u] - (vals[u] - vals[w]), Fraction(0))
            q.append(w)
    return h


def pull(g: Graph, f: VertexFunction, v: int) -> Component:
    """Largest unimodal function with mode ``v`` lying below ``f``."""
    _require_tree(g)
    if f.values[v] != max(f.values):
        raise ValueError(f"vertex {v} does not attain the maximum of f")
    return make_component(_pull_within(g, f.values, v, g.full_mask), root=v)


def _plateaus(g: Graph, vals, within: int):
    """Plateau id (its smallest vertex) per vertex of ``within``, and the
    ids of peak plateaus: those with no strictly higher neighbour."""
    adj = g.adjacency
    pid = {}
    peak = set()
    for s in bits(within):
        if s in pid:
            continue
        pid[s] = s
        q = deque([s])
        is_peak = True
        while q:
            u = q.popleft()
            for w in adj[u]:
                if not (within >> w) & 1:
                    continue
                if vals[w] == vals[s]:
                    if w not in pid:
                        pid[w] = s
                        q.append(w)
                elif vals[w] > vals[s]:
                    is_peak = False
        if is_peak:
            peak.add(s)
    return pid, peak


def leaf_peaks(g: Graph, vals, within: int) -> list[int]:
    """Peak plateaus (by smallest vertex) having every other peak on one side.

    Removing such a plateau leaves at most one branch that holds a peak. On a
    tree the peaks spanned by their hull always include at least two of these
    when there are two or more peaks.
    """
    pid, peak = _plateaus(g, vals, within)
    reps = sorted(peak)
    if len(reps) == 1:
        return reps
    adj = g.adjacency
    # peak vertices per rooted subtree
    root = reps[0]
    parent = {root: -1}
    order = [root]
    for u in order:
        for w in adj[u]:
            if (within >> w) & 1 and w not in parent:
                parent[w] = u
                order.append(w)
    cnt = {u: int(pid[u] in peak) for u in order}
    for u in reversed(order[1:]):
        cnt[parent[u]] += cnt[u]
    total = cnt[root]
    members = {}
    for u in order:
        members.setdefault(pid[u], []).append(u)
    out = []
    for r in reps:
        plat = members[r]
        inside = set(plat)
        hit = 0
        below = len(plat)
        for u in plat:
            for w in adj[u]:
                if w in inside or parent.get(w) != u:
                    continue
                hit += cnt[w] > 0
                below += cnt[w]
        hit += total > below
        if hit <= 1:
            out.append(r)
    return out


def choose_mode(g: Graph, vals, within: int) -> int:
    """The vertex :func:`greedy_decompose` pulls at on the subtree ``within``:
    the smallest leaf peak (see :func:`leaf_peaks`)."""
    return leaf_peaks(g, vals, within)[0]


def _step(g: Graph, vals, within: int, v: int):
    h = _pull_within(g, vals, v, within)
    rem = [vals[i] - h[i] if (within >> i) & 1 else Fraction(0) for i in range(len(vals))]
    supp = mask_of(i for i in bits(within) if rem[i] > 0)
    return h, rem, component_masks(g, supp)


def greedy_decompose(g: Graph, f: VertexFunction) -> Decomposition:
    """Minimal sum-decomposition of ``f`` on the tree ``g``.

    Each step pulls at a leaf peak rather than at a global maximum: a global
    maximum with peaks in several branches need not be a mode of any minimal
    decomposition (on the spider with centre 3, legs 1-2, the three leaves
    carry the three summands). Remainder components are processed by
    ascending smallest vertex.
    """
    _require_tree(g)
    comps = []
    work = [(list(f.values), c) for c in component_masks(g, f.support)]
    # depth-first on a stack, pushed in reverse to keep ascending order
    stack = list(reversed(work))
    while stack:
        vals, within = stack.pop()
        v = choose_mode(g, vals, within)
        h, rem, children = _step(g, vals, within, v)
        comps.append(make_component(h, root=v))
        stack.extend((rem, c) for c in reversed(children))
    return Decomposition(f, "sum", tuple(comps))


def ucat_infinity_tree(g: Graph, f: VertexFunction) -> int:
    """Number of local maxima, a connected plateau counting once."""
    _require_tree(g)
    if f.is_zero():
        raise ValueError("ucat^inf of the zero function is undefined here")
    vals = f.values
    adj = g.adjacency
    seen = set()
    count = 0
    for s in range(g.vertex_count):
        if s in seen or vals[s] == 0:
            continue
        plateau = {s}
        q = deque([s])
        is_max = True
        while q:
            u = q.popleft()
            for w in adj[u]:
                if vals[w] == vals[s]:
                    if w not in plateau:
                        plateau.add(w)
                        q.append(w)
                elif vals[w] > vals[s]:
                    is_max = False
        seen |= plateau
        count += is_max
    return count


def ucat_p_tree(g: Graph, f: VertexFunction, p: int) -> Decomposition:
    """Greedy decomposition of the vertexwise power ``f**p``."""
    return greedy_decompose(g, f.power(p))
