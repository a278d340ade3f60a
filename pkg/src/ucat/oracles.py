"""Brute-force solvers for the classical problems behind the reductions.

These are deliberately naive: plain enumeration, no pruning, hard size limit.
They are the reference the rest of the package is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .graph import Graph

MAX_ORACLE_VERTICES = 16


class OracleBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleAnswer:
    problem: str
    value: object
    witness: object = None

    def __bool__(self):
        return bool(self.value)


def _check_size(g: Graph):
    if g.vertex_count > MAX_ORACLE_VERTICES:
        raise OracleBudgetExceeded(
            f"oracle limit is {MAX_ORACLE_VERTICES} vertices, graph has {g.vertex_count}")


def chromatic_decision(g: Graph, k: int) -> OracleAnswer:
    """Is there a proper ``k``-colouring? Vertex 0 is fixed to colour 0."""
    _check_size(g)
    n = g.vertex_count
    if n == 0:
        return OracleAnswer("coloring", True, {})
    if k < 1:
        return OracleAnswer("coloring", False)
    edges = g.sorted_edges()
    for rest in product(range(k), repeat=n - 1):
        colors = (0,) + rest
        if all(colors[u] != colors[v] for u, v in edges):
            return OracleAnswer("coloring", True, dict(enumerate(colors)))
    return OracleAnswer("coloring", False)


def chromatic_number(g: Graph) -> int:
    k = 0
    while not chromatic_decision(g, k):
        k += 1
    return k


def min_vertex_cover(g: Graph) -> OracleAnswer:
    """Smallest vertex cover, by subsets of increasing size."""
    _check_size(g)
    edges = g.sorted_edges()
    for size in range(g.vertex_count + 1):
        for s in combinations(range(g.vertex_count), size):
            chosen = set(s)
            if all(u in chosen or v in chosen for u, v in edges):
                return OracleAnswer("vertex-cover", size, frozenset(chosen))
    raise AssertionError("the full vertex set is a cover")  # pragma: no cover


def is_proper_coloring(g: Graph, coloring: dict) -> bool:
    if set(coloring) != set(range(g.vertex_count)):
        return False
    return all(coloring[u] != coloring[v] for u, v in g.edges)


def proper_coloring_to_partition(coloring: dict) -> list[frozenset]:
    classes = {}
    for v, c in coloring.items():
        classes.setdefault(c, set()).add(v)
    return [frozenset(classes[c]) for c in sorted(classes)]


def cover_check(g: Graph, s) -> tuple[bool, tuple | None]:
    """``(True, None)`` if ``s`` touches every edge, else ``(False, edge)``."""
    chosen = set(s)
    for u, v in g.sorted_edges():
        if u not in chosen and v not in chosen:
            return False, (u, v)
    return True, None
