"""Shared fixtures, graph families and independent reference checks.

Reference code here deliberately avoids the package's own algorithms: it goes
through networkx or plain enumeration so that agreement means something.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from ucat.graph import Graph, VertexFunction

SESSION_START = time.perf_counter()
CRITERIA: dict[int, str] = {}


# --------------------------------------------------------------- graph families

def to_graph(G: nx.Graph) -> Graph:
    G = nx.convert_node_labels_to_integers(G)
    return Graph.from_edges(G.number_of_nodes(), list(G.edges()))


def to_nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.vertex_count))
    G.add_edges_from(g.edges)
    return G


def connected_graphs(max_n: int, min_n: int = 1) -> list[Graph]:
    """All connected graphs up to isomorphism with ``min_n..max_n`` vertices."""
    out = []
    for G in nx.graph_atlas_g()[1:]:
        n = G.number_of_nodes()
        if min_n <= n <= max_n and nx.is_connected(G):
            out.append(to_graph(G))
    return out


def all_graphs(max_n: int) -> list[Graph]:
    return [to_graph(G) for G in nx.graph_atlas_g()[1:] if G.number_of_nodes() <= max_n]


def trees(n: int) -> list[Graph]:
    if n == 1:
        return [Graph(1, frozenset())]
    return [to_graph(T) for T in nx.nonisomorphic_trees(n)]


def random_tree(rng: random.Random, n: int) -> Graph:
    return Graph.from_edges(n, [(i, rng.randrange(i)) for i in range(1, n)])


def random_function(rng: random.Random, g: Graph, top: int = 3, nonzero=True) -> VertexFunction:
    while True:
        vals = tuple(Fraction(rng.randint(0, top)) for _ in range(g.vertex_count))
        if any(vals) or not nonzero:
            return VertexFunction(g, vals)


def func(g: Graph, values) -> VertexFunction:
    return VertexFunction(g, tuple(Fraction(v) for v in values))


# ------------------------------------------------------------ reference checks

def nx_is_tree_subset(g: Graph, s) -> bool:
    s = list(s)
    return bool(s) and nx.is_tree(to_nx(g).subgraph(s))


def superlevel_unimodal(g: Graph, f: VertexFunction) -> bool:
    """Unimodality straight from the definition.

    On each edge an edge-linear function meets ``{f >= c}`` in an interval
    touching an endpoint that clears ``c``, so ``{f >= c}`` deformation
    retracts onto the subgraph induced by ``{v : f(v) >= c}``. Thresholds:
    every distinct positive value and the midpoints between them.
    """
    vals = sorted({x for x in f.values if x > 0})
    if not vals:
        return False
    levels = list(vals) + [(a + b) / 2 for a, b in zip(vals, vals[1:])]
    G = to_nx(g)
    for c in levels:
        kept = [v for v in range(g.vertex_count) if f.values[v] >= c]
        if kept and not nx.is_tree(G.subgraph(kept)):
            return False
    return True


def brute_tree_cover(g: Graph) -> int:
    """Fewest vertex sets, each inducing a tree, covering every vertex.

    Plain enumeration over all subsets; no maximality shortcut.
    """
    G = to_nx(g)
    n = g.vertex_count
    tree_sets = [frozenset(s) for r in range(1, n + 1) for s in combinations(range(n), r)
                 if nx.is_tree(G.subgraph(s))]
    everything = frozenset(range(n))
    for k in range(1, n + 1):
        for combo in combinations(tree_sets, k):
            if frozenset().union(*combo) == everything:
                return k
    raise AssertionError("singletons cover")


# ----------------------------------------------------------------- parallelism

def workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def parallel_map(fn, items, chunksize: int = 64):
    """``map`` over processes when more than one core is available."""
    items = list(items)
    if workers() == 1 or len(items) < 2 * chunksize:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers()) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


# ---------------------------------------------------------- acceptance report

@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(number: int, ok: bool, detail: str):
        CRITERIA[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(CRITERIA[number])
        return ok

    return record


def pytest_collection_modifyitems(config, items):
    # the wall-time criterion must run after everything else
    last = [it for it in items if it.name == "test_criterion_10_total_wall_time"]
    rest = [it for it in items if it.name != "test_criterion_10_total_wall_time"]
    items[:] = rest + last


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[number])
