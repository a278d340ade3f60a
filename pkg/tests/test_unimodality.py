import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import func, random_tree, superlevel_unimodal
from strategies import functions, graph_with_function, graphs, trees
from ucat.gadgets import cover_component_functions, vertex_cover_gadget
from ucat.graph import (
    Graph,
    VertexFunction,
    complete_graph,
    constant,
    cycle_graph,
    path_graph,
    subdivide,
)
from ucat.tree import greedy_decompose
from ucat.unimodality import (
    IntersectionComplex,
    SuperlevelComplex,
    edge_interval,
    intersection_complex,
    is_contractible,
    is_strong_decomposition,
    is_unimodal,
    superlevel,
)

F = Fraction


# ---------------------------------------------------------------- is_unimodal

def test_single_peak_path():
    g = path_graph(3)
    assert is_unimodal(g, func(g, [1, 2, 1]))


def test_triangle_constant_has_cycle():
    g = cycle_graph(3)
    verdict = is_unimodal(g, constant(g))
    assert not verdict and verdict.reason == "cycle"
    assert sorted(verdict.witness) == [0, 1, 2]


def test_increasing_edge_witness():
    g = path_graph(4)
    verdict = is_unimodal(g, func(g, [2, 1, 2, 0]))
    assert not verdict and verdict.reason == "increasing edge"
    assert verdict.witness == (1, 2)


def test_empty_and_disconnected_support():
    g = path_graph(3)
    assert is_unimodal(g, func(g, [0, 0, 0])).reason == "empty support"
    verdict = is_unimodal(g, func(g, [1, 0, 1]))
    assert verdict.reason == "disconnected" and set(verdict.witness) == {0, 2}


def test_support_may_avoid_a_cycle():
    # a tree support inside a cyclic graph is fine
    g = cycle_graph(4)
    assert is_unimodal(g, func(g, [2, 1, 0, 1]))


@settings(max_examples=300)
@given(graph_with_function(graphs(max_n=7), values=st.integers(0, 4).map(F)))
def test_unimodal_matches_superlevel_definition(gf):
    g, f = gf
    assert bool(is_unimodal(g, f)) == superlevel_unimodal(g, f)


@settings(max_examples=150, deadline=None)
@given(graph_with_function(graphs(max_n=6)), st.integers(1, 3))
def test_unimodal_invariant_under_subdivision(gf, r):
    g, f = gf
    h, fh, _ = subdivide(g, f, r)
    assert bool(is_unimodal(g, f)) == bool(is_unimodal(h, fh))


# ------------------------------------------------------------------ superlevel

def test_superlevel_half_edge():
    g = path_graph(2)
    cx = superlevel(g, func(g, [0, 1]), F(1, 2))
    assert cx.vertices == 0b10
    assert cx.segments == (((0, 1), (F(1, 2), F(1))),)


def test_superlevel_constant_is_everything():
    g = complete_graph(4)
    cx = superlevel(g, constant(g), 1)
    assert cx.vertices == g.full_mask
    assert all(iv == (0, 1) for _, iv in cx.segments) and len(cx.segments) == 6


def test_superlevel_two_pieces_on_valley():
    g = path_graph(3)
    cx = superlevel(g, func(g, [2, 1, 2]), F(3, 2))
    assert cx.vertices == 0b101
    assert cx.segments == (((0, 1), (F(0), F(1, 2))), ((1, 2), (F(1, 2), F(1))))
    assert not is_contractible(cx)


def test_superlevel_rejects_nonpositive():
    g = path_graph(2)
    with pytest.raises(ValueError):
        superlevel(g, constant(g), 0)


def test_edge_interval_breakpoint():
    assert edge_interval(F(3), F(1), F(2)) == (0, F(1, 2))
    assert edge_interval(F(1), F(1), F(2)) is None
    assert edge_interval(F(0), F(4), F(1)) == (F(1, 4), 1)


@given(graph_with_function(graphs(max_n=6)), st.fractions(0, 5), st.fractions(0, 5))
def test_superlevel_monotone(gf, a, b):
    g, f = gf
    lo, hi = sorted((a, b))
    if lo <= 0:
        return
    big, small = superlevel(g, f, lo), superlevel(g, f, hi)
    assert small.vertices & ~big.vertices == 0
    outer = dict(big.segments)
    for e, (s, t) in small.segments:
        assert e in outer and outer[e][0] <= s and t <= outer[e][1]


@given(graph_with_function(graphs(max_n=6)), st.fractions(F(1, 10), 5))
def test_superlevel_segments_are_exact(gf, c):
    g, f = gf
    cx = superlevel(g, f, c)
    for (u, v), (s, t) in cx.segments:
        assert s <= t
        assert f.at_edge(u, v, s) >= c and f.at_edge(u, v, t) >= c
        # just outside the interval the function is below c
        if s > 0:
            assert f.at_edge(u, v, s / 2) < c
        if t < 1:
            assert f.at_edge(u, v, (t + 1) / 2) < c


# ------------------------------------------------------------ contractibility

def test_whole_square_not_contractible():
    g = cycle_graph(4)
    assert not is_contractible(superlevel(g, constant(g), 1))


def test_empty_complex_not_contractible():
    g = path_graph(2)
    cx = superlevel(g, constant(g), 5)
    assert cx.is_empty and not is_contractible(cx)


def test_two_floating_segments_disconnected():
    g = path_graph(4)
    cx = IntersectionComplex(g, (), 0, (((0, 1), (F(1, 3), F(2, 3))), ((2, 3), (F(1, 3), F(2, 3)))))
    assert not is_contractible(cx)
    one = IntersectionComplex(g, (), 0, (((0, 1), (F(1, 3), F(2, 3))),))
    assert is_contractible(one)


def test_single_vertex_contractible():
    g = path_graph(3)
    assert is_contractible(SuperlevelComplex(g, F(1), 0b010, ()))


# ------------------------------------------------------------------- strong

def test_single_component_is_strong():
    g = path_graph(3)
    assert is_strong_decomposition(g, [func(g, [1, 2, 1])])


def test_square_two_overlapping_paths_not_strong():
    g = cycle_graph(4)
    a = func(g, [F(1, 2), 1, F(1, 2), 0])
    b = func(g, [F(1, 2), 0, F(1, 2), 1])
    verdict = is_strong_decomposition(g, [a, b])
    assert not verdict
    assert set(verdict.thresholds) == {0, 1}
    assert not verdict.complex.is_empty and not is_contractible(verdict.complex)


def test_vertex_cover_components_of_c5_strong():
    inst = vertex_cover_gadget(cycle_graph(5))
    comps = cover_component_functions(inst, {0, 2, 4})
    assert is_strong_decomposition(inst.graph, comps)


def test_rejects_non_unimodal_component():
    g = cycle_graph(3)
    with pytest.raises(ValueError):
        is_strong_decomposition(g, [constant(g)])


def _naive_strong(g: Graph, comps, grid: int = 12) -> bool:
    """Contractible-or-empty intersections over a dense rational grid."""
    levels = []
    for h in comps:
        top = max(h.values)
        vals = {x for x in h.values if x > 0}
        vals |= {top * F(i, grid) for i in range(1, grid + 1)}
        vals |= {(a + b) / 2 for a in list(vals) for b in list(vals)}
        levels.append(sorted(vals))
    for size in range(2, len(comps) + 1):
        for idx in combinations(range(len(comps)), size):
            for th in product(*(levels[i] for i in idx)):
                cx = intersection_complex(g, [(comps[i], c) for i, c in zip(idx, th)])
                if not cx.is_empty and not is_contractible(cx):
                    return False
    return True


def _random_unimodal(rng: random.Random, g: Graph) -> VertexFunction:
    """Nonincreasing away from a random root over a random subtree."""
    n = g.vertex_count
    root = rng.randrange(n)
    vals = [F(0)] * n
    vals[root] = F(rng.randint(1, 4))
    frontier = [root]
    taken = {root}
    while frontier:
        u = frontier.pop()
        for w in g.adjacency[u]:
            if w in taken or rng.random() < 0.3:
                continue
            if any(x in taken and x != u for x in g.adjacency[w]):
                continue
            taken.add(w)
            vals[w] = vals[u] * F(rng.randint(1, 4), 4)
            frontier.append(w)
    return VertexFunction(g, tuple(vals))


@pytest.mark.parametrize("seed", range(40))
def test_strong_check_agrees_with_dense_grid(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 5)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
    g = Graph.from_edges(n, edges)
    comps = [_random_unimodal(rng, g) for _ in range(rng.randint(2, 3))]
    verdict = is_strong_decomposition(g, comps)
    naive = _naive_strong(g, comps)
    if not naive:
        assert not verdict
    if not verdict:
        assert not is_contractible(verdict.complex)


@settings(max_examples=40, deadline=None)
@given(trees(max_n=7), st.data())
def test_greedy_outputs_survive_random_thresholds(g, data):
    f = data.draw(functions(g, values=st.integers(0, 3).map(F)))
    comps = greedy_decompose(g, f).functions()
    assert is_strong_decomposition(g, comps)
    for _ in range(20):
        parts = [(h, data.draw(st.fractions(F(1, 100), max(h.values)))) for h in comps]
        cx = intersection_complex(g, parts)
        assert cx.is_empty or is_contractible(cx)


def test_random_tree_decompositions_strong():
    rng = random.Random(11)
    for _ in range(30):
        g = random_tree(rng, rng.randint(5, 10))
        f = VertexFunction(g, tuple(F(rng.randint(0, 5)) for _ in range(g.vertex_count)))
        assert is_strong_decomposition(g, greedy_decompose(g, f).functions())
