import random
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

import ucat.exact as exact_mod
from conftest import func, random_tree, superlevel_unimodal, to_nx
from strategies import functions, graph_with_function, graphs, trees
from ucat import lp
from ucat.exact import (
    Budget,
    BudgetExceeded,
    exact_ucat,
    exact_ucat_strong,
    flow_system,
    min_tree_cover,
    ucat_leq,
    ucat_strong_leq,
)
from ucat.gadgets import coloring_gadget, vertex_cover_gadget
from ucat.graph import (
    Graph,
    VertexFunction,
    complete_graph,
    constant,
    cycle_graph,
    path_graph,
    petersen_graph,
    star_graph,
)
from ucat.tree import greedy_decompose
from ucat.unimodality import is_strong_decomposition

F = Fraction


def _independent_check(g: Graph, f: VertexFunction, dec) -> None:
    """Re-verify a certificate through networkx, not the package's checker."""
    n = g.vertex_count
    for v in range(n):
        assert sum((c.values[v] for c in dec.components), F(0)) == f[v]
    for c in dec.components:
        assert superlevel_unimodal(g, VertexFunction(g, c.values))


# ------------------------------------------------------------------ ucat_leq

def test_leq_examples():
    g = path_graph(4)
    assert ucat_leq(g, func(g, [1, 3, 2, 1]), 1)
    c4 = cycle_graph(4)
    got = ucat_leq(c4, constant(c4), 2)
    assert got and len(got.certificate) == 2
    _independent_check(c4, constant(c4), got.certificate)
    c3 = cycle_graph(3)
    assert not ucat_leq(c3, constant(c3), 1)


def test_leq_rejects_negative_k():
    with pytest.raises(ValueError):
        ucat_leq(path_graph(2), constant(path_graph(2)), -1)


def test_budget_names_parameter():
    g = path_graph(15)
    with pytest.raises(BudgetExceeded) as err:
        exact_ucat(g, constant(g))
    assert err.value.parameter == "max_vertices" and err.value.value == 15
    # refinement counts against the vertex limit
    with pytest.raises(BudgetExceeded):
        exact_ucat(path_graph(8), constant(path_graph(8)), r=1)
    g = path_graph(9)
    alternating = func(g, [1, 0] * 4 + [1])
    with pytest.raises(BudgetExceeded) as err:
        exact_ucat(g, alternating, budget=Budget(max_k=3))
    assert err.value.parameter == "max_k"


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv("UCAT_BUDGET_VERTICES", "20")
    assert Budget.from_env().max_vertices == 20
    assert Budget.from_env(max_vertices=7).max_vertices == 7


# ---------------------------------------------------------------- exact_ucat

def test_exact_examples():
    c5 = cycle_graph(5)
    res = exact_ucat(c5, constant(c5))
    assert res.value == 2 and not res.exact and res.warnings
    gadget = vertex_cover_gadget(complete_graph(3))
    assert exact_ucat(gadget.graph, gadget.function).value == 2


def test_zero_function():
    g = cycle_graph(4)
    res = exact_ucat(g, func(g, [0, 0, 0, 0]))
    assert res.value == 0 and len(res.certificate) == 0


def test_disconnected_support_adds_up():
    g = path_graph(7)
    f = func(g, [1, 2, 0, 3, 0, 2, 2])
    assert exact_ucat(g, f).value == 3


@settings(max_examples=80, deadline=None)
@given(trees(max_n=10), st.data())
def test_trees_match_greedy(g, data):
    f = data.draw(functions(g, values=st.integers(0, 4).map(F)))
    res = exact_ucat(g, f)
    assert res.exact and res.strong
    assert res.value == len(greedy_decompose(g, f))


@settings(max_examples=120, deadline=None)
@given(graph_with_function(graphs(max_n=6), values=st.integers(0, 3).map(F)))
def test_certificates_verify_independently(gf):
    g, f = gf
    res = exact_ucat(g, f)
    assert res.certificate.verify()
    _independent_check(g, f, res.certificate)
    assert len(res.certificate) == res.value


# -------------------------------------------------- naive dual-route solver

def _rooted_maximal_trees(g: Graph) -> list[tuple[frozenset, int, dict]]:
    G = to_nx(g)
    n = g.vertex_count
    trees = [frozenset(s) for r in range(1, n + 1) for s in combinations(range(n), r)
             if nx.is_tree(G.subgraph(s))]
    maximal = [t for t in trees if not any(t < u for u in trees)]
    out = []
    for t in maximal:
        T = G.subgraph(t)
        for root in sorted(t):
            parent = {v: u for u, v in nx.bfs_edges(T, root)}
            out.append((t, root, parent))
    return out


def _family_feasible(f: VertexFunction, fam) -> bool:
    var = [(i, v) for i, (t, _, _) in enumerate(fam) for v in sorted(t)]
    idx = {x: j for j, x in enumerate(var)}
    n = f.graph.vertex_count
    A_eq = [[0.0] * len(var) for _ in range(n)]
    for (i, v), j in idx.items():
        A_eq[v][j] = 1.0
    b_eq = [float(x) for x in f.values]
    A_ub, b_ub = [], []
    for i, (_, _, parent) in enumerate(fam):
        for v, u in parent.items():
            row = [0.0] * len(var)
            row[idx[(i, v)]] = 1.0
            row[idx[(i, u)]] = -1.0
            A_ub.append(row)
            b_ub.append(0.0)
    if not var:
        return not any(b_eq)
    res = linprog([0.0] * len(var), A_eq=A_eq, b_eq=b_eq, A_ub=A_ub or None,
                  b_ub=b_ub or None, bounds=[(0, None)] * len(var), method="highs")
    return res.status == 0


def _naive_ucat(g: Graph, f: VertexFunction) -> int:
    if f.is_zero():
        return 0
    cands = _rooted_maximal_trees(g)
    for k in range(1, g.vertex_count + 1):
        for fam in combinations(cands, k):
            if _family_feasible(f, fam):
                return k
    raise AssertionError("singletons always work")


@pytest.mark.parametrize("seed", range(60))
def test_matches_naive_lp_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.6]
    g = Graph.from_edges(n, edges)
    f = VertexFunction(g, tuple(F(rng.randint(0, 3)) for _ in range(n)))
    assert exact_ucat(g, f).value == _naive_ucat(g, f)


# -------------------------------------------------------------- properties

@settings(max_examples=60, deadline=None)
@given(graph_with_function(graphs(max_n=6), values=st.integers(0, 3).map(F)))
def test_leq_monotone_in_k(gf):
    g, f = gf
    value = exact_ucat(g, f).value
    answers = [bool(ucat_leq(g, f, k)) for k in range(0, value + 2)]
    assert answers == [k >= value for k in range(0, value + 2)]


@settings(max_examples=25, deadline=None)
@given(graph_with_function(graphs(max_n=4), values=st.integers(0, 2).map(F)))
def test_refinement_never_increases(gf):
    g, f = gf
    if g.vertex_count + len(g.edges) > 10:
        return
    assert exact_ucat(g, f, r=1).value <= exact_ucat(g, f, r=0).value


def test_refinement_examples():
    g = cycle_graph(3)
    res = exact_ucat(g, constant(g), r=1)
    assert res.value == 2 and res.refinement == 1
    assert res.certificate.target.graph.vertex_count == 6


@settings(max_examples=40, deadline=None)
@given(graph_with_function(graphs(max_n=5), values=st.integers(0, 3).map(F)),
       st.integers(1, 3))
def test_power_by_construction(gf, p):
    g, f = gf
    a = exact_ucat(g, f, p=p)
    b = exact_ucat(g, f.power(p))
    assert a.p == p
    assert a.value == b.value and a.certificate == b.certificate


def test_power_rejects_nonpositive():
    with pytest.raises(ValueError):
        exact_ucat(path_graph(2), constant(path_graph(2)), p=0)


def test_root_set_filter_does_not_change_answers(monkeypatch):
    rng = random.Random(77)
    cases = []
    for _ in range(25):
        n = rng.randint(3, 6)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
        g = Graph.from_edges(n, edges)
        f = VertexFunction(g, tuple(F(rng.randint(0, 3)) for _ in range(n)))
        cases.append((g, f, exact_ucat(g, f).value))
    monkeypatch.setattr(exact_mod, "ROOT_SET_LIMIT", -1)
    for g, f, value in cases:
        assert exact_ucat(g, f).value == value


def _sum_of_random_unimodals(rng: random.Random, g: Graph, k: int):
    """``k`` random unimodal summands on random induced subtrees."""
    n = g.vertex_count
    comps = []
    G = to_nx(g)
    for _ in range(k):
        root = rng.randrange(n)
        vals = [F(0)] * n
        vals[root] = F(rng.randint(1, 4))
        taken = {root}
        frontier = [root]
        while frontier:
            u = frontier.pop()
            for w in g.adjacency[u]:
                if w in taken or rng.random() < 0.4:
                    continue
                if not nx.is_tree(G.subgraph(taken | {w})):
                    continue
                taken.add(w)
                vals[w] = vals[u] * F(rng.randint(0, 3), 3)
                frontier.append(w)
        comps.append((root, vals))
    total = VertexFunction(g, tuple(sum(c[i] for _, c in comps) for i in range(n)))
    return total, comps


@pytest.mark.parametrize("seed", range(40))
def test_flow_relaxation_accepts_true_roots(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
    g = Graph.from_edges(n, edges)
    f, comps = _sum_of_random_unimodals(rng, g, rng.randint(1, 3))
    roots = 0
    for r, vals in comps:
        if vals[r] > 0:
            roots |= 1 << r
    sysm = flow_system(g, f, f.support, roots)
    assert lp.lp_feasible(sysm) is not None
    # a planted decomposition bounds the optimum
    assert exact_ucat(g, f).value <= len(comps)


# ------------------------------------------------------------------ strong

def test_strong_examples():
    c4 = cycle_graph(4)
    res = exact_ucat_strong(c4, constant(c4))
    assert res.value == 3 and res.raised_above_weak
    assert any("incomplete" in w for w in res.warnings)
    assert is_strong_decomposition(c4, res.certificate.functions())
    assert exact_ucat(c4, constant(c4)).value == 2


def test_strong_equals_plain_on_trees():
    rng = random.Random(5)
    for _ in range(15):
        g = random_tree(rng, rng.randint(3, 8))
        f = VertexFunction(g, tuple(F(rng.randint(0, 4)) for _ in range(g.vertex_count)))
        if f.is_zero():
            continue
        s = exact_ucat_strong(g, f)
        assert s.value == exact_ucat(g, f).value and not s.raised_above_weak


def test_strong_on_girth_five_gadget():
    gadget = vertex_cover_gadget(cycle_graph(5))
    s = exact_ucat_strong(gadget.graph, gadget.function)
    assert s.value == exact_ucat(gadget.graph, gadget.function).value == 3
    assert not s.raised_above_weak


def test_strong_leq():
    c4 = cycle_graph(4)
    no = ucat_strong_leq(c4, constant(c4), 2)
    assert not no and no.complete
    yes = ucat_strong_leq(c4, constant(c4), 3)
    assert yes and is_strong_decomposition(c4, yes.certificate.functions())
    with pytest.raises(ValueError):
        ucat_strong_leq(c4, constant(c4), -1)


# ------------------------------------------------------------- tree covers

def test_tree_cover_examples():
    assert min_tree_cover(star_graph(5))[0] == 1
    count, cover = min_tree_cover(cycle_graph(4))
    assert count == 2
    assert sorted(bin(t).count("1") for t in cover) == [3, 3]
    k6 = coloring_gadget(complete_graph(3), 3).graph
    assert min_tree_cover(k6)[0] == 3
    g = petersen_graph()
    count, cover = min_tree_cover(g)
    assert count == 2
    G = to_nx(g)
    assert all(nx.is_tree(G.subgraph([v for v in range(10) if t >> v & 1])) for t in cover)
    assert cover[0] | cover[1] == g.full_mask


def test_tree_cover_rejects_disconnected():
    with pytest.raises(ValueError):
        min_tree_cover(Graph.from_edges(3, [(0, 1)]))
    assert min_tree_cover(Graph(0)) == (0, [])
