"""
Unimodal decompositions on trees
================================

Greedy peeling on a path and on a spider, checked against the exact solver.
Run with ``python3 notebooks/01_trees.py``.
"""

# %%
from fractions import Fraction as F

from ucat.exact import exact_ucat
from ucat.graph import Graph, VertexFunction, path_graph
from ucat.tree import greedy_decompose, leaf_peaks, pull, ucat_infinity_tree, ucat_p_tree
from ucat.unimodality import is_strong_decomposition, is_unimodal


def show(dec):
    for c in dec.components:
        print("  root", c.root, "values", [str(x) for x in c.values])


# %%
# Two bumps on a path: two summands, overlapping in the valley at vertex 2.
g = path_graph(5)
f = VertexFunction(g, (2, 1, 2, 1, 2))
print("unimodal?", bool(is_unimodal(g, f)))
dec = greedy_decompose(g, f)
print("greedy count", len(dec))
show(dec)
print("strong?", bool(is_strong_decomposition(g, dec.functions())))

# %%
# Max-combination and powers need more pieces here.
print("max count", ucat_infinity_tree(g, f))
print("p=2 count", len(ucat_p_tree(g, f, 2)))

# %%
# A spider with three legs. Pulling the centre first (it holds the global
# maximum) wastes a summand; the greedy only pulls at maxima sitting on leaves.
spider = Graph.from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
h = VertexFunction(spider, (3, 1, 2, 1, 2, 1, 2))
print("leaf peaks", leaf_peaks(spider, h.values, spider.full_mask))

centre = pull(spider, h, 0)
rest = VertexFunction(spider, tuple(a - b for a, b in zip(h.values, centre.values)))
print("centre first:", 1 + len(greedy_decompose(spider, rest)))
print("greedy:      ", len(greedy_decompose(spider, h)))
print("exact:       ", exact_ucat(spider, h).value)

# %%
# Rational values go through unchanged.
q = VertexFunction(path_graph(4), (F(1, 3), F(5, 2), F(1, 2), F(7, 4)))
show(greedy_decompose(q.graph, q))
