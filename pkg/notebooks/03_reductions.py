"""
Hardness gadgets, checked by brute force
========================================

"""

# %%
from ucat.exact import Budget, exact_ucat, ucat_leq
from ucat.gadgets import (
    coloring_gadget,
    cover_component_functions,
    two_trees_decision,
    verify_reduction,
    vertex_cover_gadget,
)
from ucat.graph import complete_graph, cycle_graph, path_graph
from ucat.oracles import chromatic_decision, min_vertex_cover
from ucat.unimodality import is_strong_decomposition

# %%
# Vertex cover: subdivide each edge, put the degree on the old vertices.
for name, g in [("P3", path_graph(3)), ("K3", complete_graph(3)), ("C5", cycle_graph(5))]:
    inst = vertex_cover_gadget(g)
    print(name, "cover", min_vertex_cover(g).value,
          "ucat", exact_ucat(inst.graph, inst.function).value)

# %%
# A cover turns into summands: one star per cover vertex, shared edges split.
inst = vertex_cover_gadget(cycle_graph(5))
comps = cover_component_functions(inst, {0, 2, 4})
print("strong on C5:", bool(is_strong_decomposition(inst.graph, comps)))

inst = vertex_cover_gadget(complete_graph(3))
verdict = is_strong_decomposition(inst.graph, cover_component_functions(inst, {0, 1}))
print("strong on K3:", bool(verdict), verdict.case, dict(verdict.thresholds))

# %%
# Colouring: join three apexes and ask for three summands of the constant.
for name, g in [("C5", cycle_graph(5)), ("K4", complete_graph(4))]:
    inst = coloring_gadget(g, 3)
    print(name, "3-colourable", bool(chromatic_decision(g, 3)),
          "ucat <= 3", bool(ucat_leq(inst.graph, inst.function, 3)))

# %%
# Two summands of the constant function = a split into two induced trees.
print(two_trees_decision(cycle_graph(4), disjoint=True))
print(two_trees_decision(complete_graph(5), disjoint=False))

# %%
print(verify_reduction("vertex-cover", cycle_graph(4), budget=Budget(max_vertices=15)).to_dict())
