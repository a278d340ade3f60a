"""
Graphs with cycles: the exact solver
====================================

"""

# %%
from ucat.exact import Budget, exact_ucat, exact_ucat_strong, min_tree_cover, ucat_leq
from ucat.graph import complete_graph, constant, cycle_graph, petersen_graph

c4 = cycle_graph(4)
one = constant(c4)

# %%
# Two induced paths cover the square, so two summands suffice.
res = exact_ucat(c4, one)
print("ucat", res.value, "exact", res.exact)
for c in res.certificate.components:
    print("  support", bin(c.support), "values", [str(x) for x in c.values])
print("warnings", res.warnings)

# %%
# Asking for superlevel sets that meet in trees pushes the square to three.
strong = exact_ucat_strong(c4, one)
print("strong", strong.value, "raised", strong.raised_above_weak)

# %%
# Decision form, and a refinement of every edge into two.
print("<= 1?", bool(ucat_leq(c4, one, 1)))
print("refined once:", exact_ucat(c4, one, r=1).value)

# %%
# Covers by induced subtrees.
for name, g in [("C5", cycle_graph(5)), ("K5", complete_graph(5)), ("Petersen", petersen_graph())]:
    count, cover = min_tree_cover(g)
    print(name, count, [bin(t) for t in cover])

# %%
# Budgets are explicit; the error names the parameter that ran out.
try:
    exact_ucat(cycle_graph(20), constant(cycle_graph(20)), budget=Budget(max_vertices=10))
except Exception as err:
    print(type(err).__name__, err)
