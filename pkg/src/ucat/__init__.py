"""Unimodal decompositions of edge-linear functions on graphs."""

from .graph import (
    Graph,
    VertexFunction,
    constant,
    cycle_graph,
    complete_graph,
    enumerate_induced_subtrees,
    girth,
    induced_subgraph,
    is_tree,
    path_graph,
    petersen_graph,
    star_graph,
    subdivide,
)
from .unimodality import (
    is_contractible,
    is_strong_decomposition,
    is_unimodal,
    superlevel,
)
from .tree import greedy_decompose, pull, ucat_infinity_tree, ucat_p_tree
from .exact import (
    Budget,
    BudgetExceeded,
    exact_ucat,
    exact_ucat_strong,
    min_tree_cover,
    ucat_leq,
    ucat_strong_leq,
)
from .gadgets import (
    coloring_gadget,
    cover_component_functions,
    two_trees_decision,
    verify_reduction,
    vertex_cover_gadget,
)

__version__ = "0.1.0"
