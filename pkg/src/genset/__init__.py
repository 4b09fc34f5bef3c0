"""Generation invariants of small permutation groups.

The pipeline runs permutation group -> element table -> subgroup lattice ->
maximal subgroups -> fixed-point action -> equivalence relations, reduced
generating graph and automorphism counts.  ``Analysis`` drives it for one group.
"""

from .analysis import Analysis
from .autgraph import aut_gamma_order, aut_group_order, graph_aut
from .catalog import build, parse_generators, parse_spec
from .equiv import Partition, c_classes, m_classes, mr_classes, mu, psi
from .gengraph import (WeightedReducedGraph, chromatic_number, clique_number, has_positive_spread, reduced_graph,
                       spread, total_domination_number)
from .perm import ElementIndex, PermGroup, Permutation, enumerate_elements

__version__ = "0.1.0"

__all__ = [
    "Analysis", "ElementIndex", "Partition", "PermGroup", "Permutation", "WeightedReducedGraph",
    "aut_gamma_order", "aut_group_order", "build", "c_classes", "chromatic_number", "clique_number",
    "enumerate_elements", "graph_aut", "has_positive_spread", "m_classes", "mr_classes", "mu", "parse_generators",
    "parse_spec", "psi", "reduced_graph", "spread", "total_domination_number",
]
