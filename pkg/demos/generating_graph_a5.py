"""
The generating graph of A_5
===========================

Vertices are the group elements, edges join pairs that generate.  Elements
with identical neighbourhoods are interchangeable, so the graph collapses to
a small weighted quotient, and automorphisms of the big graph factor as
(permutations inside each class) x (automorphisms of the quotient).
"""

import math
from collections import Counter

from genset import Analysis, aut_gamma_order, aut_group_order, graph_aut
from genset import gengraph

an = Analysis("An:5")
rg = an.reduced_graph
print("elements:", an.order, " quotient vertices:", rg.vertex_count)
print("class sizes:", sorted(Counter(rg.weights).items()))

# invariants read off the quotient
print("spread:", gengraph.spread(rg))
print("clique number:", gengraph.clique_number(rg))
print("chromatic number:", gengraph.chromatic_number(rg))
print("total domination number:", gengraph.total_domination_number(rg))

kernel = math.prod(math.factorial(w) for w in rg.weights)
weighted = graph_aut(rg).order
print("\npermutations inside classes:", kernel)
print("automorphisms of the weighted quotient:", weighted)
print("automorphisms of the group:", aut_group_order(an.action, an.levels))
total = aut_gamma_order(an.group, rg)
print("automorphisms of the generating graph:", total, "=", "2^31 * 3^7 * 5" if total == 2**31 * 3**7 * 5 else "?")
