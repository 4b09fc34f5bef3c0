"""
Cyclic and affine groups
========================

For a cyclic group of squarefree order the quotient graph is indexed by sets
of primes, and two vertices are adjacent when their sets are disjoint.
The weights then pin every vertex, so the weighted quotient is rigid even
though the group itself has many automorphisms.

Affine groups C_p : C_n behave differently when n is prime: the translations
join the complement classes in one big clique.
"""

import math

from genset import Analysis, aut_group_order, graph_aut
from genset.autgraph import Mismatch, closed_form_affine, closed_form_cyclic

for n in (30, 210, 546):
    report = closed_form_cyclic(n)
    an = Analysis(f"Cn:{n}")
    print(f"C_{n}: {report['vertex_count']['found']} vertices, "
          f"unweighted aut {report['unweighted_aut_order']['found']}, "
          f"weighted aut {report['weighted_aut_order']['found']}, "
          f"|Aut(C_{n})| = {aut_group_order(an.action, an.levels)}")

print()
for p, k, n in [(5, 1, 4), (7, 1, 3)]:
    an = Analysis(f"Affine:{p},{k},{n}")
    rg = an.reduced_graph
    print(f"C_{p}:C_{n}: {rg.vertex_count} vertices, weighted aut {graph_aut(rg).order}, "
          f"unweighted aut {graph_aut(rg, weighted=False).order}")
    try:
        closed_form_affine(p, k, n, an)
        print("  matches the predicted orders")
    except Mismatch as exc:
        print("  differs from prediction:", exc)
        print(f"  {math.factorial(p ** k + 1)} = ({p ** k} + 1)!")
