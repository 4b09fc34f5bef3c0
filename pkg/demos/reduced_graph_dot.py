"""
Drawing a quotient graph
========================

Writes the weighted quotient graph of S_4 in Graphviz format.  Isolated
vertices are the classes with no generating partner: the identity together
with the double transpositions.
"""

import sys

from genset import Analysis
from genset.cli import graph_dot

an = Analysis("Sn:4")
rg = an.reduced_graph
for v in sorted(rg.isolated):
    print("isolated class:", sorted({an.index.element(x).cycle_type() for x in rg.partition.blocks[v]}),
          file=sys.stderr)
sys.stdout.write(graph_dot(rg, "S4"))
