"""
Maximal-subgroup classes of symmetric groups
============================================

Two elements are equivalent when they lie in exactly the same maximal
subgroups.  Below we count the classes for S_1 .. S_6 and look at how
quickly the rank-r relations settle down.
"""

import time

from genset import Analysis

for n in range(1, 7):
    t = time.perf_counter()
    an = Analysis(f"Sn:{n}")
    print(f"S_{n}: order {an.order:4d}, {len(an.m_partition):4d} classes "
          f"({time.perf_counter() - t:.2f}s)")

# S_4 is the smallest case where two-element generating sets do not see everything
an = Analysis("Sn:4")
rep = an.psi_report
print("\nS_4: d =", rep.d, " psi =", rep.psi)
for r, part in sorted(rep.partitions_by_r.items()):
    print(f"  rank {r}: {len(part)} classes")

# the extra class at rank 3 splits the double transpositions from the identity
for block in an.mr_partition(2).blocks:
    types = sorted({an.index.element(x).cycle_type() for x in block})
    if len(types) > 1:
        print("  merged at rank 2:", types)
