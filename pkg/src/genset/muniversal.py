"""The m-universal action: the disjoint union of the coset actions on one
maximal subgroup per conjugacy class.

Only fixed-point incidence is kept.  Row ``y`` of ``fix`` marks the points
``M x`` with ``x y x^-1`` in ``M``; a set of elements generates the group
exactly when the rows have empty intersection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .lattice import MaximalClasses, SubgroupSet
from .perm import ElementIndex, PermGroup


class AuditFailure(AssertionError):
    def __init__(self, subset):
        super().__init__(f"generation oracles disagree on element indices {sorted(subset)}")
        self.subset = tuple(subset)


@dataclass
class CosetBlock:
    subgroup: SubgroupSet
    transversal: list[int]
    offset: int

    @property
    def size(self) -> int:
        return len(self.transversal)


@dataclass
class MUniversalAction:
    index: ElementIndex
    orbit_blocks: list[CosetBlock]
    total_degree: int
    fix: np.ndarray = field(repr=False)
    fix_bits: list[int] = field(repr=False)

    @property
    def order(self) -> int:
        return self.index.order

    def common_fix(self, ids) -> int:
        bits = (1 << self.total_degree) - 1
        for i in ids:
            bits &= self.fix_bits[int(i)]
        return bits


def _pack_rows(fix: np.ndarray) -> list[int]:
    if fix.shape[1] == 0:
        return [0] * fix.shape[0]
    packed = np.packbits(fix, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def right_transversal(idx: ElementIndex, sub: SubgroupSet) -> list[int]:
    """Representatives of the right cosets ``H x`` in first-found order."""
    table = idx.table
    seen = np.zeros(idx.order, dtype=bool)
    reps = []
    members = sub.members
    for x in range(idx.order):
        if seen[x]:
            continue
        reps.append(x)
        seen[table[members, x]] = True
    return reps


def build_action(g: PermGroup | None, mc: MaximalClasses, index: ElementIndex | None = None) -> MUniversalAction:
    idx = index or mc.index
    if idx is None:
        raise ValueError("maximal classes carry no element index; pass one")
    table, inv = idx.table, idx.inverse
    n = idx.order
    blocks, columns = [], []
    offset = 0
    for M in mc.representatives:
        in_M = M.mask(n)
        transversal = right_transversal(idx, M)
        for x in transversal:
            columns.append(in_M[table[table[x].astype(np.int64), inv[x]]])
        blocks.append(CosetBlock(M, transversal, offset))
        offset += len(transversal)
    fix = np.stack(columns, axis=1) if columns else np.zeros((n, 0), dtype=bool)
    return MUniversalAction(idx, blocks, offset, fix, _pack_rows(fix))


def generates(a: MUniversalAction, ids) -> bool:
    ids = list(ids)
    if not ids:
        return a.order == 1
    return a.common_fix(ids) == 0


def property_g_audit(g: PermGroup, a: MUniversalAction, trials: int, seed: int = 0,
                     max_size: int = 4) -> dict:
    """Compare ``generates`` with the group order of the closure on random subsets."""
    rng = random.Random(seed)
    n = a.order
    passed = 0
    for _ in range(trials):
        size = rng.randint(1, max_size)
        subset = [rng.randrange(n) for _ in range(size)]
        by_order = PermGroup([a.index.element(i) for i in subset], a.index.degree).order() == n
        if generates(a, subset) != by_order:
            raise AuditFailure(subset)
        passed += 1
    return {"trials": trials, "passed": passed, "failed": 0}
