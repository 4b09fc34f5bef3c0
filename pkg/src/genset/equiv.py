"""Equivalence relations on group elements and the invariants built on them.

Everything here works on the fixed-point rows of an m-universal action.
Generation depends only on the ``=m`` class of each element, so quantifiers
over group elements are replaced by quantifiers over class representatives.

The ``r``-th relation compares elements by which intersections of at most
``r - 1`` representative rows they are disjoint from.  Such an intersection
is the fixed-point set of the subgroup generated by the chosen elements, so
each level has at most as many distinct rows as there are subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import cyclic_generator_classes
from .muniversal import MUniversalAction
from .perm import ElementIndex

DEFAULT_MU_BUDGET = 10**7
PSI_SLACK = 5


class InternalError(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Partition:
    block_of: np.ndarray
    blocks: list[list[int]]
    reps: list[int]

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Blocks are numbered by their smallest member."""
        labels = np.asarray(labels)
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(len(order))
        block_of = rank[inverse.ravel()]
        blocks: list[list[int]] = [[] for _ in order]
        for x, b in enumerate(block_of.tolist()):
            blocks[b].append(x)
        return cls(block_of, blocks, [b[0] for b in blocks])

    def __len__(self):
        return len(self.blocks)

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def refines(self, other: "Partition") -> bool:
        """Every block of ``self`` lies inside a block of ``other``."""
        return all(len({int(other.block_of[x]) for x in b}) == 1 for b in self.blocks)

    def same_as(self, other: "Partition") -> bool:
        return len(self) == len(other) and self.refines(other)


@dataclass
class PsiReport:
    d: int
    psi: int
    partitions_by_r: dict[int, Partition] = field(repr=False)
    cap_used: int


# -- relations -----------------------------------------------------------------


def c_classes(idx: ElementIndex | MUniversalAction) -> Partition:
    if isinstance(idx, MUniversalAction):
        idx = idx.index
    return Partition.from_labels(cyclic_generator_classes(idx))


def m_classes(a: MUniversalAction) -> Partition:
    ids: dict[int, int] = {}
    labels = [ids.setdefault(bits, len(ids)) for bits in a.fix_bits]
    return Partition.from_labels(labels)


class _Levels:
    """Distinct intersections of at most ``k`` representative rows, for growing ``k``.

    Each row remembers one tuple of representatives producing it, found by
    scanning representatives in increasing order.
    """

    def __init__(self, a: MUniversalAction, mp: Partition | None = None):
        self.action = a
        self.mp = mp or m_classes(a)
        self.rep_bits = [a.fix_bits[r] for r in self.mp.reps]
        full = (1 << a.total_degree) - 1
        self.rows: list[int] = [full]
        self.witness: list[tuple[int, ...]] = [()]
        self.level_end = [1]

    def level(self, k: int) -> int:
        """Number of rows in levels ``0..k``; rows are extended lazily."""
        while len(self.level_end) <= k:
            start = self.level_end[-2] if len(self.level_end) > 1 else 0
            stop = self.level_end[-1]
            known = set(self.rows)
            for i in range(start, stop):
                t, w = self.rows[i], self.witness[i]
                for r, rb in zip(self.mp.reps, self.rep_bits):
                    v = t & rb
                    if v not in known:
                        known.add(v)
                        self.rows.append(v)
                        self.witness.append(w + (r,))
            self.level_end.append(len(self.rows))
        return self.level_end[k]

    def first_zero(self, limit: int) -> tuple[int, tuple[int, ...]] | None:
        for k in range(limit + 1):
            end = self.level(k)
            for i in range(self.level_end[k - 1] if k else 0, end):
                if self.rows[i] == 0:
                    return k, self.witness[i]
            if self.level_end[k] == (self.level_end[k - 1] if k else 0):
                return None
        return None

    def matrix(self, k: int) -> np.ndarray:
        end = self.level(k)
        return _unpack(self.rows[:end], self.action.total_degree)


def _unpack(bits: list[int], width: int) -> np.ndarray:
    nbytes = (width + 7) // 8
    if nbytes == 0:
        return np.zeros((len(bits), 0), dtype=bool)
    raw = np.frombuffer(b"".join(b.to_bytes(nbytes, "little") for b in bits), dtype=np.uint8)
    return np.unpackbits(raw.reshape(len(bits), nbytes), axis=1, bitorder="little")[:, :width].astype(bool)


def _disjointness(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """``out[i, j]`` is True when ``rows[i]`` and ``cols[j]`` share no point."""
    if rows.shape[1] == 0:
        return np.ones((rows.shape[0], cols.shape[0]), dtype=bool)
    overlap = rows.astype(np.float32) @ cols.astype(np.float32).T
    return overlap == 0


def _levels(a: MUniversalAction, levels: _Levels | None) -> _Levels:
    return levels if levels is not None else _Levels(a)


def mr_classes(a: MUniversalAction, r: int, levels: _Levels | None = None) -> Partition:
    if r < 1:
        raise ValueError("rank must be at least 1")
    lv = _levels(a, levels)
    mp = lv.mp
    rep_rows = a.fix[mp.reps]
    signature = _disjointness(rep_rows, lv.matrix(r - 1))
    packed = np.packbits(signature, axis=1)
    _, rep_label = np.unique(packed, axis=0, return_inverse=True)
    return Partition.from_labels(rep_label.ravel()[mp.block_of])


def generating_witness(a: MUniversalAction, levels: _Levels | None = None) -> tuple[int, ...]:
    """A smallest generating tuple of representatives (deterministic)."""
    lv = _levels(a, levels)
    found = lv.first_zero(a.total_degree + 1)
    if found is None:
        raise InternalError("representatives do not generate the group")
    return found[1]


def d(a: MUniversalAction, levels: _Levels | None = None) -> int:
    return len(generating_witness(a, levels))


def d_with_all(a: MUniversalAction, levels: _Levels | None = None) -> np.ndarray:
    """``d_with`` for every element at once."""
    lv = _levels(a, levels)
    dg = d(a, lv)
    mp = lv.mp
    rep_rows = a.fix[mp.reps]
    per_rep = np.full(len(mp.reps), dg, dtype=np.int64)
    undecided = np.ones(len(mp.reps), dtype=bool)
    for k in range(dg + 1):
        start = lv.level_end[k - 1] if k else 0
        lv.level(k)
        block = _unpack(lv.rows[start:lv.level_end[k]], a.total_degree)
        if block.shape[0]:
            hit = _disjointness(rep_rows, block).any(axis=1) & undecided
            per_rep[hit] = k
            undecided &= ~hit
    return per_rep[mp.block_of]


def d_with(a: MUniversalAction, x: int, levels: _Levels | None = None) -> int:
    lv = _levels(a, levels)
    fx = a.fix_bits[int(x)]
    if fx == 0:
        return 0
    for k in range(1, d(a, lv) + 1):
        lv.level(k)
        if any(fx & t == 0 for t in lv.rows[lv.level_end[k - 1]:lv.level_end[k]]):
            return k
    raise InternalError("no completion found within d(G) elements")


def psi(a: MUniversalAction, levels: _Levels | None = None) -> PsiReport:
    lv = _levels(a, levels)
    dg = d(a, lv)
    target = len(lv.mp)
    cap = dg + PSI_SLACK
    parts: dict[int, Partition] = {}
    for r in range(max(dg, 1), cap + 1):
        parts[r] = mr_classes(a, r, lv)
        if len(parts[r]) == target:
            return PsiReport(dg, r, parts, cap)
    raise InternalError(f"relations did not stabilise by rank {cap}")


def frattini_members(a: MUniversalAction) -> np.ndarray:
    full = (1 << a.total_degree) - 1
    return np.array([i for i, b in enumerate(a.fix_bits) if b == full], dtype=np.int64)


def efficiently_generated(a: MUniversalAction, levels: _Levels | None = None) -> bool:
    lv = _levels(a, levels)
    dg = d(a, lv)
    full = (1 << a.total_degree) - 1
    dw = d_with_all(a, lv)
    return all(a.fix_bits[x] == full for x in np.flatnonzero(dw == dg).tolist())


# -- maximum minimal generating sets ------------------------------------------


def _conjugation_orbit_reps(a: MUniversalAction, mp: Partition) -> list[int]:
    """One ``=m`` class per orbit of inner automorphisms (as block ids)."""
    idx = a.index
    table, inv = idx.table, idx.inverse
    n = idx.order
    seen = np.zeros(len(mp), dtype=bool)
    out = []
    for b, r in enumerate(mp.reps):
        if seen[b]:
            continue
        out.append(b)
        conj = table[table[inv, r].astype(np.int64), np.arange(n)]
        seen[mp.block_of[conj]] = True
    return out


def mu(a: MUniversalAction, budget: int = DEFAULT_MU_BUDGET, levels: _Levels | None = None) -> int:
    """Largest size of an irredundant generating set.

    Sets are grown one representative at a time.  A member whose removal
    leaves the intersection unchanged stays redundant in every superset, so
    such branches are cut.  The first member is taken up to conjugacy.
    """
    lv = _levels(a, levels)
    mp = lv.mp
    full = (1 << a.total_degree) - 1
    if a.order == 1:
        return 0
    cand = [(b, a.fix_bits[r]) for b, r in enumerate(mp.reps) if a.fix_bits[r] != full]
    calls = 0
    best = 0

    def extend(rows: list[int], inter: int, start: int) -> None:
        nonlocal calls, best
        if inter == 0:
            best = max(best, len(rows))
            return
        for pos in range(start, len(cand)):
            calls += 1
            if calls > budget:
                raise BudgetExceeded(f"mu search passed {budget} steps")
            rb = cand[pos][1]
            new = inter & rb
            if new == inter:
                continue
            nxt = rows + [rb]
            if not _all_needed(nxt, full):
                continue
            extend(nxt, new, pos + 1)

    for b in _conjugation_orbit_reps(a, mp):
        first = a.fix_bits[mp.reps[b]]
        if first == full:
            continue
        if first == 0:
            best = max(best, 1)
            continue
        extend([first], first, 0)
    return best


def _all_needed(rows: list[int], full: int) -> bool:
    """Each row strictly shrinks the intersection of the others."""
    k = len(rows)
    prefix = [full] * (k + 1)
    for i, rb in enumerate(rows):
        prefix[i + 1] = prefix[i] & rb
    suffix = full
    total = prefix[k]
    for i in range(k - 1, -1, -1):
        without = prefix[i] & suffix
        if without == total:
            return False
        suffix &= rows[i]
    return True
