"""Subgroup lattices of small groups over a multiplication table.

Subgroups are bit vectors over an :class:`~genset.perm.ElementIndex`.  The
lattice is built by cyclic extension, one representative per conjugacy
class: every subgroup is a join of cyclic subgroups, and the join of a
conjugate is conjugate to the join with a representative.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .perm import ElementIndex

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    pass


def _to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def bits_to_members(bits: int, n: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:n])


@dataclass(frozen=True, eq=False)
class SubgroupSet:
    """A subgroup as a membership bit vector (bit ``i`` is element ``i``).

    ``gens`` is some generating set; it does not take part in equality.
    """

    bits: int
    members: np.ndarray = field(repr=False)
    gens: tuple[int, ...] = ()

    @classmethod
    def from_members(cls, members, n: int, gens=()) -> "SubgroupSet":
        members = np.unique(np.asarray(members, dtype=np.int64))
        mask = np.zeros(n, dtype=bool)
        mask[members] = True
        return cls(_to_bits(mask), members, tuple(int(g) for g in gens))

    @classmethod
    def from_mask(cls, mask: np.ndarray, gens=()) -> "SubgroupSet":
        return cls(_to_bits(mask), np.flatnonzero(mask), tuple(int(g) for g in gens))

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> int(i) & 1)

    def __eq__(self, other):
        return isinstance(other, SubgroupSet) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def issubset(self, other: "SubgroupSet") -> bool:
        return self.bits & ~other.bits == 0

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[self.members] = True
        return m


def trivial_subgroup(idx: ElementIndex) -> SubgroupSet:
    return SubgroupSet.from_members([0], idx.order)


def whole_group(idx: ElementIndex, gens=()) -> SubgroupSet:
    return SubgroupSet((1 << idx.order) - 1, np.arange(idx.order), tuple(gens))


def _join_mask(idx: ElementIndex, base: np.ndarray, gens: list[int], stop_at_half: bool):
    """Close ``base`` (a subgroup's members) together with ``gens``.

    The result is grown as a union of right cosets ``H r`` of ``H = base``
    and is closed once right multiplication by every generator stays inside.
    Returns the membership mask, or None if it passed half of the group
    (``stop_at_half``), which forces the whole group.
    """
    table = idx.table
    n = idx.order
    mask = np.zeros(n, dtype=bool)
    mask[base] = True
    count = len(base)
    gens_arr = np.asarray(gens, dtype=np.int64)
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        cand = table[np.ix_(frontier, gens_arr)].ravel().astype(np.int64)
        cand = cand[~mask[cand]]
        if not cand.size:
            break
        cand = np.unique(cand)
        cosets = table[np.ix_(base, cand)].astype(np.int64)
        if cand.size > 1:
            _, first = np.unique(cosets.min(axis=0), return_index=True)
            cosets = cosets[:, first]
            cand = cand[first]
        mask[cosets.ravel()] = True
        count += cosets.size
        if stop_at_half and 2 * count > n:
            return None
        frontier = cand
    return mask


def closure(idx: ElementIndex, ids, base: SubgroupSet | None = None) -> SubgroupSet:
    """Smallest subgroup containing ``base`` and the elements ``ids``."""
    if base is None:
        base = trivial_subgroup(idx)
    extra = [int(i) for i in ids if int(i) not in base]
    if not extra:
        return base
    gens = list(base.gens) + extra
    mask = _join_mask(idx, base.members, gens, stop_at_half=False)
    return SubgroupSet.from_mask(mask, gens)


def join(idx: ElementIndex, base: SubgroupSet, x: int) -> SubgroupSet:
    if x in base:
        return base
    gens = list(base.gens) + [int(x)]
    mask = _join_mask(idx, base.members, gens, stop_at_half=True)
    if mask is None:
        return whole_group(idx, gens)
    return SubgroupSet.from_mask(mask, gens)


def conjugation_map(idx: ElementIndex, t: int) -> np.ndarray:
    """``m[i]`` is the index of ``t^-1 e_i t``."""
    table = idx.table
    return table[table[idx.inverse[t]], t].astype(np.int64)


def cyclic_generator_classes(idx: ElementIndex) -> np.ndarray:
    """Label each element by the cyclic subgroup it generates.

    Labels are consecutive integers in order of the smallest generator.
    """
    table = idx.table
    n = idx.order
    label = np.full(n, -1, dtype=np.int64)
    orders = idx.orders
    nxt = 0
    for x in range(n):
        if label[x] >= 0:
            continue
        k = int(orders[x])
        powers = [0] * k
        p = 0
        for e in range(1, k + 1):
            p = int(table[p, x])
            powers[e % k] = p
        for e in range(1, k + 1) if k > 1 else [0]:
            if np.gcd(e, k) == 1:
                label[powers[e % k]] = nxt
        nxt += 1
    return label


def cyclic_subgroup(idx: ElementIndex, x: int) -> SubgroupSet:
    table = idx.table
    members = [0]
    p = int(x)
    while p != 0:
        members.append(p)
        p = int(table[p, x])
    return SubgroupSet.from_members(members, idx.order, gens=[x] if x else [])


@dataclass
class Lattice:
    """All subgroups, grouped into conjugacy classes (discovery order)."""

    index: ElementIndex
    subgroups: list[SubgroupSet]
    class_of: list[int]
    classes: list[list[int]]
    group_gens: list[int]

    def representatives(self) -> list[SubgroupSet]:
        return [self.subgroups[c[0]] for c in self.classes]

    def __len__(self):
        return len(self.subgroups)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def subgroup_lattice(idx: ElementIndex, group_gens: list[int], budget: int = DEFAULT_BUDGET) -> Lattice:
    n = idx.order
    gen_maps = [conjugation_map(idx, s) for s in group_gens]
    table = idx.table
    clabel = cyclic_generator_classes(idx)
    ncyc = int(clabel.max()) + 1
    cyc_rep = np.full(ncyc, n, dtype=np.int64)
    np.minimum.at(cyc_rep, clabel, np.arange(n))

    subgroups: list[SubgroupSet] = []
    class_of: list[int] = []
    classes: list[list[int]] = []
    known: dict[int, int] = {}
    normalizer_gens: list[list[int]] = []

    def add_class(K: SubgroupSet) -> None:
        cid = len(classes)
        members = [len(subgroups)]
        position = {len(subgroups): 0}
        known[K.bits] = len(subgroups)
        subgroups.append(K)
        class_of.append(cid)
        transversal = [0]
        orbit = [K]
        norm = SubgroupSet.from_members([0], n) if K.size < n else K
        i = 0
        while i < len(orbit):
            Ki, ti = orbit[i], transversal[i]
            for s, m in zip(group_gens, gen_maps):
                image_members = m[Ki.members]
                mask = np.zeros(n, dtype=bool)
                mask[image_members] = True
                bits = _to_bits(mask)
                t_new = int(table[ti, s])
                j = known.get(bits)
                if j is None:
                    Kj = SubgroupSet(bits, np.flatnonzero(mask), tuple(int(x) for x in m[list(Ki.gens)]))
                    known[bits] = len(subgroups)
                    position[len(subgroups)] = len(members)
                    members.append(len(subgroups))
                    subgroups.append(Kj)
                    class_of.append(cid)
                    orbit.append(Kj)
                    transversal.append(t_new)
                    if len(subgroups) > budget:
                        raise BudgetExceeded(f"more than {budget} subgroups")
                else:
                    tj = transversal[position[j]]
                    sg = int(table[t_new, idx.inverse[tj]])
                    if sg not in norm:
                        norm = closure(idx, [sg], norm)
            i += 1
        classes.append(members)
        normalizer_gens.append(list(norm.gens) if norm.size < n else list(group_gens))

    add_class(trivial_subgroup(idx))
    for c in range(ncyc):
        C = cyclic_subgroup(idx, int(cyc_rep[c]))
        if C.bits not in known:
            add_class(C)

    ci = 0
    while ci < len(classes):
        H = subgroups[classes[ci][0]]
        if H.size < n:
            uf = _UnionFind(ncyc)
            for g in normalizer_gens[ci]:
                image = clabel[conjugation_map(idx, g)[cyc_rep]]
                for a, b in enumerate(image):
                    uf.union(a, int(b))
            tried = set()
            for c in range(ncyc):
                root = uf.find(c)
                if root in tried:
                    continue
                x = int(cyc_rep[c])
                if x in H:
                    tried.add(root)
                    continue
                tried.add(root)
                K = join(idx, H, x)
                if K.bits not in known:
                    add_class(K)
        ci += 1
    log.debug("lattice: %d subgroups in %d classes", len(subgroups), len(classes))
    return Lattice(idx, subgroups, class_of, classes, list(group_gens))


def all_subgroups(idx: ElementIndex, group_gens: list[int], budget: int = DEFAULT_BUDGET) -> list[SubgroupSet]:
    return subgroup_lattice(idx, group_gens, budget).subgroups


@dataclass
class MaximalClasses:
    """Conjugacy classes of maximal subgroups."""

    classes: list[list[SubgroupSet]]
    representatives: list[SubgroupSet]
    indices: list[int]
    index: ElementIndex | None = field(default=None, repr=False)

    @property
    def all(self) -> list[SubgroupSet]:
        return [m for c in self.classes for m in c]


def maximal_subgroups(lattice: Lattice) -> MaximalClasses:
    n = lattice.index.order
    subs = lattice.subgroups
    by_size: dict[int, list[SubgroupSet]] = {}
    for s in subs:
        by_size.setdefault(s.size, []).append(s)
    classes, reps, indices = [], [], []
    for members in lattice.classes:
        M = subs[members[0]]
        if M.size == n:
            continue
        maximal = True
        for size, group in by_size.items():
            if size <= M.size or size == n or size % M.size:
                continue
            if any(M.bits & ~K.bits == 0 for K in group):
                maximal = False
                break
        if maximal:
            classes.append([subs[i] for i in members])
            reps.append(M)
            indices.append(n // M.size)
    return MaximalClasses(classes, reps, indices, lattice.index)


def frattini(mc: MaximalClasses, idx: ElementIndex | None = None) -> SubgroupSet:
    idx = idx or mc.index
    bits = (1 << idx.order) - 1
    for M in mc.all:
        bits &= M.bits
    return SubgroupSet(bits, bits_to_members(bits, idx.order))


def conjugacy_class_labels(idx: ElementIndex, group_gens) -> np.ndarray:
    """Label elements by conjugacy class, numbered by smallest member."""
    n = idx.order
    maps = [conjugation_map(idx, s) for s in group_gens]
    label = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for x in range(n):
        if label[x] >= 0:
            continue
        label[x] = nxt
        frontier = np.array([x])
        while frontier.size:
            images = np.unique(np.concatenate([m[frontier] for m in maps])) if maps else frontier[:0]
            images = images[label[images] < 0]
            label[images] = nxt
            frontier = images
        nxt += 1
    return label
