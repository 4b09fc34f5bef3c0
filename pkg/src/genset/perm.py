"""Permutations, deterministic Schreier-Sims, and indexed element lists.

Points are 0-based.  Products read left to right: ``p * q`` first applies
``p`` and then ``q``, so ``(p * q)(x) == q(p(x))``.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CAP = 5000


class DegreeMismatch(ValueError):
    pass


class OrderExceedsCap(RuntimeError):
    """The group is too large for element-level (lattice) work."""

    def __init__(self, order: int, cap: int):
        super().__init__(f"group order {order} exceeds element cap {cap}")
        self.order = order
        self.cap = cap


class Permutation:
    """An immutable permutation of ``range(degree)`` stored as its image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 0-based cycles, e.g. ``[(0, 1, 2), (3, 4)]``."""
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for x in cyc:
                if not 0 <= x < degree:
                    raise ValueError(f"point {x} out of range for degree {degree}")
                if x in seen:
                    raise ValueError(f"point {x} repeated in cycles")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return cls._trusted(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        lengths = [len(c) for c in self.cycles()]
        lengths += [1] * (self.degree - sum(lengths))
        return tuple(sorted(lengths, reverse=True))

    def order(self) -> int:
        return math.lcm(*[len(c) for c in self.cycles()]) if self.cycles() else 1

    def moved_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i != j]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def __str__(self):
        """1-based cycle notation, the same grammar the parser accepts."""
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cyc)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The permutation ``x -> q(p(x))``."""
    if len(p.images) != len(q.images):
        raise DegreeMismatch(f"degrees {len(p.images)} and {len(q.images)} differ")
    qi = q.images
    return Permutation._trusted(tuple(qi[i] for i in p.images))


def conjugate(p: Permutation, t: Permutation) -> Permutation:
    """``t^-1 p t``: relabels every point ``x`` of ``p`` as ``t(x)``."""
    if p.degree != t.degree:
        raise DegreeMismatch(f"degrees {p.degree} and {t.degree} differ")
    images = [0] * p.degree
    for x, y in enumerate(p.images):
        images[t.images[x]] = t.images[y]
    return Permutation._trusted(tuple(images))


class _Level:
    __slots__ = ("base", "gens", "transversal", "inverses")

    def __init__(self, base: int, degree: int):
        self.base = base
        self.gens: list[Permutation] = []
        ident = Permutation.identity(degree)
        # transversal[beta] maps base -> beta
        self.transversal: dict[int, Permutation] = {base: ident}
        self.inverses: dict[int, Permutation] = {base: ident}


class PermGroup:
    """A permutation group given by generators, with an eagerly built chain.

    Base points are chosen as the smallest point moved by the element that
    forces a new level, so the chain (and everything derived from it) is
    reproducible.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group with no generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a degree-{degree} group")
        self.degree = degree
        self.generators = tuple(g for g in gens if not g.is_identity())
        self._levels: list[_Level] = []
        for g in self.generators:
            residue, depth = self._sift(g, 0)
            if not residue.is_identity():
                self._add_strong(0, depth, residue)

    # -- chain construction -------------------------------------------------

    def _sift(self, g: Permutation, start: int) -> tuple[Permutation, int]:
        for depth in range(start, len(self._levels)):
            level = self._levels[depth]
            beta = g.images[level.base]
            u_inv = level.inverses.get(beta)
            if u_inv is None:
                return g, depth
            g = compose(g, u_inv)
        return g, len(self._levels)

    def _add_strong(self, lo: int, hi: int, h: Permutation) -> None:
        # h fixes the base points of levels < hi; it belongs to every level lo..hi.
        for depth in range(hi, lo - 1, -1):
            self._add_gen(depth, h)

    def _add_gen(self, depth: int, g: Permutation) -> None:
        if depth == len(self._levels):
            self._levels.append(_Level(g.moved_points()[0], self.degree))
        level = self._levels[depth]
        level.gens.append(g)
        queue = []
        for beta in list(level.transversal):
            self._schreier(depth, beta, g, queue)
        while queue:
            beta = queue.pop()
            for s in list(level.gens):
                self._schreier(depth, beta, s, queue)

    def _schreier(self, depth: int, beta: int, s: Permutation, queue: list) -> None:
        level = self._levels[depth]
        gamma = s.images[beta]
        u = level.transversal[beta]
        us = compose(u, s)
        if gamma not in level.transversal:
            level.transversal[gamma] = us
            level.inverses[gamma] = us.inverse()
            queue.append(gamma)
            return
        sch = compose(us, level.inverses[gamma])
        if sch.is_identity():
            return
        residue, stop = self._sift(sch, depth + 1)
        if not residue.is_identity():
            self._add_strong(depth + 1, stop, residue)

    # -- queries ------------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lv.base for lv in self._levels]

    @property
    def strong_generators(self) -> list[Permutation]:
        seen = {}
        for lv in self._levels:
            for g in lv.gens:
                seen[g] = None
        return list(seen)

    def order(self) -> int:
        return math.prod(len(lv.transversal) for lv in self._levels)

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatch(f"degree {p.degree} element tested in a degree-{self.degree} group")
        residue, depth = self._sift(p, 0)
        return depth == len(self._levels) and residue.is_identity()

    def is_member(self, p: Permutation) -> bool:
        return p in self

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = g.images[x]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def transversals(self) -> list[list[Permutation]]:
        return [list(lv.transversal.values()) for lv in self._levels]

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)

    def derived_subgroup(self) -> "PermGroup":
        gens = self.generators
        comms = []
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                c = a.inverse() * b.inverse() * a * b
                if not c.is_identity():
                    comms.append(c)
        return normal_closure(self, comms)

    def is_soluble(self) -> bool:
        g = self
        while g.order() > 1:
            d = g.derived_subgroup()
            if d.order() == g.order():
                return False
            g = d
        return True

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def normal_closure(g: PermGroup, elements: Sequence[Permutation]) -> PermGroup:
    """Smallest normal subgroup of ``g`` containing ``elements``."""
    sub = PermGroup([], g.degree)
    gens: list[Permutation] = []
    queue = list(elements)
    while queue:
        x = queue.pop()
        if x in sub:
            continue
        gens.append(x)
        sub = PermGroup(gens, g.degree)
        queue.extend(conjugate(x, t) for t in g.generators)
    return sub


def group_order(g: PermGroup) -> int:
    return g.order()


def is_member(g: PermGroup, p: Permutation) -> bool:
    return p in g


def _min_uint(n: int):
    return np.uint8 if n <= 256 else np.dtype(">u2")


class ElementIndex:
    """Every element of a group as a row of image arrays, identity at index 0.

    Rows are sorted lexicographically by image array (the identity is always
    the smallest).  The multiplication table ``table[i, j] = index(e_i * e_j)``
    is built on first use.
    """

    def __init__(self, perms: np.ndarray, cap: int):
        self.perms = perms
        self.order = perms.shape[0]
        self.degree = perms.shape[1]
        self.cap = cap
        self._keys = np.ascontiguousarray(perms).view(f"V{perms.dtype.itemsize * self.degree}").ravel()
        self._table = None
        self._inv = None
        self._orders = None
        self._lookup: dict[tuple, int] | None = None

    @property
    def index_dtype(self):
        return np.int16 if self.order <= 32767 else np.int32

    def __len__(self):
        return self.order

    def element(self, i: int) -> Permutation:
        return Permutation._trusted(tuple(int(x) for x in self.perms[i]))

    @property
    def elements(self) -> list[Permutation]:
        return [self.element(i) for i in range(self.order)]

    def index(self, p: Permutation) -> int:
        if self._lookup is None:
            self._lookup = {tuple(int(x) for x in row): i for i, row in enumerate(self.perms)}
        try:
            return self._lookup[p.images]
        except KeyError:
            raise KeyError(f"{p} is not an element of this group") from None

    def lookup_rows(self, rows: np.ndarray) -> np.ndarray:
        """Indices of an array of image rows (all must be group elements)."""
        rows = np.ascontiguousarray(rows.astype(self.perms.dtype, copy=False))
        keys = rows.view(self._keys.dtype).ravel()
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, self.order - 1)
        if not np.array_equal(self._keys[pos], keys):
            raise KeyError("row is not an element of this group")
        return pos

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            n = self.order
            table = np.empty((n, n), dtype=self.index_dtype)
            perms = self.perms.astype(np.int64)
            for j in range(n):
                # e_i * e_j sends x to e_j(e_i(x))
                table[:, j] = self.lookup_rows(perms[j][perms])
            self._table = table
        return self._table

    @property
    def inverse(self) -> np.ndarray:
        if self._inv is None:
            inv = np.empty_like(self.perms)
            rows = np.arange(self.order)[:, None]
            inv[rows, self.perms.astype(np.int64)] = np.arange(self.degree, dtype=self.perms.dtype)
            self._inv = self.lookup_rows(inv)
        return self._inv

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            perms = self.perms.astype(np.int64)
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            power = perms.copy()
            ident = np.arange(self.degree)
            k = 1
            while True:
                done = (orders == 0) & np.all(power == ident, axis=1)
                orders[done] = k
                if orders.all():
                    break
                power = np.take_along_axis(perms, power, axis=1)
                k += 1
            self._orders = orders
        return self._orders

    def mul(self, a, b):
        return self.table[a, b]

    def generator_indices(self, gens: Sequence[Permutation]) -> list[int]:
        return [self.index(g) for g in gens]


def enumerate_elements(g: PermGroup, cap: int = DEFAULT_CAP) -> ElementIndex:
    order = g.order()
    if order > cap:
        raise OrderExceedsCap(order, cap)
    dtype = _min_uint(g.degree)
    elems = np.arange(g.degree, dtype=np.int64)[None, :]
    # every element is u_k * ... * u_1 with u_i from the level-i transversal
    for trans in reversed(g.transversals()):
        us = np.array([t.images for t in trans], dtype=np.int64)
        elems = np.concatenate([u[elems] for u in us], axis=0)
    order_idx = np.lexsort(elems.T[::-1])
    elems = elems[order_idx].astype(dtype)
    return ElementIndex(np.ascontiguousarray(elems), cap)
