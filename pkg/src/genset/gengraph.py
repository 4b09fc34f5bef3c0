"""The generating graph, its reduced (weighted) quotient, and exact graph parameters.

Vertices of the reduced graph are the classes of elements with equal
neighbourhoods in the generating graph.  Elements of a class are pairwise
non-adjacent unless the group is cyclic, where the generator class carries a
loop.  Spread, clique, chromatic and total domination numbers of the full
graph are read off the reduced one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import equiv
from .equiv import Partition
from .muniversal import MUniversalAction

DEFAULT_BUDGET = 5_000_000


class Undefined(ValueError):
    pass


class LoopsUnsupported(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class WeightedReducedGraph:
    vertex_count: int
    weights: list[int]
    adjacency: list[int]
    loops: list[bool]
    identity_vertex: int
    partition: Partition | None = field(default=None, repr=False)

    @property
    def isolated(self) -> set[int]:
        return {v for v in range(self.vertex_count) if self.adjacency[v] == 0}

    def neighbours(self, v: int) -> list[int]:
        bits = self.adjacency[v]
        return [u for u in range(self.vertex_count) if bits >> u & 1]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def degree(self, v: int) -> int:
        """Neighbour count, a loop counted once."""
        return self.adjacency[v].bit_count()

    def candidates(self) -> list[int]:
        """Vertices holding at least one nonidentity element."""
        return [v for v in range(self.vertex_count)
                if v != self.identity_vertex or self.weights[v] > 1]

    def adjacency_matrix(self) -> np.ndarray:
        m = np.zeros((self.vertex_count, self.vertex_count), dtype=bool)
        for v in range(self.vertex_count):
            m[v, self.neighbours(v)] = True
        return m

    @classmethod
    def from_matrix(cls, adj, weights=None, identity_vertex: int = 0) -> "WeightedReducedGraph":
        adj = np.asarray(adj, dtype=bool)
        n = adj.shape[0]
        rows = [int.from_bytes(np.packbits(adj[v], bitorder="little").tobytes(), "little") for v in range(n)]
        return cls(n, list(weights) if weights is not None else [1] * n, rows,
                   [bool(adj[v, v]) for v in range(n)], identity_vertex)


def generating_graph(a: MUniversalAction) -> np.ndarray:
    """Adjacency of the full graph on group elements; loops on lone generators."""
    fix = a.fix.astype(np.float32)
    return (fix @ fix.T) == 0


def reduced_graph(g, a: MUniversalAction, levels=None) -> WeightedReducedGraph:
    lv = levels if levels is not None else equiv._Levels(a)
    part = equiv.mr_classes(a, 2, lv)
    rows = a.fix[part.reps]
    adj = equiv._disjointness(rows, rows)
    rg = WeightedReducedGraph.from_matrix(adj, part.sizes(), int(part.block_of[0]))
    rg.partition = part
    return rg


# -- set cover -----------------------------------------------------------------


def _min_cover(universe: int, sets: list[int], budget: int) -> list[int] | None:
    """Indices of a smallest family of ``sets`` covering ``universe``, or None."""
    union = 0
    for s in sets:
        union |= s
    if universe & ~union:
        return None
    if universe == 0:
        return []
    sets = [s & universe for s in sets]
    # drop sets contained in another
    order = sorted(range(len(sets)), key=lambda i: -sets[i].bit_count())
    kept: list[int] = []
    for i in order:
        s = sets[i]
        if s and not any(s & ~sets[j] == 0 for j in kept):
            kept.append(i)
    best = _greedy_cover(universe, [sets[i] for i in kept])
    best = [kept[i] for i in best]
    largest = max(sets[i].bit_count() for i in kept)
    # for each point, the kept sets covering it as a bitmask over positions in ``kept``
    covering: dict[int, int] = {}
    rest = universe
    while rest:
        low = rest & -rest
        covering[low] = sum(1 << k for k, i in enumerate(kept) if sets[i] & low)
        rest ^= low
    steps = 0

    def lower_bound(uncovered: int) -> int:
        # points with pairwise disjoint covering families each need their own set
        used, packed = 0, 0
        rest = uncovered
        while rest:
            low = rest & -rest
            if not covering[low] & used:
                used |= covering[low]
                packed += 1
            rest ^= low
        return max(packed, -(-uncovered.bit_count() // largest))

    def search(uncovered: int, chosen: list[int]) -> None:
        nonlocal best, steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"set cover passed {budget} steps")
        if uncovered == 0:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + lower_bound(uncovered) >= len(best):
            return
        # branch on the uncovered point with the fewest covering sets
        pivot, fewest = None, None
        rest = uncovered
        while rest:
            low = rest & -rest
            count = covering[low].bit_count()
            if fewest is None or count < fewest:
                pivot, fewest = low, count
                if count <= 1:
                    break
            rest ^= low
        options = [kept[k] for k in range(len(kept)) if covering[pivot] >> k & 1]
        options.sort(key=lambda i: -(sets[i] & uncovered).bit_count())
        for i in options:
            chosen.append(i)
            search(uncovered & ~sets[i], chosen)
            chosen.pop()

    search(universe, [])
    return best


def _greedy_cover(universe: int, sets: list[int]) -> list[int]:
    chosen = []
    uncovered = universe
    while uncovered:
        i = max(range(len(sets)), key=lambda j: (sets[j] & uncovered).bit_count())
        chosen.append(i)
        uncovered &= ~sets[i]
    return chosen


# -- parameters ----------------------------------------------------------------


def spread(rg: WeightedReducedGraph, budget: int = DEFAULT_BUDGET) -> int | float:
    """``math.inf`` when no set of nonidentity elements lacks a common neighbour."""
    cands = rg.candidates()
    if not cands:
        return math.inf
    if any(rg.adjacency[v] == 0 for v in cands):
        return 0
    full = (1 << rg.vertex_count) - 1
    cover = _min_cover(full, [full & ~rg.adjacency[v] for v in cands], budget)
    if cover is None:
        return math.inf
    return len(cover) - 1


def has_positive_spread(rg: WeightedReducedGraph) -> bool:
    """Whether every nonidentity element has a mate; decides ``spread(rg) > 0`` without a cover search."""
    return all(rg.adjacency[v] for v in rg.candidates())


def total_domination_number(rg: WeightedReducedGraph, budget: int = DEFAULT_BUDGET) -> int:
    targets = 0
    for v in rg.candidates():
        if rg.adjacency[v] == 0:
            raise Undefined(f"vertex {v} has no neighbour")
        targets |= 1 << v
    if targets == 0:
        return 0
    cover = _min_cover(targets, list(rg.adjacency), budget)
    assert cover is not None
    return len(cover)


def _clique_weights(rg: WeightedReducedGraph) -> list[int]:
    return [rg.weights[v] if rg.loops[v] else 1 for v in range(rg.vertex_count)]


def _greedy_colour_classes(vertices: list[int], adj: list[int]) -> list[list[int]]:
    classes: list[tuple[int, list[int]]] = []
    for v in vertices:
        for i, (mask, members) in enumerate(classes):
            if not adj[v] & mask:
                classes[i] = (mask | 1 << v, members + [v])
                break
        else:
            classes.append((1 << v, [v]))
    return [m for _, m in classes]


def clique_number(rg: WeightedReducedGraph, budget: int = DEFAULT_BUDGET) -> int:
    """Largest clique of the full graph; a looped class counts with its weight."""
    n = rg.vertex_count
    if n == 0:
        return 0
    w = _clique_weights(rg)
    adj = [rg.adjacency[v] & ~(1 << v) for v in range(n)]
    best = max(w)
    steps = 0

    def expand(cand: int, value: int) -> None:
        nonlocal best, steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"clique search passed {budget} steps")
        verts = []
        rest = cand
        while rest:
            low = rest & -rest
            verts.append(low.bit_length() - 1)
            rest ^= low
        verts.sort(key=lambda v: -w[v])
        classes = _greedy_colour_classes(verts, adj)
        bounds = [max(w[v] for v in c) for c in classes]
        # a vertex of class j can extend by at most the class maxima up to j
        prefix = list(np.cumsum(bounds)) if bounds else []
        for j in range(len(classes) - 1, -1, -1):
            bound = int(prefix[j])
            for v in classes[j]:
                if not cand >> v & 1:
                    continue
                if value + bound <= best:
                    return
                new_value = value + w[v]
                if new_value > best:
                    best = new_value
                nxt = cand & adj[v]
                if nxt:
                    expand(nxt, new_value)
                cand &= ~(1 << v)

    expand((1 << n) - 1, 0)
    return best


def _colourable(n: int, adj: list[int], k: int, budget_state: list[int], budget: int) -> bool:
    """DSATUR backtracking: can the graph be coloured with ``k`` colours?"""
    colour = [-1] * n
    forbidden = [0] * n

    def pick() -> int:
        best_v, best_key = -1, None
        for v in range(n):
            if colour[v] < 0:
                key = (forbidden[v].bit_count(), adj[v].bit_count())
                if best_key is None or key > best_key:
                    best_v, best_key = v, key
        return best_v

    def assign(done: int, used: int) -> bool:
        budget_state[0] += 1
        if budget_state[0] > budget:
            raise BudgetExceeded(f"colouring passed {budget} steps")
        if done == n:
            return True
        v = pick()
        limit = min(k, used + 1)
        for c in range(limit):
            if forbidden[v] >> c & 1:
                continue
            colour[v] = c
            changed = []
            rest = adj[v]
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                rest ^= low
                if colour[u] < 0 and not forbidden[u] >> c & 1:
                    forbidden[u] |= 1 << c
                    changed.append(u)
            if assign(done + 1, max(used, c + 1)):
                return True
            for u in changed:
                forbidden[u] &= ~(1 << c)
            colour[v] = -1
        return False

    return assign(0, 0)


def chromatic_number(rg: WeightedReducedGraph, budget: int = DEFAULT_BUDGET) -> int:
    if any(rg.loops):
        raise LoopsUnsupported("colouring is not defined for graphs with loops")
    n = rg.vertex_count
    if n == 0:
        return 0
    adj = list(rg.adjacency)
    unit = WeightedReducedGraph(n, [1] * n, adj, [False] * n, rg.identity_vertex)
    k = max(1, clique_number(unit, budget))
    state = [0]
    while not _colourable(n, adj, k, state, budget):
        k += 1
    return k
