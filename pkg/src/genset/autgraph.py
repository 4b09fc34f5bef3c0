"""Automorphism groups of reduced graphs and of the groups themselves.

Graph automorphisms come from an individualization-refinement search: the
vertex colouring is refined by neighbour-colour hashes, a vertex of the
smallest non-singleton cell is individualized, and leaves of the search tree
are compared with the first leaf.  Orbits along the first path give the
group order, which is cross-checked with a stabilizer chain.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import equiv
from .gengraph import WeightedReducedGraph
from .lattice import conjugacy_class_labels
from .muniversal import MUniversalAction
from .perm import Permutation, PermGroup

DEFAULT_BUDGET = 2_000_000
_HASH_SEED = 0x5EED


class BudgetExceeded(RuntimeError):
    pass


class Mismatch(AssertionError):
    def __init__(self, what: str, expected, found):
        super().__init__(f"{what}: expected {expected}, found {found}")
        self.what = what
        self.expected = expected
        self.found = found


@dataclass
class AutResult:
    generators: list[tuple[int, ...]]
    order: int
    orbit_partition: list[list[int]] = field(default_factory=list)


# -- colour refinement -----------------------------------------------------------


def _relabel(keys: np.ndarray) -> np.ndarray:
    """Map rows of ``keys`` to 0..c-1 in lexicographic order."""
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    return inverse.ravel().astype(np.int64)


class _Refiner:
    def __init__(self, adj: np.ndarray):
        self.adj = adj.astype(np.int64)
        n = adj.shape[0]
        rng = np.random.default_rng(_HASH_SEED)
        self.salt = rng.integers(1, 2**62, size=max(n, 1), dtype=np.int64)

    def refine(self, colours: np.ndarray) -> np.ndarray:
        count = int(colours.max()) + 1 if colours.size else 0
        while True:
            with np.errstate(over="ignore"):
                sig = self.adj @ self.salt[colours]
            new = _relabel(np.stack([colours, sig], axis=1))
            new_count = int(new.max()) + 1 if new.size else 0
            if new_count == count:
                return colours
            colours, count = new, new_count

    def individualize(self, colours: np.ndarray, v: int) -> np.ndarray:
        keys = 2 * colours + 1
        keys[v] -= 1
        return self.refine(_relabel(keys[:, None]))


def _target_cell(colours: np.ndarray) -> np.ndarray | None:
    counts = np.bincount(colours)
    nonsingle = np.flatnonzero(counts > 1)
    if not nonsingle.size:
        return None
    c = nonsingle[np.argmin(counts[nonsingle])]
    return np.flatnonzero(colours == c)


def _shape(colours: np.ndarray) -> bytes:
    return np.bincount(colours).tobytes()


# -- automorphism search ---------------------------------------------------------


def _is_automorphism(perm: np.ndarray, adj: np.ndarray, colours0: np.ndarray) -> bool:
    if not np.array_equal(colours0[perm], colours0):
        return False
    return bool(np.array_equal(adj[np.ix_(perm, perm)], adj))


def _orbit(point: int, gens: list[np.ndarray]) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = int(g[x])
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def graph_aut(rg: WeightedReducedGraph, weighted: bool = True, budget: int = DEFAULT_BUDGET) -> AutResult:
    n = rg.vertex_count
    if n <= 1:
        return AutResult([], 1, [[v] for v in range(n)])
    adj = rg.adjacency_matrix()
    degree = adj.sum(axis=1) - np.diag(adj)
    loops = np.array(rg.loops, dtype=np.int64)
    weights = np.array(rg.weights if weighted else [0] * n, dtype=np.int64)
    colours0 = _relabel(np.stack([degree, loops, weights], axis=1))
    ref = _Refiner(adj)
    root = ref.refine(colours0)

    # first path
    path_colours = [root]
    path_cells = []
    path_vertices = []
    colours = root
    while (cell := _target_cell(colours)) is not None:
        v = int(cell[0])
        path_cells.append(cell)
        path_vertices.append(v)
        colours = ref.individualize(colours, v)
        path_colours.append(colours)
    first_leaf = colours
    inverse_first = np.empty(n, dtype=np.int64)
    inverse_first[first_leaf] = np.arange(n)
    shapes = [_shape(c) for c in path_colours]

    gens: list[np.ndarray] = []
    steps = 0

    def leaf_map(leaf: np.ndarray) -> np.ndarray:
        # vertex with colour c in the first leaf goes to the vertex with colour c here
        where = np.empty(n, dtype=np.int64)
        where[leaf] = np.arange(n)
        return where[first_leaf]

    def search(colours: np.ndarray, depth: int) -> np.ndarray | None:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"automorphism search passed {budget} nodes")
        if _shape(colours) != shapes[depth]:
            return None
        cell = _target_cell(colours)
        if cell is None:
            perm = leaf_map(colours)
            return perm if _is_automorphism(perm, adj, colours0) else None
        for w in cell:
            found = search(ref.individualize(colours, int(w)), depth + 1)
            if found is not None:
                return found
        return None

    orbit_sizes = []
    for level in range(len(path_vertices) - 1, -1, -1):
        v = path_vertices[level]
        prefix = path_vertices[:level]
        stabilizer = [g for g in gens if all(g[p] == p for p in prefix)]
        orbit = _orbit(v, stabilizer)
        for w in path_cells[level]:
            w = int(w)
            if w in orbit:
                continue
            found = search(ref.individualize(path_colours[level], w), level + 1)
            if found is not None:
                gens.append(found)
                stabilizer.append(found)
                orbit = _orbit(v, stabilizer)
        orbit_sizes.append(len(orbit))
    order = math.prod(orbit_sizes)

    for g in gens:
        if not _is_automorphism(g, adj, colours0):
            raise AssertionError("search produced a non-automorphism")
    chain = PermGroup([Permutation(g.tolist()) for g in gens], n).order() if gens else 1
    if chain != order:
        raise AssertionError(f"orbit product {order} disagrees with stabilizer chain {chain}")

    parent = list(range(n))
    for v in range(n):
        orbit = _orbit(v, gens)
        for u in orbit:
            parent[u] = min(parent[u], min(orbit))
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(parent[v], []).append(v)
    return AutResult([tuple(int(x) for x in g) for g in gens], order, list(classes.values()))


def weight_kernel_order(rg: WeightedReducedGraph) -> int:
    return math.prod(math.factorial(w) for w in rg.weights)


def aut_gamma_order(g, rg: WeightedReducedGraph, weighted_aut: AutResult | None = None) -> int:
    """Order of the automorphism group of the full generating graph."""
    if weighted_aut is None:
        weighted_aut = graph_aut(rg, weighted=True)
    return weight_kernel_order(rg) * weighted_aut.order


# -- automorphisms of the group ----------------------------------------------------


def _spanning_tree(table: np.ndarray, gens: list[int], n: int):
    """BFS layers of the Cayley graph: ``(children, parents, generator slots)``."""
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    layers = []
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        kids, parents, slots = [], [], []
        for k, s in enumerate(gens):
            img = table[frontier, s].astype(np.int64)
            fresh = ~seen[img]
            img_f = img[fresh]
            uniq, first = np.unique(img_f, return_index=True)
            seen[uniq] = True
            kids.append(uniq)
            parents.append(frontier[fresh][first])
            slots.append(np.full(uniq.size, k))
        frontier = np.concatenate(kids)
        if frontier.size:
            layers.append((frontier, np.concatenate(parents), np.concatenate(slots)))
    if not seen.all():
        raise ValueError("tuple does not generate the group")
    return layers


def _extends(table, layers, gens, images, n) -> bool:
    phi = np.full(n, -1, dtype=np.int64)
    phi[0] = 0
    imgs = np.asarray(images, dtype=np.int64)
    for kids, parents, slots in layers:
        phi[kids] = table[phi[parents], imgs[slots]]
    seen = np.zeros(n, dtype=bool)
    seen[phi] = True
    if not seen.all():
        return False
    for s, h in zip(gens, images):
        if not np.array_equal(phi[table[:, s].astype(np.int64)], table[phi, h]):
            return False
    return True


def aut_group_order(a: MUniversalAction, levels=None, generating_tuple=None) -> int:
    """Order of the automorphism group by backtracking over generator images."""
    idx = a.index
    n = idx.order
    if n == 1:
        return 1
    table = idx.table
    inv = idx.inverse.astype(np.int64)
    orders = idx.orders.astype(np.int64)
    lv = levels if levels is not None else equiv._Levels(a)
    gens = list(generating_tuple or equiv.generating_witness(a, lv))
    cls = conjugacy_class_labels(idx, gens)
    csize = np.bincount(cls)[cls]
    fp = orders * (n + 1) + csize
    gens = _best_tuple(a, lv, gens, fp)
    k = len(gens)
    layers = _spanning_tree(table, gens, n)

    def options(chosen: list[int]) -> np.ndarray:
        i = len(chosen)
        g = gens[i]
        mask = fp == fp[g]
        for j, h in enumerate(chosen):
            gj = gens[j]
            mask &= orders[table[h].astype(np.int64)] == orders[table[gj, g]]
            mask &= orders[table[h, inv].astype(np.int64)] == orders[table[gj, inv[g]]]
        return np.flatnonzero(mask)

    def count(chosen: list[int]) -> int:
        if len(chosen) == k:
            return 1 if _extends(table, layers, gens, chosen, n) else 0
        return sum(count(chosen + [int(h)]) for h in options(chosen))

    total = 0
    first = gens[0]
    for c in np.unique(cls[fp == fp[first]]):
        rep = int(np.flatnonzero(cls == c)[0])
        total += int(np.sum(cls == c)) * count([rep])
    return total


def _best_tuple(a, lv, witness, fp) -> list[int]:
    """Among generating pairs of representatives, the one with fewest candidate images."""
    if len(witness) != 2:
        return list(witness)
    counts = Counter(fp.tolist())
    reps = np.array(lv.mp.reps)
    weight = np.array([counts[int(fp[r])] for r in reps], dtype=np.float64)
    disjoint = equiv._disjointness(a.fix[reps], a.fix[reps])
    cost = np.where(disjoint, weight[:, None] * weight[None, :], np.inf)
    i, j = np.unravel_index(int(np.argmin(cost)), cost.shape)
    if not np.isfinite(cost[i, j]):
        return list(witness)
    return [int(reps[i]), int(reps[j])]


# -- closed forms ------------------------------------------------------------------


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _check(report: dict, what: str, expected, found) -> None:
    report[what] = {"expected": expected, "found": found}
    if expected != found:
        raise Mismatch(what, expected, found)


def closed_form_cyclic(n: int, analysis=None) -> dict:
    """Compare the reduced graph of ``C_n`` with its predicted shape."""
    from itertools import combinations

    from .analysis import Analysis

    if n < 2:
        raise ValueError("n must be at least 2")
    an = analysis or Analysis(f"Cn:{n}")
    primes = _prime_factors(n)
    r = len(primes)
    base = n // math.prod(primes)
    predicted = sorted(base * math.prod(p - 1 for p in J)
                       for k in range(r + 1) for J in combinations(primes, k))
    rg = an.reduced_graph
    report: dict = {"n": n, "r": r}
    _check(report, "vertex_count", 2 ** r, rg.vertex_count)
    _check(report, "weights", predicted, sorted(rg.weights))
    _check(report, "unweighted_aut_order", math.factorial(r), graph_aut(rg, weighted=False).order)
    _check(report, "weighted_aut_order", 1, graph_aut(rg, weighted=True).order)
    _check(report, "aut_gamma_order", math.prod(math.factorial(w) for w in predicted),
           aut_gamma_order(an.group, rg))
    return report


def closed_form_affine(p: int, k: int, n: int, analysis=None) -> dict:
    from .analysis import Analysis

    an = analysis or Analysis(f"Affine:{p},{k},{n}")
    primes = _prime_factors(n)
    r = len(primes)
    squarefree = math.prod(primes) == n
    q = p ** k
    vertices = (2 ** r - 1) * q + 2 if squarefree else 2 ** r * q + 2
    rg = an.reduced_graph
    report: dict = {"p": p, "k": k, "n": n, "r": r}
    _check(report, "vertex_count", vertices, rg.vertex_count)
    _check(report, "unweighted_aut_order", math.factorial(q) * math.factorial(r),
           graph_aut(rg, weighted=False).order)
    _check(report, "weighted_aut_order", math.factorial(q), graph_aut(rg, weighted=True).order)
    return report
