"""Slow, direct reference computations used only by the tests.

Nothing here touches the multiplication table, the lattice or the
m-universal action: groups are sets of image tuples and generation is
decided by closing under composition.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import networkx as nx


def compose(p, q):
    # apply p, then q
    return tuple(q[i] for i in p)


def closure(gens, degree):
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = compose(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def elements(group):
    return sorted(closure([g.images for g in group.generators], group.degree))


def order_of(p):
    ident = tuple(range(len(p)))
    k, x = 1, p
    while x != ident:
        x = compose(x, p)
        k += 1
    return k


@lru_cache(maxsize=None)
def _generating_pairs(elems: tuple, degree: int):
    n = len(elems)
    pos = {e: i for i, e in enumerate(elems)}
    adj = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if len(closure([elems[i], elems[j]], degree)) == n:
                adj[i][j] = adj[j][i] = True
    return adj, pos


def generating_graph(group):
    """``(elements, adjacency)`` of the full generating graph, loops included."""
    elems = tuple(elements(group))
    adj, _ = _generating_pairs(elems, group.degree)
    return list(elems), adj


def spread(group, max_k=8):
    elems, adj = generating_graph(group)
    n = len(elems)
    ident = tuple(range(group.degree))
    nonid = [i for i in range(n) if elems[i] != ident]
    nbr = [sum(1 << j for j in range(n) if adj[i][j]) for i in range(n)]
    for k in range(1, max_k + 1):
        for subset in combinations(nonid, k):
            common = (1 << n) - 1
            for i in subset:
                common &= nbr[i]
            if common == 0:
                return k - 1
    return None


def clique_number(group):
    elems, adj = generating_graph(group)
    g = nx.Graph()
    g.add_nodes_from(range(len(elems)))
    g.add_edges_from((i, j) for i in range(len(elems)) for j in range(i + 1, len(elems)) if adj[i][j])
    return max(len(c) for c in nx.find_cliques(g))


def total_domination(group, max_k=6):
    elems, adj = generating_graph(group)
    n = len(elems)
    ident = tuple(range(group.degree))
    targets = sum(1 << i for i in range(n) if elems[i] != ident)
    nbr = [sum(1 << j for j in range(n) if adj[i][j]) for i in range(n)]
    for k in range(1, max_k + 1):
        for subset in combinations(range(n), k):
            covered = 0
            for i in subset:
                covered |= nbr[i]
            if covered & targets == targets:
                return k
    return None


def chromatic_number(group):
    elems, adj = generating_graph(group)
    n = len(elems)
    nbrs = [[j for j in range(n) if adj[i][j] and j != i] for i in range(n)]
    order = sorted(range(n), key=lambda v: -len(nbrs[v]))

    def colourable(k):
        colour = {}

        def place(t):
            if t == n:
                return True
            v = order[t]
            used = {colour[u] for u in nbrs[v] if u in colour}
            for c in range(min(k, max(colour.values(), default=-1) + 2)):
                if c not in used:
                    colour[v] = c
                    if place(t + 1):
                        return True
                    del colour[v]
            return False

        return place(0)

    k = 1
    while not colourable(k):
        k += 1
    return k


def automorphism_count(group):
    """Count automorphisms by trying every image of a generating pair."""
    elems = elements(group)
    degree = group.degree
    n = len(elems)
    orders = {e: order_of(e) for e in elems}
    pair = None
    for a in elems:
        for b in elems:
            if len(closure([a, b], degree)) == n:
                pair = (a, b)
                break
        if pair:
            break
    if pair is None:
        raise ValueError("oracle expects a 2-generated group")
    a, b = pair
    # words reaching every element from the pair
    ident = tuple(range(degree))
    word = {ident: ()}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for k, s in enumerate((a, b)):
                y = compose(x, s)
                if y not in word:
                    word[y] = word[x] + (k,)
                    nxt.append(y)
        frontier = nxt

    def evaluate(w, images):
        x = ident
        for k in w:
            x = compose(x, images[k])
        return x

    count = 0
    for ia in elems:
        if orders[ia] != orders[a]:
            continue
        for ib in elems:
            if orders[ib] != orders[b]:
                continue
            phi = {x: evaluate(w, (ia, ib)) for x, w in word.items()}
            if len(set(phi.values())) != n:
                continue
            if all(phi[compose(x, y)] == compose(phi[x], phi[y]) for x in elems for y in (a, b)):
                count += 1
    return count


def subgroups(group):
    """All subgroups as frozensets, from closures of pairs (enough for 2-generated subgroups)."""
    elems = elements(group)
    found = set()
    for i, x in enumerate(elems):
        for y in elems[i:]:
            found.add(closure([x, y], group.degree))
    return found
