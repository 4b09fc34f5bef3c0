import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genset import gengraph
from genset.gengraph import LoopsUnsupported, Undefined, WeightedReducedGraph

import oracles
from conftest import SMALL_GROUPS, analysis


def _graph(spec):
    return analysis(spec).reduced_graph


@pytest.mark.parametrize("spec", SMALL_GROUPS + ["Sn:5", "PSL2:7", "Cn:210", "PaperEx2"])
def test_reduced_graph_invariants(spec):
    an = analysis(spec)
    rg = an.reduced_graph
    assert sum(rg.weights) == an.order
    adj = rg.adjacency_matrix()
    assert np.array_equal(adj, adj.T)
    cyclic = an.d == 1
    assert any(rg.loops) == cyclic
    if not cyclic:
        # isolated elements share the identity's class
        assert rg.weights[rg.identity_vertex] >= an.frattini.size
        if gengraph.spread(rg) > 0:
            assert rg.weights[rg.identity_vertex] == an.frattini.size
    if not cyclic:
        assert rg.adjacency[rg.identity_vertex] == 0
        # members of one class are never joined
        assert not any(rg.loops)


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_reduced_graph_is_quotient_of_full_graph(spec):
    an = analysis(spec)
    elems, adj = oracles.generating_graph(an.group)
    pos = {e: i for i, e in enumerate(elems)}
    rg = an.reduced_graph
    part = rg.partition
    to_oracle = [pos[tuple(int(v) for v in an.index.perms[i])] for i in range(an.order)]
    rows = {}
    for x in range(an.order):
        rows.setdefault(int(part.block_of[x]), set()).add(tuple(adj[to_oracle[x]]))
    # one neighbourhood per class, distinct across classes
    assert all(len(r) == 1 for r in rows.values())
    assert len({next(iter(r)) for r in rows.values()}) == rg.vertex_count
    for u in range(rg.vertex_count):
        for v in range(rg.vertex_count):
            x, y = to_oracle[part.reps[u]], to_oracle[part.reps[v]]
            assert rg.has_edge(u, v) == adj[x][y]


@pytest.mark.parametrize("spec", [s for s in SMALL_GROUPS if not s.startswith("Cn")])
def test_spread_oracle_noncyclic(spec):
    assert gengraph.spread(_graph(spec)) == oracles.spread(analysis(spec).group)


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_clique_matches_full_graph(spec):
    assert gengraph.clique_number(_graph(spec)) == oracles.clique_number(analysis(spec).group)


@pytest.mark.parametrize("spec", [s for s in SMALL_GROUPS if not s.startswith("Cn") and analysis(s).order <= 24])
def test_chromatic_matches_full_graph(spec):
    assert gengraph.chromatic_number(_graph(spec)) == oracles.chromatic_number(analysis(spec).group)


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_total_domination_matches_full_graph(spec):
    rg = _graph(spec)
    try:
        ours = gengraph.total_domination_number(rg)
    except Undefined:
        elems, adj = oracles.generating_graph(analysis(spec).group)
        ident = tuple(range(analysis(spec).group.degree))
        assert any(not any(adj[i]) for i, e in enumerate(elems) if e != ident)
        return
    assert ours == oracles.total_domination(analysis(spec).group)


def test_s4_values():
    rg = _graph("Sn:4")
    assert rg.vertex_count == 14
    assert gengraph.spread(rg) == 0
    an = analysis("Sn:4")
    isolated = {an.index.element(x).cycle_type() for v in rg.isolated for x in rg.partition.blocks[v]}
    assert isolated == {(2, 2), (1, 1, 1, 1)}
    with pytest.raises(Undefined):
        gengraph.total_domination_number(rg)


def test_klein_four_group():
    rg = _graph("ElemAb:2,2")
    assert rg.vertex_count == 4
    assert gengraph.spread(rg) == 2
    assert gengraph.chromatic_number(rg) == 3
    assert gengraph.total_domination_number(rg) == 2
    assert gengraph.clique_number(rg) == 3


@pytest.mark.parametrize("p", [2, 3, 5])
def test_elementary_abelian_square(p):
    rg = _graph(f"ElemAb:{p},2")
    assert rg.vertex_count == p + 2
    assert gengraph.clique_number(rg) == p + 1
    assert rg.isolated == {rg.identity_vertex}
    others = [v for v in range(rg.vertex_count) if v != rg.identity_vertex]
    assert {rg.weights[v] for v in others} == {p - 1}
    assert all(rg.has_edge(u, v) for u, v in combinations(others, 2))


@pytest.mark.parametrize("n", [5, 12, 30])
def test_cyclic_clique_uses_looped_weight(n):
    rg = _graph(f"Cn:{n}")
    assert gengraph.clique_number(rg) >= sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
    assert gengraph.spread(rg) == math.inf
    with pytest.raises(LoopsUnsupported):
        gengraph.chromatic_number(rg)


@pytest.mark.parametrize("n", [30, 210, 546])
def test_cyclic_vertices_join_on_disjoint_prime_sets(n):
    an = analysis(f"Cn:{n}")
    rg = an.reduced_graph
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    assert rg.vertex_count == 2 ** len(primes)

    def missing(v):
        # primes p for which the class lies in the index-p subgroup
        k = int(an.index.orders[rg.partition.reps[v]])
        return frozenset(p for p in primes if (n // k) % p == 0)

    labels = [missing(v) for v in range(rg.vertex_count)]
    assert len(set(labels)) == rg.vertex_count
    for u in range(rg.vertex_count):
        for v in range(rg.vertex_count):
            assert rg.has_edge(u, v) == (not labels[u] & labels[v])


def test_edgeless_chromatic_and_complete_domination():
    empty = WeightedReducedGraph.from_matrix(np.zeros((3, 3), dtype=bool))
    assert gengraph.chromatic_number(empty) == 1
    m = np.zeros((6, 6), dtype=bool)
    m[1:, 1:] = ~np.eye(5, dtype=bool)
    k5 = WeightedReducedGraph.from_matrix(m, identity_vertex=0)
    assert gengraph.total_domination_number(k5) == 2
    assert gengraph.chromatic_number(k5) == 5


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.booleans(), min_size=n * n,
                                                                          max_size=n * n))))
def test_clique_and_colouring_on_random_graphs(data):
    import networkx as nx

    n, bits = data
    m = np.array(bits, dtype=bool).reshape(n, n)
    m = np.triu(m, 1)
    m = m | m.T
    rg = WeightedReducedGraph.from_matrix(m)
    g = nx.from_numpy_array(m.astype(int))
    assert gengraph.clique_number(rg) == max(len(c) for c in nx.find_cliques(g))
    chi = gengraph.chromatic_number(rg)
    from itertools import product
    # first vertex pinned to colour 0
    best = min(k for k in range(1, n + 1)
               if any(all(c[u] != c[v] for u, v in g.edges) for c in
                      ((0,) + t for t in product(range(k), repeat=n - 1))))
    assert chi == best


@pytest.mark.parametrize("spec", ["Sn:3", "Sn:4", "An:5", "Affine:2,2,3", "Affine:5,1,4", "Affine:7,1,3",
                                  "custom:4|(1,2,3,4);(1,3)", "ElemAb:3,2", "Sn:5", "PSL2:7", "An:6",
                                  "PaperEx2", "Sharply2t:17"])
def test_nonzero_spread_iff_efficient_with_trivial_frattini(spec):
    an = analysis(spec)
    if an.d != 2:
        pytest.skip("only 2-generated groups")
    positive = gengraph.spread(an.reduced_graph) > 0
    assert positive == gengraph.has_positive_spread(an.reduced_graph)
    assert positive == (an.efficiently_generated and an.frattini.size == 1)


def test_symmetric_group_five_has_spread_three():
    # checked against every 4-subset of nonidentity elements of the full graph
    assert gengraph.spread(_graph("Sn:5")) == 3


def test_search_budgets():
    rg = _graph("An:6")
    with pytest.raises(gengraph.BudgetExceeded):
        gengraph.clique_number(rg, budget=3)


@pytest.mark.parametrize("n", [5, 6, 30])
def test_cyclic_total_domination_uses_generator_loop(n):
    assert gengraph.total_domination_number(_graph(f"Cn:{n}")) == 1
