import numpy as np
import pytest

from genset.catalog import build
from genset.lattice import (BudgetExceeded, closure, conjugacy_class_labels, cyclic_generator_classes, frattini,
                            join, maximal_subgroups, subgroup_lattice)
from genset.perm import enumerate_elements

import oracles


def _lattice(spec, **kw):
    g = build(spec)
    idx = enumerate_elements(g)
    return g, idx, subgroup_lattice(idx, idx.generator_indices(g.generators), **kw)


@pytest.mark.parametrize("spec", ["Sn:3", "Sn:4", "Cn:12", "custom:4|(1,2,3,4);(1,3)", "Affine:2,2,3",
                                  "Affine:5,1,4", "ElemAb:3,2", "An:5"])
def test_all_subgroups_match_pair_closures(spec):
    g, idx, lat = _lattice(spec)
    ours = {frozenset(tuple(int(v) for v in idx.perms[i]) for i in s.members) for s in lat.subgroups}
    assert ours == oracles.subgroups(g)
    assert len(ours) == len(lat.subgroups)


# counts of all subgroups and of conjugacy classes, frozen from the run above and
# from closing pairs for the larger groups
@pytest.mark.parametrize("spec,count,classes", [
    ("Sn:3", 6, 4), ("Sn:4", 30, 11), ("An:5", 59, 9), ("Sn:5", 156, 19),
    ("PSL2:7", 179, 15), ("An:6", 501, 22), ("Sn:6", 1455, 56),
])
def test_subgroup_counts(spec, count, classes):
    _, _, lat = _lattice(spec)
    assert len(lat.subgroups) == count
    assert len(lat.classes) == classes


@pytest.mark.parametrize("spec,indices,frattini_order", [
    ("Sn:3", [2, 3], 1), ("Sn:4", [2, 3, 4], 1), ("Cn:12", [2, 3], 2), ("An:5", [5, 6, 10], 1),
    ("PSL2:7", [7, 7, 8], 1), ("custom:4|(1,2,3,4);(1,3)", [2, 2, 2], 2), ("ElemAb:2,3", [2] * 7, 1),
])
def test_maximal_classes_and_frattini(spec, indices, frattini_order):
    _, idx, lat = _lattice(spec)
    mc = maximal_subgroups(lat)
    assert sorted(mc.indices) == indices
    assert frattini(mc).size == frattini_order


def test_maximal_means_no_proper_overgroup():
    _, idx, lat = _lattice("Sn:4")
    mc = maximal_subgroups(lat)
    maximal = {m.bits for m in mc.all}
    full = (1 << idx.order) - 1
    for s in lat.subgroups:
        over = [t for t in lat.subgroups if s.bits != t.bits and s.issubset(t) and t.bits != full]
        assert (s.bits in maximal) == (not over and s.bits != full)


def test_conjugacy_classes_of_subgroups_are_orbits():
    g, idx, lat = _lattice("Sn:4")
    table, inv = idx.table, idx.inverse
    for members in lat.classes:
        first = lat.subgroups[members[0]]
        orbit = {frozenset(int(table[table[inv[t], h], t]) for h in first.members) for t in range(idx.order)}
        assert orbit == {frozenset(lat.subgroups[i].members.tolist()) for i in members}


def test_closure_and_join():
    g = build("Sn:4")
    idx = enumerate_elements(g)
    gens = idx.generator_indices(g.generators)
    assert closure(idx, gens).size == 24
    assert closure(idx, [0]).size == 1
    assert closure(idx, [gens[0]]).size == 4
    t = idx.index(g.generators[1])
    assert join(idx, closure(idx, [gens[0]]), t).size == 24


def test_cyclic_labels_group_generators():
    g = build("Cn:12")
    idx = enumerate_elements(g)
    labels = cyclic_generator_classes(idx)
    sizes = sorted(np.bincount(labels).tolist())
    # phi(d) for d | 12
    assert sizes == sorted([1, 1, 2, 2, 2, 4])


def test_conjugacy_class_sizes():
    g = build("Sn:5")
    idx = enumerate_elements(g)
    labels = conjugacy_class_labels(idx, idx.generator_indices(g.generators))
    assert sorted(np.bincount(labels).tolist()) == [1, 10, 15, 20, 20, 24, 30]


def test_budget():
    with pytest.raises(BudgetExceeded):
        _lattice("Sn:4", budget=10)
