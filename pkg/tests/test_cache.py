import struct

import numpy as np
import pytest

from genset import cache
from genset.analysis import Analysis
from genset.catalog import build
from genset.cache import FORMAT_VERSION, MAGIC, LatticeCache, decode, encode, group_hash


def _stored(spec, tmp_path):
    store = LatticeCache(tmp_path)
    an = Analysis(spec, cache=store)
    an.action
    return store, an


@pytest.mark.parametrize("spec", ["Sn:1", "Cn:1", "Sn:4", "PSL2:7", "Cn:30", "custom:8|(1,2,4,7)(3,6,8,5);(1,3,4,8)(2,5,7,6)"])
def test_round_trip_is_bit_exact(spec, tmp_path):
    store, an = _stored(spec, tmp_path)
    entry = store.load(an.group)
    assert entry is not None and entry.format_version == FORMAT_VERSION
    assert np.array_equal(entry.index.perms, an.index.perms)
    assert [s.bits for s in entry.lattice.subgroups] == [s.bits for s in an.lattice.subgroups]
    assert entry.lattice.class_of == an.lattice.class_of
    assert [m.bits for m in entry.maximal.representatives] == [m.bits for m in an.maximal.representatives]
    assert entry.maximal.indices == an.maximal.indices
    assert np.array_equal(entry.action.fix, an.action.fix)
    assert entry.action.fix_bits == an.action.fix_bits
    assert [b.transversal for b in entry.action.orbit_blocks] == [b.transversal for b in an.action.orbit_blocks]
    assert encode(entry) == store.path(group_hash(an.group)).read_bytes()


def test_cached_analysis_gives_same_invariants(tmp_path):
    _stored("Sn:4", tmp_path)
    again = Analysis("Sn:4", cache=LatticeCache(tmp_path))
    assert again.cache_hit
    assert again.psi == 3
    assert len(again.m_partition) == 15
    assert again.reduced_graph.vertex_count == 14


def test_version_mismatch_invalidates(tmp_path):
    store, an = _stored("Sn:3", tmp_path)
    path = store.path(group_hash(an.group))
    data = bytearray(path.read_bytes())
    struct.pack_into("<I", data, len(MAGIC), FORMAT_VERSION + 1)
    assert decode(bytes(data)) is None
    path.write_bytes(bytes(data))
    assert store.load(an.group) is None
    fresh = Analysis("Sn:3", cache=store)
    assert not fresh.cache_hit
    fresh.action
    assert store.load(an.group) is not None


def test_bad_magic_and_truncation(tmp_path):
    store, an = _stored("Sn:3", tmp_path)
    data = store.path(group_hash(an.group)).read_bytes()
    assert decode(b"NOTCACHE" + data[8:]) is None
    assert decode(data[:4]) is None


def test_no_temporary_files_left(tmp_path):
    _stored("Sn:4", tmp_path)
    assert [p.name for p in tmp_path.iterdir()] == [group_hash(build("Sn:4")) + ".gsc"]


def test_hash_ignores_generator_order_but_not_degree():
    a = build("custom:4|(1,2,3,4);(1,2)")
    b = build("custom:4|(1,2);(1,2,3,4)")
    c = build("custom:5|(1,2,3,4);(1,2)")
    assert group_hash(a) == group_hash(b)
    assert group_hash(a) != group_hash(c)


def test_cap_still_applies_with_cache(tmp_path):
    from genset.perm import OrderExceedsCap

    _stored("Sn:4", tmp_path)
    with pytest.raises(OrderExceedsCap):
        Analysis("Sn:4", cap=10, cache=LatticeCache(tmp_path)).index
