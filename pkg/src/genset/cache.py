"""On-disk cache of lattices, maximal classes and fixed-point rows.

See ``docs/format.md`` for the byte layout.  Files are written to a
temporary name and renamed, so readers never see a partial entry.
"""

from __future__ import annotations

import hashlib
import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import Lattice, MaximalClasses, SubgroupSet, bits_to_members
from .muniversal import CosetBlock, MUniversalAction, _pack_rows
from .perm import ElementIndex, PermGroup

MAGIC = b"GENSETC\0"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sII")
_SECTION = struct.Struct("<4sQ")


def group_hash(g: PermGroup) -> str:
    h = hashlib.sha256()
    h.update(struct.pack("<I", g.degree))
    for images in sorted(p.images for p in g.generators):
        h.update(np.asarray(images, dtype="<u4").tobytes())
    h.update(str(g.order()).encode())
    return h.hexdigest()


@dataclass
class CacheEntry:
    group_hash: str
    index: ElementIndex
    lattice: Lattice
    maximal: MaximalClasses
    action: MUniversalAction
    format_version: int = FORMAT_VERSION


def _bits_bytes(bits: int, nbytes: int) -> bytes:
    return bits.to_bytes(nbytes, "little")


def encode(entry: CacheEntry) -> bytes:
    idx, lat, mc, a = entry.index, entry.lattice, entry.maximal, entry.action
    n = idx.order
    nbytes = (n + 7) // 8
    sections = []
    meta = struct.pack("<QIIII", n, idx.degree, idx.cap, a.total_degree, len(lat.group_gens))
    meta += np.asarray(lat.group_gens, dtype="<u4").tobytes()
    sections.append((b"META", meta))
    sections.append((b"ELEM", idx.perms.astype("<u2").tobytes()))
    subg = struct.pack("<I", len(lat.subgroups)) + b"".join(_bits_bytes(s.bits, nbytes) for s in lat.subgroups)
    sections.append((b"SUBG", subg))
    position = {s.bits: i for i, s in enumerate(lat.subgroups)}
    maximal_cls = {lat.class_of[position[m.bits]] for m in mc.representatives}
    clss = np.asarray(lat.class_of, dtype="<u4").tobytes()
    flags = np.array([c in maximal_cls for c in range(len(lat.classes))], dtype=np.uint8).tobytes()
    sections.append((b"CLSS", struct.pack("<II", len(lat.class_of), len(lat.classes)) + clss + flags))
    blocks = [struct.pack("<I", len(a.orbit_blocks))]
    for b in a.orbit_blocks:
        blocks.append(struct.pack("<III", position[b.subgroup.bits], b.offset, len(b.transversal)))
        blocks.append(np.asarray(b.transversal, dtype="<u4").tobytes())
    sections.append((b"BLKS", b"".join(blocks)))
    fix = np.packbits(a.fix, axis=1, bitorder="little") if a.total_degree else np.zeros((n, 0), np.uint8)
    sections.append((b"FIXV", fix.tobytes()))
    out = [_HEADER.pack(MAGIC, FORMAT_VERSION, len(sections))]
    for tag, payload in sections:
        out.append(_SECTION.pack(tag, len(payload)))
        out.append(payload)
    return b"".join(out)


def decode(data: bytes, key: str = "") -> CacheEntry | None:
    """None when the header does not match this format version."""
    if len(data) < _HEADER.size:
        return None
    magic, version, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC or version != FORMAT_VERSION:
        return None
    pos = _HEADER.size
    sec: dict[bytes, memoryview] = {}
    view = memoryview(data)
    for _ in range(count):
        tag, length = _SECTION.unpack_from(data, pos)
        pos += _SECTION.size
        sec[tag] = view[pos:pos + length]
        pos += length
    n, degree, cap, total_degree, ngens = struct.unpack_from("<QIIII", sec[b"META"], 0)
    group_gens = np.frombuffer(sec[b"META"], dtype="<u4", offset=24, count=ngens).astype(int).tolist()
    dtype = np.uint8 if degree <= 256 else np.dtype(">u2")
    perms = np.frombuffer(sec[b"ELEM"], dtype="<u2").reshape(n, degree).astype(dtype)
    idx = ElementIndex(np.ascontiguousarray(perms), cap)
    nbytes = (n + 7) // 8
    (nsub,) = struct.unpack_from("<I", sec[b"SUBG"], 0)
    raw = bytes(sec[b"SUBG"][4:])
    subgroups = []
    for i in range(nsub):
        bits = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little")
        subgroups.append(SubgroupSet(bits, bits_to_members(bits, n)))
    nsubs, nclasses = struct.unpack_from("<II", sec[b"CLSS"], 0)
    class_of = np.frombuffer(sec[b"CLSS"], dtype="<u4", offset=8, count=nsubs).astype(int).tolist()
    flags = np.frombuffer(sec[b"CLSS"], dtype=np.uint8, offset=8 + 4 * nsubs, count=nclasses)
    classes: list[list[int]] = [[] for _ in range(nclasses)]
    for i, c in enumerate(class_of):
        classes[c].append(i)
    lattice = Lattice(idx, subgroups, class_of, classes, group_gens)
    mcls = [[subgroups[i] for i in classes[c]] for c in range(nclasses) if flags[c]]
    maximal = MaximalClasses(mcls, [c[0] for c in mcls], [n // c[0].size for c in mcls], idx)
    blk = sec[b"BLKS"]
    (nblocks,) = struct.unpack_from("<I", blk, 0)
    p = 4
    blocks = []
    for _ in range(nblocks):
        sub, offset, length = struct.unpack_from("<III", blk, p)
        p += 12
        transversal = np.frombuffer(blk, dtype="<u4", offset=p, count=length).astype(int).tolist()
        p += 4 * length
        blocks.append(CosetBlock(subgroups[sub], transversal, offset))
    width = (total_degree + 7) // 8
    packed = np.frombuffer(sec[b"FIXV"], dtype=np.uint8).reshape(n, width)
    fix = np.unpackbits(packed, axis=1, bitorder="little")[:, :total_degree].astype(bool)
    action = MUniversalAction(idx, blocks, total_degree, fix, _pack_rows(fix))
    return CacheEntry(key, idx, lattice, maximal, action, version)


class LatticeCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.gsc"

    def load(self, g: PermGroup) -> CacheEntry | None:
        key = group_hash(g)
        try:
            data = self.path(key).read_bytes()
        except FileNotFoundError:
            return None
        return decode(data, key)

    def store(self, g: PermGroup, index, lattice, maximal, action) -> Path:
        key = group_hash(g)
        self.directory.mkdir(parents=True, exist_ok=True)
        data = encode(CacheEntry(key, index, lattice, maximal, action))
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".gsc")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return self.path(key)
