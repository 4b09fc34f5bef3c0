"""Constructors for the small groups studied here, plus a cycle-notation parser."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path

import numpy as np

from .perm import Permutation, PermGroup

MAX_FIELD = 32


class InvalidSpec(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class PointOutOfRange(ValueError):
    pass


# -- finite fields -----------------------------------------------------------


def prime_power(q: int) -> tuple[int, int] | None:
    """``(p, e)`` with ``q == p**e``, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            return (p, e) if q == 1 else None
    return None


class GF:
    """The field of order ``q = p**e``; element ``a`` is the polynomial with
    base-``p`` digits of ``a`` as coefficients."""

    def __init__(self, q: int):
        pe = prime_power(q)
        if pe is None:
            raise InvalidSpec(f"{q} is not a prime power")
        p, e = pe
        if e > 1 and q > MAX_FIELD:
            raise InvalidSpec(f"field of order {q} not supported (prime powers up to {MAX_FIELD})")
        self.q, self.p, self.e = q, p, e
        digits = np.array([[(a // p**i) % p for i in range(e)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(e)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        self.mul, self.primitive = self._mul_table(digits, weights)
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(self.mul[a] == 1)[0])

    def _mul_table(self, digits, weights):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            a = np.arange(q)
            mul = (a[:, None] * a[None, :]) % p
            return mul, self._find_primitive(mul)
        for tail in product(range(p), repeat=e):
            modulus = list(tail)  # x^e = -(tail . x^i)
            if modulus[0] == 0:
                continue
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(q):
                    prod_ = [0] * (2 * e - 1)
                    for i in range(e):
                        for j in range(e):
                            prod_[i + j] += digits[a, i] * digits[b, j]
                    for k in range(2 * e - 2, e - 1, -1):
                        c = prod_[k]
                        if c:
                            prod_[k] = 0
                            for i in range(e):
                                prod_[k - e + i] -= c * modulus[i]
                    mul[a, b] = sum((prod_[i] % p) * int(weights[i]) for i in range(e))
            prim = self._find_primitive(mul)
            if prim is not None:
                return mul, prim
        raise AssertionError("no irreducible polynomial found")

    def _find_primitive(self, mul):
        q = self.q
        for g in range(2, q) if q > 2 else [1]:
            x, k = g, 1
            while x != 1 and k < q:
                x = mul[x, g]
                k += 1
            if k == q - 1:
                return g
        return None

    def power(self, a: int, k: int) -> int:
        r = 1
        for _ in range(k):
            r = int(self.mul[r, a])
        return r


@lru_cache(maxsize=None)
def galois_field(q: int) -> GF:
    return GF(q)


# -- group families ----------------------------------------------------------


def _perm(images) -> Permutation:
    return Permutation(images)


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise InvalidSpec("symmetric degree must be >= 1")
    if n == 1:
        return PermGroup([], 1)
    if n == 2:
        return PermGroup([Permutation.from_cycles([(0, 1)], 2)])
    return PermGroup([Permutation.from_cycles([tuple(range(n))], n),
                      Permutation.from_cycles([(0, 1)], n)])


def alternating(n: int) -> PermGroup:
    if n < 1:
        raise InvalidSpec("alternating degree must be >= 1")
    if n < 3:
        return PermGroup([], n)
    if n == 3:
        return PermGroup([Permutation.from_cycles([(0, 1, 2)], 3)])
    long = tuple(range(n)) if n % 2 else tuple(range(1, n))
    return PermGroup([Permutation.from_cycles([(0, 1, 2)], n),
                      Permutation.from_cycles([long], n)])


def cyclic(n: int) -> PermGroup:
    """The regular representation: a single ``n``-cycle."""
    if n < 1:
        raise InvalidSpec("cyclic order must be >= 1")
    if n == 1:
        return PermGroup([], 1)
    return PermGroup([Permutation.from_cycles([tuple(range(n))], n)])


def elementary_abelian(p: int, k: int) -> PermGroup:
    """``C_p^k`` as ``k`` disjoint ``p``-cycles."""
    if prime_power(p) != (p, 1) or k < 1:
        raise InvalidSpec(f"elementary abelian needs a prime p and k >= 1, got {p}, {k}")
    deg = p * k
    return PermGroup([Permutation.from_cycles([tuple(range(i * p, (i + 1) * p))], deg)
                      for i in range(k)])


def affine(p: int, k: int, n: int) -> PermGroup:
    """``C_p^k : C_n`` acting on the field of order ``p**k``; the complement is
    the subgroup of order ``n`` of the multiplicative group."""
    if prime_power(p) != (p, 1):
        raise InvalidSpec(f"affine: {p} is not prime")
    q = p ** k
    F = galois_field(q)
    if n < 1 or (q - 1) % n:
        raise InvalidSpec(f"affine: {n} does not divide {q - 1}")
    zeta = F.power(F.primitive, (q - 1) // n)
    gens = [_perm([int(F.add[x, p ** i]) for x in range(q)]) for i in range(k)]
    if n > 1:
        gens.append(_perm([int(F.mul[zeta, x]) for x in range(q)]))
    g = PermGroup(gens, q)
    assert g.order() == q * n
    return g


def _projective(q: int, maps) -> PermGroup:
    return PermGroup([_perm(m) for m in maps], q + 1)


def _line_maps(F: GF):
    q = F.q
    inf = q

    def translate():
        return [int(F.add[x, 1]) for x in range(q)] + [inf]

    def scale(lam):
        return [int(F.mul[lam, x]) for x in range(q)] + [inf]

    def invert(sign):
        # x -> sign / x
        img = [inf] + [int(F.mul[sign, F.inv[x]]) for x in range(1, q)] + [0]
        return img

    def frobenius():
        return [F.power(x, F.p) if x else 0 for x in range(q)] + [inf]

    return translate, scale, invert, frobenius


def psl2(q: int) -> PermGroup:
    F = galois_field(q)
    translate, scale, invert, _ = _line_maps(F)
    lam = F.mul[F.primitive, F.primitive] if q % 2 else F.primitive
    maps = [translate(), invert(int(F.neg[1]))]
    if lam != 1:
        maps.append(scale(int(lam)))
    g = _projective(q, maps)
    assert g.order() == q * (q * q - 1) // math.gcd(2, q - 1)
    return g


def pgl2(q: int) -> PermGroup:
    F = galois_field(q)
    translate, scale, invert, _ = _line_maps(F)
    maps = [translate(), invert(1)]
    if q > 2:
        maps.append(scale(F.primitive))
    g = _projective(q, maps)
    assert g.order() == q * (q * q - 1)
    return g


def pgammal2(q: int) -> PermGroup:
    F = galois_field(q)
    translate, scale, invert, frobenius = _line_maps(F)
    maps = [translate(), invert(1), frobenius()]
    if q > 2:
        maps.append(scale(F.primitive))
    g = _projective(q, maps)
    assert g.order() == q * (q * q - 1) * F.e
    return g


def sharply_2transitive(p: int) -> PermGroup:
    """``C_p : C_{p-1}``, the full affine group of a prime field."""
    return affine(p, 1, p - 1)


def order_513_group() -> PermGroup:
    """``(C_19 : C_9) x C_3`` on 19 + 3 points.

    ``x: t -> t+1`` and ``y: t -> 4t`` on the integers mod 19 (4 has
    multiplicative order 9), and ``z`` a 3-cycle on three further points.
    """
    deg = 22
    x = [(t + 1) % 19 for t in range(19)] + [19, 20, 21]
    y = [(4 * t) % 19 for t in range(19)] + [19, 20, 21]
    g = PermGroup([_perm(x), _perm(y), Permutation.from_cycles([(19, 20, 21)], deg)])
    assert g.order() == 19 * 9 * 3
    return g


def order_513_elements() -> dict[str, Permutation]:
    g = order_513_group()
    x, y, z = g.generators
    return {"x": x, "y": y, "z": z}


def m11() -> PermGroup:
    a = Permutation.from_cycles([tuple(range(11))], 11)
    b = parse_permutation("(3,7,11,8)(4,10,5,6)", 11)
    g = PermGroup([a, b])
    assert g.order() == 7920
    return g


def wreath_s5_s2() -> PermGroup:
    """``S_5 wr S_2`` in its imprimitive action on 10 points."""
    s = lambda cycles: Permutation.from_cycles(cycles, 10)
    return PermGroup([s([(0, 1, 2, 3, 4)]), s([(0, 1)]),
                      s([(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)])])


def wreath_overgroups_of_a5a5(up_to_conjugacy: bool = True) -> list[PermGroup]:
    """Subgroups of ``S_5 wr S_2`` of index 2 or 4 containing ``A_5 x A_5``.

    These correspond to the subgroups of order 4 and 2 of the quotient
    (a dihedral group of order 8), found by closing subsets of its elements.
    ``A_5 x A_5`` is normal in the wreath product, so conjugacy is decided by
    conjugating with lifts of the quotient.
    """
    s = lambda cycles: Permutation.from_cycles(cycles, 10)
    base = [s([(0, 1, 2)]), s([(0, 1, 2, 3, 4)]), s([(5, 6, 7)]), s([(5, 6, 7, 8, 9)])]
    a, b = s([(0, 1)]), s([(5, 6)])
    sw = s([(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)])
    ident = s([])
    quotient = [ident, a, b, a * b, sw, sw * a, sw * b, sw * a * b]
    found: dict[frozenset, list[Permutation]] = {}
    for mask in range(1, 256):
        extra = [quotient[i] for i in range(8) if mask >> i & 1]
        g = PermGroup(base + extra)
        if g.order() not in (7200, 14400):
            continue
        key = frozenset(i for i, qe in enumerate(quotient) if qe in g)
        found.setdefault(key, base + extra)
    groups = [PermGroup(gens) for gens in found.values()]
    if not up_to_conjugacy:
        return groups
    kept: list[PermGroup] = []
    for g in groups:
        if not any(h.order() == g.order() and
                   any(all(x.inverse() * y * x in h for y in g.generators) for x in quotient)
                   for h in kept):
            kept.append(g)
    return kept


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\(|\)|,|\d+)")


def parse_generators(text: str, degree: int) -> list[Permutation]:
    """Parse generators, one per line (or separated by ``;``), in 1-based
    cycle notation such as ``(1,2,3)(4,5)``.  Blank lines and ``#`` comments
    are skipped; an empty string yields no generators."""
    gens = []
    for lineno, raw in enumerate(text.splitlines() or [""], start=1):
        line = raw.split("#", 1)[0]
        for chunk_start, chunk in _split_keep_offset(line, ";"):
            if chunk.strip():
                gens.append(_parse_cycles(chunk, degree, lineno, chunk_start))
    return gens


def parse_permutation(text: str, degree: int) -> Permutation:
    return _parse_cycles(text, degree, 1, 0)


def _split_keep_offset(line: str, sep: str):
    start = 0
    for part in line.split(sep):
        yield start, part
        start += len(part) + 1


def _parse_cycles(text: str, degree: int, lineno: int, offset: int) -> Permutation:
    pos = 0
    cycles = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] != "(":
            raise ParseError(f"expected '(' but found {text[pos]!r}", lineno, offset + pos + 1)
        open_at = pos
        pos += 1
        cycle = []
        comma_at = pos
        expect_point = True
        while True:
            while pos < n and text[pos].isspace():
                pos += 1
            if pos >= n:
                raise ParseError("unclosed cycle", lineno, offset + open_at + 1)
            ch = text[pos]
            if ch == ")":
                if cycle and expect_point:
                    raise ParseError("dangling ','", lineno, offset + comma_at + 1)
                pos += 1
                break
            if expect_point:
                m = re.match(r"\d+", text[pos:])
                if not m:
                    raise ParseError(f"expected a point but found {ch!r}", lineno, offset + pos + 1)
                point = int(m.group())
                if not 1 <= point <= degree:
                    raise PointOutOfRange(f"point {point} outside 1..{degree} (line {lineno})")
                cycle.append(point - 1)
                pos += len(m.group())
                expect_point = False
            elif ch == ",":
                comma_at = pos
                pos += 1
                expect_point = True
            else:
                raise ParseError(f"expected ',' or ')' but found {ch!r}", lineno, offset + pos + 1)
        if len(cycle) > 1:
            cycles.append(tuple(cycle))
    # cycles compose left to right
    result = Permutation.identity(degree)
    for cyc in cycles:
        if len(set(cyc)) != len(cyc):
            raise ParseError("point repeated inside a cycle", lineno, offset + 1)
        result = result * Permutation.from_cycles([cyc], degree)
    return result


def read_gens_file(path: str | Path) -> tuple[int, list[Permutation]]:
    """Read a ``.gens`` file: a ``deg N`` header line, then generators."""
    text = Path(path).read_text()
    lines = text.splitlines()
    for i, line in enumerate(lines):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        m = re.fullmatch(r"deg\s+(\d+)", body)
        if not m:
            raise ParseError("expected header 'deg N'", i + 1, 1)
        degree = int(m.group(1))
        rest = "\n".join([""] * (i + 1) + lines[i + 1:])
        return degree, parse_generators(rest, degree)
    raise ParseError("missing 'deg N' header", 1, 1)


# -- specs -------------------------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: tuple = ()
    text: str = field(default="", compare=False)

    def __str__(self):
        return self.text or f"{self.family}:{','.join(map(str, self.params))}"


_FAMILIES = {
    "sn": "symmetric", "an": "alternating", "cn": "cyclic", "elemab": "elementary",
    "affine": "affine", "sharply2t": "sharply2t", "paperex2": "order513",
    "psl2": "psl2", "pgl2": "pgl2", "pgammal2": "pgammal2", "m11": "m11",
    "wrs5s2": "wreath_s5_s2", "file": "file", "custom": "custom",
}

_ARITY = {"symmetric": 1, "alternating": 1, "cyclic": 1, "elementary": 2, "affine": 3,
          "sharply2t": 1, "order513": 0, "psl2": 1, "pgl2": 1, "pgammal2": 1, "m11": 0,
          "wreath_s5_s2": 1}


def parse_spec(text: str) -> GroupSpec:
    """Parse ``Sn:4``, ``PSL2:7``, ``Affine:5,1,4``, ``file:path.gens`` ..."""
    head, _, rest = text.partition(":")
    family = _FAMILIES.get(head.strip().lower())
    if family is None:
        raise InvalidSpec(f"unknown group family {head!r}")
    if family in ("file", "custom"):
        if not rest:
            raise InvalidSpec(f"{head} needs an argument")
        return GroupSpec(family, (rest,), text)
    try:
        params = tuple(int(x) for x in rest.split(",")) if rest.strip() else ()
    except ValueError:
        raise InvalidSpec(f"bad parameters in {text!r}") from None
    if len(params) != _ARITY[family]:
        raise InvalidSpec(f"{head} expects {_ARITY[family]} parameter(s), got {len(params)}")
    return GroupSpec(family, params, text)


def build(spec: GroupSpec | str) -> PermGroup:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    f, a = spec.family, spec.params
    if f == "symmetric":
        return symmetric(*a)
    if f == "alternating":
        return alternating(*a)
    if f == "cyclic":
        return cyclic(*a)
    if f == "elementary":
        return elementary_abelian(*a)
    if f == "affine":
        return affine(*a)
    if f == "sharply2t":
        if prime_power(a[0]) != (a[0], 1):
            raise InvalidSpec("Sharply2t needs a prime")
        return sharply_2transitive(a[0])
    if f == "order513":
        return order_513_group()
    if f in ("psl2", "pgl2", "pgammal2"):
        if prime_power(a[0]) is None:
            raise InvalidSpec(f"{a[0]} is not a prime power")
        return {"psl2": psl2, "pgl2": pgl2, "pgammal2": pgammal2}[f](a[0])
    if f == "m11":
        return m11()
    if f == "wreath_s5_s2":
        if a[0] not in (1, 2):
            raise InvalidSpec("WrS5S2 variant must be 1 or 2")
        from .wreath import nonzero_spread_wreath_subgroups

        return nonzero_spread_wreath_subgroups()[a[0] - 1]
    if f == "file":
        degree, gens = read_gens_file(a[0])
        return PermGroup(gens, degree)
    if f == "custom":
        degree_text, _, gens_text = a[0].partition("|")
        return PermGroup(parse_generators(gens_text.replace(";", "\n"), int(degree_text)),
                         int(degree_text))
    raise InvalidSpec(f"unhandled family {f}")
