"""The standard ring corpus and probe module families.

Corpus rings: Z/2, Z/3, Z/4, Z/6, and F2[x,y]/(x,y)^2. Two extra rings
back negative tests: the upper-triangular 2x2 matrices over F2 (not
commutative) and F2 x F2 (source of a ring map onto a non-central
idempotent in the matrix ring).
"""
from __future__ import annotations

import functools

from .modules import (
    FiniteModule,
    enumerate_submodules,
    free_module,
    quotient_module,
    ring_module,
    submodule_module,
    zero_module,
)
from .rings import FiniteRing, make_ring, make_zmod


@functools.lru_cache(maxsize=None)
def f2xy_ring() -> FiniteRing:
    """F2[x,y]/(x,y)^2: index a + 2b + 4c encodes a + b*x + c*y."""
    def bits(i):
        return i & 1, (i >> 1) & 1, (i >> 2) & 1
    add = [[i ^ j for j in range(8)] for i in range(8)]
    mul = []
    for i in range(8):
        a1, b1, c1 = bits(i)
        row = []
        for j in range(8):
            a2, b2, c2 = bits(j)
            row.append((a1 & a2) | ((a1 & b2 ^ b1 & a2) << 1)
                       | ((a1 & c2 ^ c1 & a2) << 2))
        mul.append(row)
    return make_ring(8, add, mul, list(range(8)), name="F2[x,y]/(x,y)^2")


@functools.lru_cache(maxsize=None)
def upper_triangular_f2_ring() -> FiniteRing:
    """Upper-triangular 2x2 matrices over F2; the one non-commutative ring here.

    Natural encoding a + 2b + 4c for [[a, b], [0, c]] puts the identity at
    index 5, so indices 1 and 5 are swapped to keep the unit at index 1.
    """
    def swap(i):
        return {1: 5, 5: 1}.get(i, i)
    def bits(i):
        return i & 1, (i >> 1) & 1, (i >> 2) & 1
    add = [[swap(swap(i) ^ swap(j)) for j in range(8)] for i in range(8)]
    mul = []
    for i in range(8):
        a1, b1, c1 = bits(swap(i))
        row = []
        for j in range(8):
            a2, b2, c2 = bits(swap(j))
            row.append(swap((a1 & a2) | ((a1 & b2 ^ b1 & c2) << 1)
                            | ((c1 & c2) << 2)))
        mul.append(row)
    return make_ring(8, add, mul, list(range(8)), name="UT2(F2)")


_PAIRS = ((0, 0), (1, 1), (1, 0), (0, 1))


@functools.lru_cache(maxsize=None)
def f2_times_f2_ring() -> FiniteRing:
    """F2 x F2 with element order (0,0), (1,1), (1,0), (0,1)."""
    idx = {p: i for i, p in enumerate(_PAIRS)}
    add = [[idx[(a ^ c, b ^ d)] for (c, d) in _PAIRS] for (a, b) in _PAIRS]
    mul = [[idx[(a & c, b & d)] for (c, d) in _PAIRS] for (a, b) in _PAIRS]
    return make_ring(4, add, mul, [0, 1, 2, 3], name="F2xF2")


def f2_times_f2_pair(i: int) -> tuple[int, int]:
    return _PAIRS[i]


@functools.lru_cache(maxsize=None)
def corpus_rings() -> tuple[FiniteRing, ...]:
    return (make_zmod(2), make_zmod(3), make_zmod(4), make_zmod(6), f2xy_ring())


_RING_SPECS = {
    "f2xy": f2xy_ring,
    "ut2f2": upper_triangular_f2_ring,
    "f2xf2": f2_times_f2_ring,
}


def ring_by_spec(spec: str) -> FiniteRing:
    """Resolve a ring name: z<n> for Z/n, f2xy, ut2f2, or f2xf2."""
    key = spec.strip().lower()
    if key in _RING_SPECS:
        return _RING_SPECS[key]()
    if key.startswith("z") and key[1:].isdigit() and int(key[1:]) >= 1:
        return make_zmod(int(key[1:]))
    raise ValueError(f"unknown ring spec {spec!r}")


def probe_modules(ring: FiniteRing, max_size: int | None = None,
                  include_free_square: bool = True) -> tuple[FiniteModule, ...]:
    """Deterministic probe family: zero, the ring, every proper submodule
    and quotient of the ring, and the rank-2 free module."""
    R = ring_module(ring)
    probes = [zero_module(ring), R]
    for s in enumerate_submodules(R):
        if 1 < s.size < R.size:
            sub, _ = submodule_module(s, name=f"{ring.name}|sub{s.members()}")
            quot, _ = quotient_module(R, s, name=f"{ring.name}/sub{s.members()}")
            probes.extend((sub, quot))
    if include_free_square:
        probes.append(free_module(ring, 2))
    if max_size is not None:
        probes = [m for m in probes if m.size <= max_size]
    return tuple(probes)


def radical_quotient(ring: FiniteRing) -> FiniteModule:
    """R/rad for the F2[x,y] corpus ring: the separated, non-reflexive witness."""
    assert ring == f2xy_ring()
    R = ring_module(ring)
    rad = next(s for s in enumerate_submodules(R) if s.size == 4)
    quot, _ = quotient_module(R, rad, name="R/rad")
    return quot
