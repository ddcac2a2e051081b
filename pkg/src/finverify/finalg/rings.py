"""Finite unital rings as dense index tables.

Elements are 0..size-1 with 0 the additive and 1 the multiplicative unit
(when size > 1). Multiplication need not be commutative; the flag is
computed at validation time so non-commutative rings can serve as negative
inputs elsewhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import TableError


@dataclass(frozen=True)
class FiniteRing:
    size: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    commutative: bool
    name: str = field(default="", compare=False)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 if self.size > 1 else 0

    def elements(self) -> range:
        return range(self.size)

    def plus(self, a: int, b: int) -> int:
        return self.add[a][b]

    def times(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def minus(self, a: int) -> int:
        return self.neg[a]

    def __repr__(self) -> str:
        return f"FiniteRing({self.name or self.size})"


def _as_rows(table, size):
    rows = tuple(tuple(row) for row in table)
    if len(rows) != size or any(len(r) != size for r in rows):
        raise TableError(f"table must be {size}x{size}")
    if any(v < 0 or v >= size for row in rows for v in row):
        raise TableError("table entry out of range")
    return rows


def make_ring(size, add, mul, neg, name="") -> FiniteRing:
    """Build and exhaustively validate a finite unital ring."""
    if size < 1:
        raise TableError("ring must be nonempty")
    add = _as_rows(add, size)
    mul = _as_rows(mul, size)
    neg = tuple(neg)
    if len(neg) != size or any(v < 0 or v >= size for v in neg):
        raise TableError("negation row malformed")
    one = 1 if size > 1 else 0
    for a in range(size):
        if add[a][0] != a:
            raise TableError("0 is not an additive unit", witness=(a,))
        if add[a][neg[a]] != 0:
            raise TableError("negation is not an additive inverse", witness=(a,))
        if mul[a][one] != a or mul[one][a] != a:
            raise TableError("1 is not a multiplicative unit", witness=(a,))
        for b in range(size):
            if add[a][b] != add[b][a]:
                raise TableError("addition not commutative", witness=(a, b))
            for c in range(size):
                if add[add[a][b]][c] != add[a][add[b][c]]:
                    raise TableError("addition not associative", witness=(a, b, c))
                if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                    raise TableError("multiplication not associative", witness=(a, b, c))
                if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                    raise TableError("left distributivity fails", witness=(a, b, c))
                if mul[add[a][b]][c] != add[mul[a][c]][mul[b][c]]:
                    raise TableError("right distributivity fails", witness=(a, b, c))
    commutative = all(mul[a][b] == mul[b][a]
                      for a in range(size) for b in range(size))
    return FiniteRing(size=size, add=add, mul=mul, neg=neg,
                      commutative=commutative, name=name or f"ring{size}")


def noncommutativity_witness(ring: FiniteRing):
    """First pair (a, b) with a*b != b*a, or None."""
    for a in range(ring.size):
        for b in range(ring.size):
            if ring.mul[a][b] != ring.mul[b][a]:
                return (a, b)
    return None


def make_zmod(n: int) -> FiniteRing:
    """The ring of integers mod n."""
    add = [[(a + b) % n for b in range(n)] for a in range(n)]
    mul = [[(a * b) % n for b in range(n)] for a in range(n)]
    neg = [(-a) % n for a in range(n)]
    return make_ring(n, add, mul, neg, name=f"zmod{n}")


def make_table_ring(size, add, mul, neg, name="") -> FiniteRing:
    """Ring from explicit tables; commutativity is detected, not assumed."""
    return make_ring(size, add, mul, neg, name=name)
