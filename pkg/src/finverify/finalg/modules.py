"""Finite modules over finite rings, linear maps, submodules, quotients.

Module carriers are 0..size-1 with 0 the zero element. The scalar action is
stored as act[r][x]. Left modules are permitted over non-commutative rings;
constructions that need commutativity assert it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import BudgetError, TableError, DEFAULT_BUDGET, guard_budget
from .rings import FiniteRing


@dataclass(frozen=True)
class FiniteModule:
    ring: FiniteRing
    size: int
    add: tuple[tuple[int, ...], ...]
    act: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    name: str = field(default="", compare=False)
    # set by free_module; lets hom enumeration skip the per-candidate
    # verification pass that relation-laden domains need
    free_rank: int | None = field(default=None, compare=False)

    @property
    def zero(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.size)

    def plus(self, x: int, y: int) -> int:
        return self.add[x][y]

    def scale(self, r: int, x: int) -> int:
        return self.act[r][x]

    def minus(self, x: int) -> int:
        return self.neg[x]

    def __repr__(self) -> str:
        return f"FiniteModule({self.name or self.size} over {self.ring.name})"


def make_module(ring, size, add, act, neg, name="", free_rank=None) -> FiniteModule:
    """Build and exhaustively validate a finite module."""
    add = tuple(tuple(row) for row in add)
    act = tuple(tuple(row) for row in act)
    neg = tuple(neg)
    if len(add) != size or any(len(r) != size for r in add):
        raise TableError("addition table malformed")
    if len(act) != ring.size or any(len(r) != size for r in act):
        raise TableError("action table malformed")
    if len(neg) != size:
        raise TableError("negation row malformed")
    m = FiniteModule(ring=ring, size=size, add=add, act=act, neg=neg,
                     name=name, free_rank=free_rank)
    validate_module(m)
    return m


def validate_module(m: FiniteModule) -> None:
    R = m.ring
    for x in range(m.size):
        if m.add[x][0] != x:
            raise TableError("0 is not an additive unit", witness=(x,))
        if m.add[x][m.neg[x]] != 0:
            raise TableError("negation fails", witness=(x,))
        if m.act[R.one][x] != x:
            raise TableError("1 does not act as identity", witness=(x,))
        if m.act[0][x] != 0:
            raise TableError("0 does not act as zero", witness=(x,))
        for y in range(m.size):
            if m.add[x][y] != m.add[y][x]:
                raise TableError("addition not commutative", witness=(x, y))
            for z in range(m.size):
                if m.add[m.add[x][y]][z] != m.add[x][m.add[y][z]]:
                    raise TableError("addition not associative", witness=(x, y, z))
    for r in range(R.size):
        for x in range(m.size):
            for s in range(R.size):
                if m.act[r][m.act[s][x]] != m.act[R.mul[r][s]][x]:
                    raise TableError("action not multiplicative", witness=(r, s, x))
                if m.act[R.add[r][s]][x] != m.add[m.act[r][x]][m.act[s][x]]:
                    raise TableError("action not additive in scalars", witness=(r, s, x))
            for y in range(m.size):
                if m.act[r][m.add[x][y]] != m.add[m.act[r][x]][m.act[r][y]]:
                    raise TableError("action not additive in vectors", witness=(r, x, y))


def ring_module(ring: FiniteRing) -> FiniteModule:
    """The ring as a module over itself."""
    return FiniteModule(ring=ring, size=ring.size, add=ring.add, act=ring.mul,
                        neg=ring.neg, name=ring.name, free_rank=1)


def zero_module(ring: FiniteRing) -> FiniteModule:
    return FiniteModule(ring=ring, size=1, add=((0,),),
                        act=tuple((0,) for _ in range(ring.size)),
                        neg=(0,), name="0", free_rank=0)


# ---------------------------------------------------------------------------
# free modules: carrier = tuples in lexicographic order, leftmost significant

def free_index(ring_size: int, rank: int, tup) -> int:
    idx = 0
    for v in tup:
        idx = idx * ring_size + v
    return idx


def free_tuple(ring_size: int, rank: int, idx: int) -> tuple[int, ...]:
    out = []
    for _ in range(rank):
        idx, v = divmod(idx, ring_size)
        out.append(v)
    return tuple(reversed(out))


def free_basis_index(ring_size: int, rank: int, i: int) -> int:
    # index of the i-th standard basis tuple (0,..,1,..,0)
    return ring_size ** (rank - 1 - i)


def free_module(ring: FiniteRing, rank: int, budget: int | None = DEFAULT_BUDGET) -> FiniteModule:
    size = ring.size ** rank
    guard_budget(size, budget, f"free module of rank {rank} over {ring.name}")
    tuples = list(itertools.product(range(ring.size), repeat=rank))
    idx = {t: i for i, t in enumerate(tuples)}
    add = tuple(tuple(idx[tuple(ring.add[a][b] for a, b in zip(t, u))]
                      for u in tuples) for t in tuples)
    act = tuple(tuple(idx[tuple(ring.mul[r][a] for a in t)] for t in tuples)
                for r in range(ring.size))
    neg = tuple(idx[tuple(ring.neg[a] for a in t)] for t in tuples)
    return FiniteModule(ring=ring, size=size, add=add, act=act, neg=neg,
                        name=f"{ring.name}^{rank}", free_rank=rank)


# ---------------------------------------------------------------------------
# linear maps

@dataclass(frozen=True)
class LinearMap:
    dom: FiniteModule
    cod: FiniteModule
    table: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.table[x]

    def then(self, g: "LinearMap") -> "LinearMap":
        # diagrammatic order: (f.then(g))(x) = g(f(x))
        assert self.cod == g.dom, "composition type mismatch"
        return LinearMap(self.dom, g.cod, tuple(g.table[v] for v in self.table))

    def is_injective(self) -> bool:
        return len(set(self.table)) == self.dom.size

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        return f"LinearMap({self.dom.name}->{self.cod.name})"


def linear_map(dom: FiniteModule, cod: FiniteModule, table) -> LinearMap:
    """Build a linear map, verifying additivity and equivariance."""
    table = tuple(table)
    if len(table) != dom.size or any(v < 0 or v >= cod.size for v in table):
        raise TableError("map table malformed")
    f = LinearMap(dom, cod, table)
    w = linearity_failure(f)
    if w is not None:
        raise TableError("map is not linear", witness=w)
    return f


def linearity_failure(f: LinearMap):
    """First witness that f is not linear, or None."""
    dom, cod, t = f.dom, f.cod, f.table
    if t[0] != 0:
        return ("zero", 0)
    for x in range(dom.size):
        for y in range(dom.size):
            if t[dom.add[x][y]] != cod.add[t[x]][t[y]]:
                return ("add", x, y)
    for r in range(dom.ring.size):
        for x in range(dom.size):
            if t[dom.act[r][x]] != cod.act[r][t[x]]:
                return ("act", r, x)
    return None


def identity_map(m: FiniteModule) -> LinearMap:
    return LinearMap(m, m, tuple(range(m.size)))


def zero_map(dom: FiniteModule, cod: FiniteModule) -> LinearMap:
    return LinearMap(dom, cod, tuple(0 for _ in range(dom.size)))


# ---------------------------------------------------------------------------
# submodules

@dataclass(frozen=True)
class SubmoduleHandle:
    ambient: FiniteModule
    mask: tuple[bool, ...]

    @property
    def size(self) -> int:
        return sum(self.mask)

    def members(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.mask) if b)

    def contains(self, x: int) -> bool:
        return self.mask[x]

    def __le__(self, other: "SubmoduleHandle") -> bool:
        return all((not a) or b for a, b in zip(self.mask, other.mask))


def submodule_span(m: FiniteModule, seeds) -> SubmoduleHandle:
    """Smallest submodule containing the seed elements."""
    inside = [False] * m.size
    inside[0] = True
    frontier = [0]
    for s in seeds:
        if not inside[s]:
            inside[s] = True
            frontier.append(s)
    while frontier:
        x = frontier.pop()
        candidates = [m.neg[x]]
        candidates.extend(m.act[r][x] for r in range(m.ring.size))
        candidates.extend(m.add[x][y] for y in range(m.size) if inside[y])
        for v in candidates:
            if not inside[v]:
                inside[v] = True
                frontier.append(v)
    return SubmoduleHandle(ambient=m, mask=tuple(inside))


def full_submodule(m: FiniteModule) -> SubmoduleHandle:
    return SubmoduleHandle(ambient=m, mask=tuple(True for _ in range(m.size)))


def trivial_submodule(m: FiniteModule) -> SubmoduleHandle:
    return SubmoduleHandle(ambient=m, mask=tuple(i == 0 for i in range(m.size)))


def intersect_submodules(a: SubmoduleHandle, b: SubmoduleHandle) -> SubmoduleHandle:
    assert a.ambient == b.ambient
    return SubmoduleHandle(ambient=a.ambient,
                           mask=tuple(x and y for x, y in zip(a.mask, b.mask)))


LATTICE_BUDGET = 64


def enumerate_submodules(m: FiniteModule, budget: int | None = LATTICE_BUDGET):
    """All submodules, deterministically ordered by (size, members)."""
    guard_budget(m.size, budget, "submodule enumeration carrier")
    seen = {trivial_submodule(m).mask}
    frontier = [trivial_submodule(m)]
    out = [trivial_submodule(m)]
    while frontier:
        s = frontier.pop()
        members = s.members()
        for x in range(m.size):
            if s.mask[x]:
                continue
            bigger = submodule_span(m, members + (x,))
            if bigger.mask not in seen:
                seen.add(bigger.mask)
                frontier.append(bigger)
                out.append(bigger)
    out.sort(key=lambda s: (s.size, s.members()))
    return tuple(out)


def submodule_module(s: SubmoduleHandle, name="") -> tuple[FiniteModule, LinearMap]:
    """Re-index a submodule as a module of its own, with the inclusion map."""
    amb = s.ambient
    members = s.members()
    pos = {v: i for i, v in enumerate(members)}
    add = tuple(tuple(pos[amb.add[x][y]] for y in members) for x in members)
    act = tuple(tuple(pos[amb.act[r][x]] for x in members)
                for r in range(amb.ring.size))
    neg = tuple(pos[amb.neg[x]] for x in members)
    sub = FiniteModule(ring=amb.ring, size=len(members), add=add, act=act,
                       neg=neg, name=name or f"sub{len(members)}of{amb.name}")
    incl = LinearMap(sub, amb, members)
    return sub, incl


def quotient_module(m: FiniteModule, s: SubmoduleHandle, name=""):
    """Quotient by a submodule; class representative = smallest member index.

    Returns (quotient module, projection map).
    """
    assert s.ambient == m
    members = s.members()
    rep = [-1] * m.size
    for x in range(m.size):
        if rep[x] != -1:
            continue
        coset = sorted(m.add[x][v] for v in members)
        r = coset[0]
        for y in coset:
            rep[y] = r
    reps = sorted(set(rep))
    pos = {v: i for i, v in enumerate(reps)}
    add = tuple(tuple(pos[rep[m.add[x][y]]] for y in reps) for x in reps)
    act = tuple(tuple(pos[rep[m.act[r][x]]] for x in reps)
                for r in range(m.ring.size))
    neg = tuple(pos[rep[m.neg[x]]] for x in reps)
    q = FiniteModule(ring=m.ring, size=len(reps), add=add, act=act, neg=neg,
                     name=name or f"{m.name}/{s.size}")
    proj = LinearMap(m, q, tuple(pos[rep[x]] for x in range(m.size)))
    return q, proj


def product_module(a: FiniteModule, b: FiniteModule, budget=DEFAULT_BUDGET):
    """Direct product; carrier index of (x, y) is x*|b| + y.

    Returns (module, projection1, projection2).
    """
    assert a.ring == b.ring
    size = a.size * b.size
    guard_budget(size, budget, "product module")
    def pair(x, y):
        return x * b.size + y
    add = tuple(tuple(pair(a.add[x][u], b.add[y][v])
                      for u in range(a.size) for v in range(b.size))
                for x in range(a.size) for y in range(b.size))
    act = tuple(tuple(pair(a.act[r][x], b.act[r][y])
                      for x in range(a.size) for y in range(b.size))
                for r in range(a.ring.size))
    neg = tuple(pair(a.neg[x], b.neg[y])
                for x in range(a.size) for y in range(b.size))
    p = FiniteModule(ring=a.ring, size=size, add=add, act=act, neg=neg,
                     name=f"{a.name}x{b.name}")
    p1 = LinearMap(p, a, tuple(i // b.size for i in range(size)))
    p2 = LinearMap(p, b, tuple(i % b.size for i in range(size)))
    return p, p1, p2


# ---------------------------------------------------------------------------
# all module structures on a small carrier (canonical: zero element is 0)

def _abelian_group_tables(size: int):
    """All abelian group tables on 0..size-1 with identity 0 (size <= 6)."""
    assert size <= 6, "group table enumeration is meant for tiny carriers"
    # backtracking over rows; commutative Latin square with identity,
    # associativity checked on completion
    rows = [[-1] * size for _ in range(size)]
    for i in range(size):
        rows[0][i] = i
        rows[i][0] = i
    out = []

    def full_check():
        for a in range(size):
            if sorted(rows[a]) != list(range(size)):
                return False
            if 0 not in rows[a]:
                return False
        for a in range(size):
            for b in range(size):
                for c in range(size):
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                        return False
        return True

    cells = [(a, b) for a in range(1, size) for b in range(a, size)]

    def rec(k):
        if k == len(cells):
            if full_check():
                out.append(tuple(tuple(r) for r in rows))
            return
        a, b = cells[k]
        used_row = {rows[a][j] for j in range(size) if rows[a][j] != -1}
        used_col = {rows[i][b] for i in range(size) if rows[i][b] != -1}
        for v in range(size):
            if v in used_row or v in used_col:
                continue
            rows[a][b] = v
            rows[b][a] = v
            if a != b:
                # keep column constraint for the mirrored cell too
                if v in {rows[i][a] for i in range(size)
                         if i != b and rows[i][a] != -1}:
                    rows[a][b] = -1
                    rows[b][a] = -1
                    continue
            rec(k + 1)
            rows[a][b] = -1
            rows[b][a] = -1

    rec(0)
    return out


def _additive_endos(size, add):
    out = []
    for im in itertools.product(range(size), repeat=size):
        if im[0] != 0:
            continue
        if all(im[add[a][b]] == add[im[a]][im[b]]
               for a in range(size) for b in range(size)):
            out.append(im)
    return out


def enumerate_module_structures(ring: FiniteRing, size: int):
    """All module tables on 0..size-1 with zero 0, deterministically ordered.

    The scalar action is determined by additive generators of the ring, so
    the search assigns an additive endomorphism to each generator and then
    checks the full axioms.
    """
    results = []

    def additive_closure(seed):
        span = {0}
        frontier = list(seed)
        while frontier:
            v = frontier.pop()
            if v in span:
                continue
            span.add(v)
            frontier.extend(ring.add[u][v] for u in list(span))
        return span

    # additive generating set of (ring, +), 1 first then smallest missing
    gens = [ring.one]
    span = additive_closure(gens)
    for r in range(ring.size):
        if r not in span:
            gens.append(r)
            span = additive_closure(gens)
    # expression of each ring element as an iterated sum of generators:
    # walk additive closure remembering (previous element, generator) steps
    expr = {0: ()}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for g in gens:
            w = ring.add[v][g]
            if w not in expr:
                expr[w] = expr[v] + (g,)
                frontier.append(w)
    assert len(expr) == ring.size

    for add in _abelian_group_tables(size):
        endos = _additive_endos(size, add)
        ident = tuple(range(size))
        if ident not in endos:
            continue
        def eadd(e1, e2):
            return tuple(add[e1[i]][e2[i]] for i in range(size))
        def ecomp(e1, e2):
            return tuple(e1[e2[i]] for i in range(size))
        free_gens = [g for g in gens if g != ring.one]
        for assign in itertools.product(endos, repeat=len(free_gens)):
            gen_endo = {ring.one: ident}
            gen_endo.update(dict(zip(free_gens, assign)))
            # extend additively along the recorded expressions
            endo = {}
            ok = True
            for r in range(ring.size):
                e = tuple(0 for _ in range(size))
                for g in expr[r]:
                    e = eadd(e, gen_endo[g])
                endo[r] = e
            for r in range(ring.size):
                for s in range(ring.size):
                    if ecomp(endo[r], endo[s]) != endo[ring.mul[r][s]]:
                        ok = False
                        break
                    if eadd(endo[r], endo[s]) != endo[ring.add[r][s]]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            act = tuple(endo[r] for r in range(ring.size))
            neg = tuple(act[ring.neg[ring.one]][x] for x in range(size))
            try:
                results.append(make_module(ring, size, add, act, neg,
                                           name=f"struct{len(results)}"))
            except TableError:
                continue
    results.sort(key=lambda m: (m.add, m.act))
    return tuple(results)
