"""Hom sets, dual modules, double duals, tensor products.

Two independent routes produce the same hom sets: generator-image
enumeration (the fast path used everywhere) and direct table search with
backtracking (the oracle path). Tests compare the two routes; nothing in
production code derives one from the other.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import TableError, guard_budget
from .modules import (
    FiniteModule,
    LinearMap,
    free_basis_index,
    free_tuple,
    linearity_failure,
    quotient_module,
    ring_module,
    submodule_span,
)

# hom-set and table construction budget; module carriers stay much smaller
ENUM_BUDGET = 65536

_GEN_CACHE: dict = {}
_PLAN_CACHE: dict = {}
_HOM_CACHE: dict = {}


def generating_set(m: FiniteModule) -> tuple[int, ...]:
    """Greedy generating set: adjoin the smallest element not yet spanned.

    On a free module this picks the standard basis in reverse order.
    """
    got = _GEN_CACHE.get(m)
    if got is not None:
        return got
    if m.free_rank is not None:
        gens = tuple(free_basis_index(m.ring.size, m.free_rank, i)
                     for i in range(m.free_rank - 1, -1, -1))
    else:
        acc: list[int] = []
        span = submodule_span(m, acc)
        while span.size < m.size:
            acc.append(next(x for x in range(m.size) if not span.mask[x]))
            span = submodule_span(m, acc)
        gens = tuple(acc)
    _GEN_CACHE[m] = gens
    return gens


def _replay_plan(m: FiniteModule):
    """Operation list that reaches every element from the generators."""
    plan = _PLAN_CACHE.get(m)
    if plan is not None:
        return plan
    gens = generating_set(m)
    reached = {0}
    steps: list[tuple[int, str, int, int]] = []
    for i, g in enumerate(gens):
        if g not in reached:
            steps.append((g, "gen", i, -1))
            reached.add(g)
    while len(reached) < m.size:
        grew = False
        for x in sorted(reached):
            v = m.neg[x]
            if v not in reached:
                steps.append((v, "neg", x, -1))
                reached.add(v)
                grew = True
            for r in range(m.ring.size):
                v = m.act[r][x]
                if v not in reached:
                    steps.append((v, "act", r, x))
                    reached.add(v)
                    grew = True
        for x in sorted(reached):
            for y in sorted(reached):
                v = m.add[x][y]
                if v not in reached:
                    steps.append((v, "add", x, y))
                    reached.add(v)
                    grew = True
        assert grew, "generators do not span"
    plan = tuple(steps)
    _PLAN_CACHE[m] = plan
    return plan


def extend_generator_images(dom: FiniteModule, cod: FiniteModule, images):
    """Table of the unique linear extension candidate of generator images.

    For a free domain the result is always linear; otherwise the caller
    must verify (the images may be incompatible with the relations).
    """
    if dom.free_rank is not None:
        k = dom.free_rank
        rs = dom.ring.size
        table = []
        for x in range(dom.size):
            t = free_tuple(rs, k, x)
            acc = 0
            for i, c in enumerate(t):
                # generators are the reversed basis, so e_i is images[k-1-i]
                acc = cod.add[acc][cod.act[c][images[k - 1 - i]]]
            table.append(acc)
        return tuple(table)
    f = [-1] * dom.size
    f[0] = 0
    for elt, kind, a, b in _replay_plan(dom):
        if kind == "gen":
            f[elt] = images[a]
        elif kind == "neg":
            f[elt] = cod.neg[f[a]]
        elif kind == "act":
            f[elt] = cod.act[a][f[b]]
        else:
            f[elt] = cod.add[f[a]][f[b]]
    return tuple(f)


def free_extension(fx: FiniteModule, cod: FiniteModule, images) -> LinearMap:
    """Linear map out of a free module sending the i-th basis vector to images[i]."""
    assert fx.free_rank is not None and len(images) == fx.free_rank
    gen_images = tuple(images[fx.free_rank - 1 - j] for j in range(fx.free_rank))
    return LinearMap(fx, cod, extend_generator_images(fx, cod, gen_images))


def enumerate_homs(dom: FiniteModule, cod: FiniteModule, budget=ENUM_BUDGET):
    """All linear maps dom -> cod, ordered lexicographically by generator images."""
    assert dom.ring == cod.ring
    gens = generating_set(dom)
    guard_budget(cod.size ** len(gens), budget,
                 f"hom candidates {dom.name}->{cod.name}")
    out = []
    verify = dom.free_rank is None
    for images in itertools.product(range(cod.size), repeat=len(gens)):
        table = extend_generator_images(dom, cod, images)
        f = LinearMap(dom, cod, table)
        if verify and linearity_failure(f) is not None:
            continue
        out.append(f)
    return tuple(out)


def search_homs_by_backtracking(dom: FiniteModule, cod: FiniteModule):
    """All linear maps by direct search over value tables.

    Assigns f(1), f(2), ... in carrier order, pruning a partial table as
    soon as an addition, scalar, or negation constraint among assigned
    elements fails, and verifies full linearity at every leaf. Kept
    independent of the generator route on purpose.
    """
    assert dom.ring == cod.ring
    n, rs = dom.size, dom.ring.size
    scalar_hits = [[] for _ in range(n)]
    for r in range(rs):
        for y in range(n):
            scalar_hits[dom.act[r][y]].append((r, y))
    f = [-1] * n
    f[0] = 0
    found = []

    def consistent(w: int, c: int) -> bool:
        fw = f[w]
        f[w] = c
        try:
            for r, y in scalar_hits[w]:
                if y <= w and cod.act[r][f[y]] != c:
                    return False
            for r in range(rs):
                u = dom.act[r][w]
                if u <= w and cod.act[r][c] != f[u]:
                    return False
            for y in range(w + 1):
                z = dom.add[w][dom.neg[y]]
                if z <= w and cod.add[f[y]][f[z]] != c:
                    return False
                u = dom.add[w][y]
                if u <= w and cod.add[c][f[y]] != f[u]:
                    return False
        finally:
            f[w] = fw
        return True

    def rec(w: int):
        if w == n:
            g = LinearMap(dom, cod, tuple(f))
            if linearity_failure(g) is None:
                found.append(g)
            return
        for c in range(cod.size):
            if consistent(w, c):
                f[w] = c
                rec(w + 1)
                f[w] = -1

    rec(1)
    return tuple(found)


@dataclass(frozen=True, eq=False)
class HomModule:
    """Hom set with its pointwise module structure.

    maps[i] is the linear map whose index in the carrier is i; the zero
    map sits at index 0.
    """
    source: FiniteModule
    target: FiniteModule
    module: FiniteModule
    maps: tuple[LinearMap, ...]
    index_by_table: dict

    @property
    def size(self) -> int:
        return self.module.size

    def index_of(self, f) -> int:
        table = f.table if isinstance(f, LinearMap) else tuple(f)
        got = self.index_by_table.get(table)
        if got is None:
            raise TableError("map is not in the hom set", witness=table)
        return got

    def apply(self, i: int, x: int) -> int:
        return self.maps[i].table[x]


def hom_module(dom: FiniteModule, cod: FiniteModule, budget=ENUM_BUDGET,
               name="") -> HomModule:
    """Pointwise module structure on hom(dom, cod); ring must be commutative."""
    ring = dom.ring
    assert ring.commutative, "pointwise scalar action needs a commutative ring"
    key = (dom, cod)
    got = _HOM_CACHE.get(key)
    if got is not None:
        return got
    maps = enumerate_homs(dom, cod, budget=budget)
    index = {g.table: i for i, g in enumerate(maps)}
    n = len(maps)
    guard_budget(n * n, budget, "hom module addition table")
    xs = range(dom.size)
    add = tuple(tuple(index[tuple(cod.add[g.table[x]][h.table[x]] for x in xs)]
                      for h in maps) for g in maps)
    act = tuple(tuple(index[tuple(cod.act[r][g.table[x]] for x in xs)]
                      for g in maps) for r in range(ring.size))
    neg = tuple(index[tuple(cod.neg[v] for v in g.table)] for g in maps)
    mod = FiniteModule(ring=ring, size=n, add=add, act=act, neg=neg,
                       name=name or f"hom({dom.name},{cod.name})")
    hm = HomModule(source=dom, target=cod, module=mod, maps=maps,
                   index_by_table=index)
    _HOM_CACHE[key] = hm
    return hm


def dual(m: FiniteModule, budget=ENUM_BUDGET) -> HomModule:
    return hom_module(m, ring_module(m.ring), budget=budget,
                      name=f"{m.name}*")


def double_dual(m: FiniteModule, budget=ENUM_BUDGET) -> HomModule:
    return dual(dual(m, budget=budget).module, budget=budget)


def dual_map(f: LinearMap, budget=ENUM_BUDGET) -> LinearMap:
    """Precomposition between duals: dual(B) -> dual(A) for f: A -> B."""
    db = dual(f.cod, budget=budget)
    da = dual(f.dom, budget=budget)
    table = tuple(da.index_of(tuple(phi.table[f.table[x]]
                                    for x in range(f.dom.size)))
                  for phi in db.maps)
    return LinearMap(db.module, da.module, table)


def dd_unit(m: FiniteModule, budget=ENUM_BUDGET) -> LinearMap:
    """Evaluation map into the double dual: x -> (phi -> phi(x))."""
    ds = dual(m, budget=budget)
    dds = dual(ds.module, budget=budget)
    table = tuple(dds.index_of(tuple(phi.table[x] for phi in ds.maps))
                  for x in range(m.size))
    return LinearMap(m, dds.module, table)


def is_separated(m: FiniteModule, budget=ENUM_BUDGET) -> bool:
    return dd_unit(m, budget=budget).is_injective()


def is_reflexive(m: FiniteModule, budget=ENUM_BUDGET) -> bool:
    return dd_unit(m, budget=budget).is_bijective()


# ---------------------------------------------------------------------------
# tensor products via a presentation of the left factor

def bilinearity_failure(a: FiniteModule, b: FiniteModule, cod: FiniteModule,
                        beta):
    """First witness that beta: a x b -> cod is not bilinear, or None."""
    for x in range(a.size):
        for y in range(b.size):
            for x2 in range(a.size):
                if beta(a.add[x][x2], y) != cod.add[beta(x, y)][beta(x2, y)]:
                    return ("left-add", x, x2, y)
            for y2 in range(b.size):
                if beta(x, b.add[y][y2]) != cod.add[beta(x, y)][beta(x, y2)]:
                    return ("right-add", x, y, y2)
            for r in range(a.ring.size):
                v = cod.act[r][beta(x, y)]
                if beta(a.act[r][x], y) != v:
                    return ("left-scalar", r, x, y)
                if beta(x, b.act[r][y]) != v:
                    return ("right-scalar", r, x, y)
    return None


@dataclass(frozen=True, eq=False)
class TensorProduct:
    """Tensor product built from a presentation of the left factor.

    With generators g_0..g_{k-1} of the left module and K the kernel of
    the induced surjection from the rank-k free module, the carrier is
    the k-th power of the right module modulo the span of the rows
    (c_0*y, ..., c_{k-1}*y) for c in K.
    """
    left: FiniteModule
    right: FiniteModule
    module: FiniteModule
    generators: tuple[int, ...]
    pure_table: tuple[tuple[int, ...], ...]
    section: tuple[int, ...]

    def pure(self, x: int, y: int) -> int:
        return self.pure_table[x][y]

    def factor_bilinear(self, beta, cod: FiniteModule) -> LinearMap:
        """The linear map the bilinear map beta induces on the tensor product."""
        w = bilinearity_failure(self.left, self.right, cod, beta)
        if w is not None:
            raise TableError("map is not bilinear", witness=w)
        k = len(self.generators)
        bs = self.right.size
        table = []
        for rep in self.section:
            row = free_tuple(bs, k, rep)
            acc = 0
            for j, vj in enumerate(row):
                acc = cod.add[acc][beta(self.generators[j], vj)]
            table.append(acc)
        h = LinearMap(self.module, cod, tuple(table))
        if linearity_failure(h) is not None:
            raise TableError("bilinear factorization produced a nonlinear map")
        for x in range(self.left.size):
            for y in range(self.right.size):
                if h.table[self.pure(x, y)] != beta(x, y):
                    raise TableError("factorization disagrees on a pure tensor",
                                     witness=(x, y))
        return h


def _power_module(m: FiniteModule, k: int, budget) -> FiniteModule:
    """k-th direct power with the leftmost coordinate most significant."""
    size = m.size ** k
    guard_budget(size, budget, f"power module {m.name}^{k}")
    tuples = list(itertools.product(range(m.size), repeat=k))
    idx = {t: i for i, t in enumerate(tuples)}
    add = tuple(tuple(idx[tuple(m.add[a][c] for a, c in zip(t, u))]
                      for u in tuples) for t in tuples)
    act = tuple(tuple(idx[tuple(m.act[r][a] for a in t)] for t in tuples)
                for r in range(m.ring.size))
    neg = tuple(idx[tuple(m.neg[a] for a in t)] for t in tuples)
    return FiniteModule(ring=m.ring, size=size, add=add, act=act, neg=neg,
                        name=f"{m.name}^{k}")


def tensor_product(a: FiniteModule, b: FiniteModule,
                   budget=ENUM_BUDGET) -> TensorProduct:
    assert a.ring == b.ring
    assert a.ring.commutative, "tensor products are for commutative rings"
    ring = a.ring
    gens = generating_set(a)
    k = len(gens)
    # surjection from the rank-k free module: e_j -> gens[j]
    fsize = ring.size ** k
    guard_budget(fsize, budget, "presentation of the left tensor factor")
    proj_to_a = []
    for c in range(fsize):
        t = free_tuple(ring.size, k, c)
        acc = 0
        for j, cj in enumerate(t):
            acc = a.add[acc][a.act[cj][gens[j]]]
        proj_to_a.append(acc)
    kernel = [c for c in range(fsize) if proj_to_a[c] == 0]
    power = _power_module(b, k, budget)
    bgens = generating_set(b)
    seeds = []
    for c in kernel:
        t = free_tuple(ring.size, k, c)
        for g in bgens:
            seeds.append(sum(b.act[cj][g] * b.size ** (k - 1 - j)
                             for j, cj in enumerate(t)))
    rel = submodule_span(power, seeds)
    mod, proj = quotient_module(power, rel, name=f"{a.name}(x){b.name}")
    section = [-1] * mod.size
    for v in range(power.size - 1, -1, -1):
        section[proj.table[v]] = v
    pre_a = [-1] * a.size
    for c in range(fsize - 1, -1, -1):
        pre_a[proj_to_a[c]] = c
    pure = []
    for x in range(a.size):
        t = free_tuple(ring.size, k, pre_a[x])
        row = tuple(proj.table[sum(b.act[cj][y] * b.size ** (k - 1 - j)
                                   for j, cj in enumerate(t))]
                    for y in range(b.size))
        pure.append(row)
    return TensorProduct(left=a, right=b, module=mod, generators=gens,
                         pure_table=tuple(pure), section=tuple(section))
