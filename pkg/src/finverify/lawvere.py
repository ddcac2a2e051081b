"""Truncated finitary algebraic theories over finite sets.

Matrix theories of a finite ring (hom sets = matrices, composition =
matrix product, evaluated lazily so large hom sets are never
materialized), dense table theories with a text format, normal algebras,
free algebras computed as a truncated colimit of operation/tuple pairs,
and theory-level commutativity with witnesses.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DEFAULT_BUDGET, TableError, guard_budget
from .finalg import FiniteModule, FiniteRing, make_module
from .finalg.homs import ENUM_BUDGET


class Op(NamedTuple):
    """A theory morphism dom -> cod; data is a cod x dom matrix (tuple of
    rows) for matrix theories and an abstract index for table theories."""
    dom: int
    cod: int
    data: object


@dataclass(frozen=True, eq=False)
class MatrixTheory:
    """Theory of modules over a ring: T(m, n) = n x m matrices.

    A morphism acts on a model M as a map M^m -> M^n. Hom sets are
    ordered row-major (first matrix entry most significant). arity_bound
    only truncates the law checks; matrices of any shape compose.
    """
    ring: FiniteRing
    arity_bound: int

    def hom_size(self, m: int, n: int) -> int:
        return self.ring.size ** (m * n)

    def op(self, m: int, n: int, index: int) -> Op:
        digits = []
        for _ in range(m * n):
            index, d = divmod(index, self.ring.size)
            digits.append(d)
        digits.reverse()
        rows = tuple(tuple(digits[i * m:(i + 1) * m]) for i in range(n))
        return Op(m, n, rows)

    def index_of(self, f: Op) -> int:
        acc = 0
        for row in f.data:
            for v in row:
                acc = acc * self.ring.size + v
        return acc

    def hom(self, m: int, n: int, budget=ENUM_BUDGET):
        guard_budget(self.hom_size(m, n), budget, f"hom set T({m},{n})")
        return (self.op(m, n, i) for i in range(self.hom_size(m, n)))

    def compose(self, f: Op, g: Op) -> Op:
        # f after g: g: l -> m, f: m -> n
        assert f.dom == g.cod, "composition arity mismatch"
        R = self.ring
        rows = tuple(
            tuple(_dot(R, frow, [g.data[j][k] for j in range(g.cod)])
                  for k in range(g.dom))
            for frow in f.data)
        return Op(g.dom, f.cod, rows)

    def identity(self, n: int) -> Op:
        return Op(n, n, tuple(tuple(self.ring.one if i == j else 0
                                    for j in range(n)) for i in range(n)))

    def projection(self, n: int, i: int) -> Op:
        return Op(n, 1, (tuple(self.ring.one if j == i else 0
                               for j in range(n)),))

    def tuple_op(self, dom: int, ops) -> Op:
        assert all(o.dom == dom and o.cod == 1 for o in ops)
        return Op(dom, len(ops), tuple(o.data[0] for o in ops))

    def components(self, f: Op):
        return tuple(Op(f.dom, 1, (row,)) for row in f.data)


def _dot(R: FiniteRing, row, col):
    acc = 0
    for a, b in zip(row, col):
        acc = R.add[acc][R.mul[a][b]]
    return acc


def theory_of_ring(ring: FiniteRing, arity_bound: int) -> MatrixTheory:
    if arity_bound < 1:
        raise ValueError("arity bound must be at least 1")
    return MatrixTheory(ring=ring, arity_bound=arity_bound)


def sigma_of_set_map(T, g, cod_size: int) -> Op:
    """The morphism cod_size -> len(g) acting as precomposition with the
    set map g: len(g) -> cod_size (row i of the matrix picks out g(i))."""
    return T.tuple_op(cod_size, [T.projection(cod_size, gi) for gi in g])


@dataclass(frozen=True, eq=False)
class TableTheory:
    """Dense theory given by explicit hom sets and composition tables.

    homs[(m, n)] is a size; compose_tables[(l, m, n)][f][g] is the index
    of (f: m->n) after (g: l->m) inside T(l, n).
    """
    arity_bound: int
    homs: dict
    compose_tables: dict
    identities: dict
    projections: dict

    def hom_size(self, m: int, n: int) -> int:
        return self.homs[(m, n)]

    def op(self, m: int, n: int, index: int) -> Op:
        if not 0 <= index < self.homs[(m, n)]:
            raise TableError(f"no element {index} in T({m},{n})")
        return Op(m, n, index)

    def index_of(self, f: Op) -> int:
        return f.data

    def hom(self, m: int, n: int, budget=ENUM_BUDGET):
        return (Op(m, n, i) for i in range(self.homs[(m, n)]))

    def compose(self, f: Op, g: Op) -> Op:
        assert f.dom == g.cod
        return Op(g.dom, f.cod,
                  self.compose_tables[(g.dom, f.dom, f.cod)][f.data][g.data])

    def identity(self, n: int) -> Op:
        return Op(n, n, self.identities[n])

    def projection(self, n: int, i: int) -> Op:
        return Op(n, 1, self.projections[(n, i)])

    def tuple_op(self, dom: int, ops) -> Op:
        # the unique morphism with the given projections; existence and
        # uniqueness are exactly the power-cone axiom
        assert all(o.dom == dom and o.cod == 1 for o in ops)
        n = len(ops)
        hits = [f for f in self.hom(dom, n)
                if all(self.compose(self.projection(n, i), f).data == ops[i].data
                       for i in range(n))]
        if len(hits) != 1:
            raise TableError("power cone fails to tuple", witness=(dom, n, len(hits)))
        return hits[0]

    def components(self, f: Op):
        return tuple(self.compose(self.projection(f.cod, i), f)
                     for i in range(f.cod))


def table_theory_from_matrix(T: MatrixTheory, budget=ENUM_BUDGET) -> TableTheory:
    """Materialize a matrix theory as dense tables up to its arity bound."""
    N = T.arity_bound
    homs = {}
    for m in range(N + 1):
        for n in range(N + 1):
            homs[(m, n)] = T.hom_size(m, n)
            guard_budget(homs[(m, n)], budget, f"table theory hom T({m},{n})")
    compose_tables = {}
    for l in range(N + 1):
        for m in range(N + 1):
            for n in range(N + 1):
                guard_budget(homs[(m, n)] * homs[(l, m)], budget,
                             "table theory composition block")
                compose_tables[(l, m, n)] = tuple(
                    tuple(T.index_of(T.compose(T.op(m, n, fi), T.op(l, m, gi)))
                          for gi in range(homs[(l, m)]))
                    for fi in range(homs[(m, n)]))
    identities = {n: T.index_of(T.identity(n)) for n in range(N + 1)}
    projections = {(n, i): T.index_of(T.projection(n, i))
                   for n in range(1, N + 1) for i in range(n)}
    return TableTheory(arity_bound=N, homs=homs, compose_tables=compose_tables,
                       identities=identities, projections=projections)


# ---------------------------------------------------------------------------
# axiom checks

def _sample_indices(rng, size, count):
    return [rng.randrange(size) for _ in range(count)]


def check_theory_axioms(T, budget=ENUM_BUDGET, seed=0, samples=200):
    """Identity, associativity, and power-cone laws up to the arity bound.

    Each law reports ok/coverage/witness; quantifications too large for
    the budget are sampled deterministically from the seed.
    """
    N = T.arity_bound
    rng = random.Random(seed)
    results = []

    ok, coverage, witness = True, "exhaustive", None
    for m in range(N + 1):
        for n in range(N + 1):
            size = T.hom_size(m, n)
            if size <= budget:
                idxs = range(size)
            else:
                coverage = "sampled"
                idxs = _sample_indices(rng, size, samples)
            for i in idxs:
                f = T.op(m, n, i)
                if (T.compose(T.identity(n), f).data != f.data
                        or T.compose(f, T.identity(m)).data != f.data):
                    ok, witness = False, ("identity", m, n, i)
                    break
            if not ok:
                break
        if not ok:
            break
    results.append({"law": "identity units", "ok": ok,
                    "coverage": coverage, "witness": witness})

    ok, coverage, witness = True, "exhaustive", None
    for k in range(N + 1):
        for l in range(N + 1):
            for m in range(N + 1):
                for n in range(N + 1):
                    total = T.hom_size(m, n) * T.hom_size(l, m) * T.hom_size(k, l)
                    if total <= budget:
                        triples = itertools.product(range(T.hom_size(m, n)),
                                                    range(T.hom_size(l, m)),
                                                    range(T.hom_size(k, l)))
                    else:
                        coverage = "sampled"
                        triples = zip(_sample_indices(rng, T.hom_size(m, n), samples),
                                      _sample_indices(rng, T.hom_size(l, m), samples),
                                      _sample_indices(rng, T.hom_size(k, l), samples))
                    for hi, gi, fi in triples:
                        h = T.op(m, n, hi)
                        g = T.op(l, m, gi)
                        f = T.op(k, l, fi)
                        lhs = T.compose(T.compose(h, g), f)
                        rhs = T.compose(h, T.compose(g, f))
                        if lhs.data != rhs.data:
                            ok, witness = False, ("associativity", k, l, m, n,
                                                  fi, gi, hi)
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    results.append({"law": "composition associativity", "ok": ok,
                    "coverage": coverage, "witness": witness})

    ok, coverage, witness = True, "exhaustive", None
    for m in range(N + 1):
        for n in range(1, N + 1):
            size = T.hom_size(m, n)
            comp_size = T.hom_size(m, 1) ** n
            if size != comp_size:
                ok, witness = False, ("cone-size", m, n, size, comp_size)
                break
            if size <= budget:
                idxs = range(size)
            else:
                coverage = "sampled"
                idxs = _sample_indices(rng, size, samples)
            seen = {}
            for i in idxs:
                f = T.op(m, n, i)
                comps = tuple(c.data for c in T.components(f))
                if comps in seen and seen[comps] != i:
                    ok, witness = False, ("cone-injectivity", m, n, seen[comps], i)
                    break
                seen[comps] = i
                # tupling the components must reproduce f
                try:
                    back = T.tuple_op(m, T.components(f))
                except TableError as e:
                    ok, witness = False, ("cone-tupling", m, n, i, e.witness)
                    break
                if back.data != f.data:
                    ok, witness = False, ("cone-retupling", m, n, i)
                    break
            if not ok:
                break
        if not ok:
            break
    results.append({"law": "power cones", "ok": ok,
                    "coverage": coverage, "witness": witness})
    return results


def is_commutative_theory(T, budget=ENUM_BUDGET):
    """Exhaustive commutation check of every pair of operations whose
    arities multiply to at most the arity bound.

    Variables sit in an m x n grid flattened as flat(i, j) = j*m + i; the
    two evaluation orders must give the same operation of arity m*n.
    Returns (True, None) or (False, (m, n, theta_index, phi_index)).
    """
    N = T.arity_bound
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            if m * n > N:
                continue
            guard_budget(T.hom_size(m, 1) * T.hom_size(n, 1), budget,
                         "commutativity pair enumeration")
            col_incl = [sigma_of_set_map(T, [j * m + i for i in range(m)], m * n)
                        for j in range(n)]
            row_incl = [sigma_of_set_map(T, [j * m + i for j in range(n)], m * n)
                        for i in range(m)]
            for ti in range(T.hom_size(m, 1)):
                theta = T.op(m, 1, ti)
                theta_cols = T.tuple_op(m * n, [T.compose(theta, s)
                                                for s in col_incl])
                for pi in range(T.hom_size(n, 1)):
                    phi = T.op(n, 1, pi)
                    route_a = T.compose(phi, theta_cols)
                    phi_rows = T.tuple_op(m * n, [T.compose(phi, s)
                                                  for s in row_incl])
                    route_b = T.compose(theta, phi_rows)
                    if route_a.data != route_b.data:
                        return False, (m, n, ti, pi)
    return True, None


# ---------------------------------------------------------------------------
# normal algebras

@dataclass(frozen=True, eq=False)
class NormalAlgebra:
    """Carrier 0..size-1 with one evaluation function per operation."""
    theory: object
    size: int
    apply: object  # callable (op: Op with cod == 1, args: tuple) -> element
    name: str = field(default="")

    def __repr__(self) -> str:
        return f"NormalAlgebra({self.name or self.size})"


def normal_algebra_from_module(E: FiniteModule, T: MatrixTheory) -> NormalAlgebra:
    if E.ring != T.ring:
        raise TableError("module and theory are over different rings")

    def apply(op: Op, args) -> int:
        row = op.data[0]
        acc = 0
        for c, x in zip(row, args):
            acc = E.add[acc][E.act[c][x]]
        return acc

    return NormalAlgebra(theory=T, size=E.size, apply=apply, name=E.name)


def module_from_normal_algebra(A: NormalAlgebra) -> FiniteModule:
    T = A.theory
    R = T.ring
    one = R.one
    add_op = Op(2, 1, ((one, one),))
    add = [[A.apply(add_op, (x, y)) for y in range(A.size)]
           for x in range(A.size)]
    act = [[A.apply(Op(1, 1, ((r,),)), (x,)) for x in range(A.size)]
           for r in range(R.size)]
    neg = [A.apply(Op(1, 1, ((R.neg[one],),)), (x,)) for x in range(A.size)]
    return make_module(R, A.size, add, act, neg, name=A.name)


def check_normal_algebra(A: NormalAlgebra, budget=ENUM_BUDGET, seed=0,
                         samples=200):
    """Projection and substitution laws up to the theory's arity bound."""
    T = A.theory
    N = T.arity_bound
    rng = random.Random(seed)

    for n in range(1, N + 1):
        for i in range(n):
            pi = T.projection(n, i)
            for args in itertools.product(range(A.size), repeat=n):
                if A.apply(pi, args) != args[i]:
                    return {"ok": False, "coverage": "exhaustive",
                            "witness": ("projection", n, i, args)}

    coverage = "exhaustive"
    for m in range(N + 1):
        for k in range(N + 1):
            total = (T.hom_size(m, 1) * T.hom_size(k, 1) ** m
                     * A.size ** k)
            if total <= budget:
                cases = itertools.product(
                    range(T.hom_size(m, 1)),
                    itertools.product(range(T.hom_size(k, 1)), repeat=m),
                    itertools.product(range(A.size), repeat=k))
            else:
                coverage = "sampled"
                cases = ((rng.randrange(T.hom_size(m, 1)),
                          tuple(rng.randrange(T.hom_size(k, 1))
                                for _ in range(m)),
                          tuple(rng.randrange(A.size) for _ in range(k)))
                         for _ in range(samples))
            for ti, gis, ys in cases:
                theta = T.op(m, 1, ti)
                gs = [T.op(k, 1, gi) for gi in gis]
                inner = tuple(A.apply(g, ys) for g in gs)
                lhs = A.apply(theta, inner)
                rhs = A.apply(T.compose(theta, T.tuple_op(k, gs)), ys)
                if lhs != rhs:
                    return {"ok": False, "coverage": coverage,
                            "witness": ("substitution", m, k, ti, gis, ys)}
    return {"ok": True, "coverage": coverage, "witness": None}


# ---------------------------------------------------------------------------
# free algebras as a truncated colimit of operation/tuple pairs

@dataclass(frozen=True, eq=False)
class FreeAlgebra:
    """Free algebra of a matrix theory on a finite set.

    Carrier = classes of nodes (n, theta, xs) with theta an operation row
    of arity n and xs an n-tuple of set elements, under the relation
    (theta, xs o g) ~ (theta o sigma(g), xs) for set maps g. Classes are
    labeled by their minimal node and re-indexed 0..size-1.
    """
    theory: MatrixTheory
    set_size: int
    bound: int
    size: int
    class_reps: tuple
    _class_of: list
    _offsets: tuple

    def _node_id(self, n, theta, xs) -> int:
        R = self.theory.ring.size
        X = self.set_size
        tc = 0
        for i in range(n - 1, -1, -1):
            tc = tc * R + theta[i]
        xc = 0
        for i in range(n - 1, -1, -1):
            xc = xc * X + xs[i]
        return self._offsets[n] + xc * R ** n + tc

    def class_of_node(self, n: int, theta, xs) -> int:
        if n > self.bound:
            n, theta, xs = _reduce_node(self.theory.ring, n, theta, xs)
            assert n <= self.bound, "reduced arity exceeds the bound"
        return self._class_of[self._node_id(n, theta, xs)]

    def unit(self, x: int) -> int:
        return self.class_of_node(1, (self.theory.ring.one,), (x,))

    def apply_row(self, row, arg_classes) -> int:
        """Evaluate an operation (coefficient row) on carrier elements by
        substitution into representatives, then reduction."""
        R = self.theory.ring
        theta: list[int] = []
        xs: list[int] = []
        for c, cls in zip(row, arg_classes):
            n, th, tup = self.class_reps[cls]
            theta.extend(R.mul[c][t] for t in th)
            xs.extend(tup)
        n, th, tup = _reduce_node(R, len(theta), theta, xs)
        return self.class_of_node(n, th, tup)

    def vector(self, cls: int):
        """Coefficient vector over the base set of a class (its semantics
        inside the free module)."""
        R = self.theory.ring
        n, theta, xs = self.class_reps[cls]
        out = [0] * self.set_size
        for c, x in zip(theta, xs):
            out[x] = R.add[out[x]][c]
        return tuple(out)

    def algebra(self) -> NormalAlgebra:
        return NormalAlgebra(theory=self.theory, size=self.size,
                             apply=lambda op, args: self.apply_row(op.data[0], args),
                             name=f"free({self.set_size})")


def _reduce_node(R: FiniteRing, n: int, theta, xs):
    """Collapse repeated set elements (first-occurrence order), summing
    their coefficients; the result is a related node of arity <= |image|."""
    order: list[int] = []
    pos: dict[int, int] = {}
    coeff: list[int] = []
    for c, x in zip(theta, xs):
        p = pos.get(x)
        if p is None:
            pos[x] = len(order)
            order.append(x)
            coeff.append(c)
        else:
            coeff[p] = R.add[coeff[p]][c]
    return len(order), tuple(coeff), tuple(order)


def free_algebra_coend(T: MatrixTheory, set_size: int, bound: int | None = None,
                       budget: int = ENUM_BUDGET) -> FreeAlgebra:
    """Union-find over all relation instances generated by adjacent
    transpositions, merging the last two inputs, and front inclusions."""
    R = T.ring.size
    X = set_size
    ring = T.ring
    if bound is None:
        bound = max(T.arity_bound, set_size)
    counts = [(R * X) ** n if n > 0 else 1 for n in range(bound + 1)]
    offsets = [0]
    for c in counts:
        offsets.append(offsets[-1] + c)
    total = offsets[-1]
    guard_budget(total, budget, "free-algebra node space")

    parent = list(range(total))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            if ri < rj:
                parent[rj] = ri
            else:
                parent[ri] = rj

    def swap_table(base: int, length: int, i: int):
        # code -> code with digits i, i+1 transposed (little-endian)
        lo = base ** i
        table = []
        for code in range(base ** length):
            di = (code // lo) % base
            dj = (code // (lo * base)) % base
            table.append(code + (dj - di) * lo + (di - dj) * lo * base)
        return table

    for n in range(2, bound + 1):
        rn = R ** n
        xn = X ** n
        off = offsets[n]
        for i in range(n - 1):
            st = swap_table(R, n, i)
            sx = swap_table(X, n, i)
            for xc in range(xn):
                other = sx[xc]
                if other < xc:
                    continue
                row_a = off + xc * rn
                row_b = off + other * rn
                for tc in range(rn):
                    union(row_a + tc, row_b + st[tc])

    for n in range(2, bound + 1):
        # (theta, xs' with last element doubled) ~ (last two coefficients
        # summed, xs')
        rn = R ** n
        rlow = R ** (n - 2)
        xlow = X ** (n - 2) if n >= 2 else 1
        merge = []
        for tc in range(rn):
            low = tc % rlow
            d1 = (tc // rlow) % R
            d2 = tc // (rlow * R)
            merge.append(low + ring.add[d1][d2] * rlow)
        off_n = offsets[n]
        off_m = offsets[n - 1]
        rm = R ** (n - 1)
        for xc in range(X ** (n - 1)):
            last = xc // xlow
            dup = xc + last * X ** (n - 1)
            base_n = off_n + dup * rn
            base_m = off_m + xc * rm
            for tc in range(rn):
                union(base_n + tc, base_m + merge[tc])

    for m in range(bound):
        # (theta, xs minus its last element) ~ (theta extended by a zero
        # coefficient, xs)
        rm = R ** m
        xm = X ** m
        off_m = offsets[m]
        off_n = offsets[m + 1]
        rn = R ** (m + 1)
        for xc in range(X ** (m + 1)):
            base_n = off_n + xc * rn
            base_m = off_m + (xc % xm) * rm
            for tc in range(rm):
                union(base_n + tc, base_m + tc)

    roots: dict[int, int] = {}
    class_of = [0] * total
    for i in range(total):
        class_of[i] = find(i)
    for i in range(total):
        r = class_of[i]
        if r not in roots:
            roots[r] = len(roots)
    class_of = [roots[r] for r in class_of]

    reps = [None] * len(roots)
    for root, cid in roots.items():
        n = bound
        while offsets[n] > root:
            n -= 1
        rem = root - offsets[n]
        rn = R ** n
        xc, tc = divmod(rem, rn)
        theta = []
        for _ in range(n):
            tc, d = divmod(tc, R)
            theta.append(d)
        xs = []
        for _ in range(n):
            xc, d = divmod(xc, X)
            xs.append(d)
        reps[cid] = (n, tuple(theta), tuple(xs))

    return FreeAlgebra(theory=T, set_size=set_size, bound=bound,
                       size=len(roots), class_reps=tuple(reps),
                       _class_of=class_of, _offsets=tuple(offsets))


def free_algebra_matches_free_module(fa: FreeAlgebra, op_budget=ENUM_BUDGET,
                                     samples=2000, seed=0):
    """The explicit comparison with the free module on the same set.

    Exhaustive at every size: class count, distinct coefficient vectors,
    matching units, and semantic constancy of every node in the colimit
    (each node's vector equals its class representative's). Binary
    operation agreement is exhausted when |R|^2 * size^2 fits op_budget
    and sampled otherwise. Returns (ok, witness, coverage).
    """
    ring = fa.theory.ring
    R = ring.size
    X = fa.set_size
    expected = R ** X
    if fa.size != expected:
        return False, ("class-count", fa.size, expected), "exhaustive"
    seen = {}
    vectors = []
    for cls in range(fa.size):
        v = fa.vector(cls)
        vectors.append(v)
        if v in seen:
            return False, ("duplicate-vector", seen[v], cls), "exhaustive"
        seen[v] = cls
    for x in range(X):
        v = vectors[fa.unit(x)]
        if any(v[i] != (ring.one if i == x else 0) for i in range(X)):
            return False, ("unit", x, v), "exhaustive"
    # every node of the colimit evaluates to its class vector
    node = 0
    for n in range(fa.bound + 1):
        rn = R ** n
        for xc in range(X ** n if n > 0 else 1):
            xs = []
            c = xc
            for _ in range(n):
                c, d = divmod(c, X)
                xs.append(d)
            for tc in range(rn):
                val = [0] * X
                t = tc
                for i in range(n):
                    t, d = divmod(t, R)
                    val[xs[i]] = ring.add[val[xs[i]]][d]
                if tuple(val) != vectors[fa._class_of[node]]:
                    return False, ("node-semantics", n, tc, xc), "exhaustive"
                node += 1
    total_ops = R * R * fa.size * fa.size
    if total_ops <= op_budget:
        coverage = "exhaustive"
        cases = itertools.product(range(R), range(R), range(fa.size),
                                  range(fa.size))
    else:
        coverage = "sampled"
        rng = random.Random(seed)
        cases = ((rng.randrange(R), rng.randrange(R), rng.randrange(fa.size),
                  rng.randrange(fa.size)) for _ in range(samples))
    for r, s, c1, c2 in cases:
        got = vectors[fa.apply_row((r, s), (c1, c2))]
        v1, v2 = vectors[c1], vectors[c2]
        want = tuple(ring.add[ring.mul[r][v1[i]]][ring.mul[s][v2[i]]]
                     for i in range(X))
        if got != want:
            return False, ("operation", (r, s), c1, c2, got, want), coverage
    return True, None, coverage


# ---------------------------------------------------------------------------
# tensor product of algebras over the theory of a commutative ring

@dataclass(frozen=True, eq=False)
class AlgebraTensor:
    algebra: NormalAlgebra
    module: FiniteModule
    pure_table: tuple
    left_size: int
    right_size: int
    section: tuple  # per element, a coefficient vector over the product set

    def pure(self, a: int, b: int) -> int:
        return self.pure_table[a][b]

    def factor_bimorphism(self, beta, cod: FiniteModule):
        """Linear map induced by a bimorphism beta: pairs -> cod."""
        from .finalg import LinearMap, linearity_failure
        table = []
        for coeffs in self.section:
            acc = 0
            for pos, c in enumerate(coeffs):
                a, b = divmod(pos, self.right_size)
                acc = cod.add[acc][cod.act[c][beta(a, b)]]
            table.append(acc)
        h = LinearMap(self.module, cod, tuple(table))
        if linearity_failure(h) is not None:
            raise TableError("bimorphism factorization is not linear")
        for a in range(self.left_size):
            for b in range(self.right_size):
                if h.table[self.pure(a, b)] != beta(a, b):
                    raise TableError("factorization disagrees on a pure pair",
                                     witness=(a, b))
        return h


def tensor_product_of_algebras(A: NormalAlgebra, B: NormalAlgebra,
                               budget=DEFAULT_BUDGET) -> AlgebraTensor:
    """Quotient of the free module on the product set by bimorphism
    relations. Independent of the presentation-based module tensor; the
    two are compared in tests.

    The free module on the product set is dense, so the budget caps its
    carrier size; configurations beyond it raise BudgetError."""
    from .finalg import free_basis_index, free_module, quotient_module, submodule_span

    T = A.theory
    ring = T.ring
    assert B.theory is T or B.theory == T
    assert ring.commutative
    k = A.size * B.size
    guard_budget(ring.size ** k, budget, "free module on the product set")
    F = free_module(ring, k, budget=budget)

    def basis(a, b):
        return free_basis_index(ring.size, k, a * B.size + b)

    add_op = Op(2, 1, ((ring.one, ring.one),))
    seeds = []
    for a in range(A.size):
        for a2 in range(A.size):
            for b in range(B.size):
                s = A.apply(add_op, (a, a2))
                vec = F.add[F.add[basis(s, b)][F.neg[basis(a, b)]]][F.neg[basis(a2, b)]]
                seeds.append(vec)
    for b in range(B.size):
        for b2 in range(B.size):
            for a in range(A.size):
                s = B.apply(add_op, (b, b2))
                vec = F.add[F.add[basis(a, s)][F.neg[basis(a, b)]]][F.neg[basis(a, b2)]]
                seeds.append(vec)
    for r in range(ring.size):
        op = Op(1, 1, ((r,),))
        for a in range(A.size):
            for b in range(B.size):
                ra = A.apply(op, (a,))
                rb = B.apply(op, (b,))
                scaled = F.act[r][basis(a, b)]
                seeds.append(F.add[basis(ra, b)][F.neg[scaled]])
                seeds.append(F.add[basis(a, rb)][F.neg[scaled]])
    rel = submodule_span(F, seeds)
    mod, proj = quotient_module(F, rel, name=f"{A.name}(x){B.name}")
    pure = tuple(tuple(proj.table[basis(a, b)] for b in range(B.size))
                 for a in range(A.size))
    from .finalg import free_tuple
    reps = [None] * mod.size
    for v in range(F.size):
        c = proj.table[v]
        if reps[c] is None:
            reps[c] = free_tuple(ring.size, k, v)
    return AlgebraTensor(algebra=normal_algebra_from_module(mod, T),
                         module=mod, pure_table=pure,
                         left_size=A.size, right_size=B.size,
                         section=tuple(reps))


# ---------------------------------------------------------------------------
# table-theory text format

def serialize_theory(t: TableTheory) -> str:
    N = t.arity_bound
    lines = [f"theory {N}"]
    for m in range(N + 1):
        for n in range(N + 1):
            lines.append(f"hom {m} {n} {t.homs[(m, n)]}")
    for n in range(N + 1):
        lines.append(f"identity {n} {t.identities[n]}")
    for n in range(1, N + 1):
        for i in range(n):
            lines.append(f"projection {n} {i} {t.projections[(n, i)]}")
    for l in range(N + 1):
        for m in range(N + 1):
            for n in range(N + 1):
                block = t.compose_tables[(l, m, n)]
                lines.append(f"compose {l} {m} {n}")
                for row in block:
                    lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_theory(text: str) -> TableTheory:
    rows = [ln.split() for ln in text.splitlines() if ln.split()]
    if not rows or rows[0][0] != "theory" or len(rows[0]) != 2:
        raise TableError("missing theory header")
    N = int(rows[0][1])
    homs: dict = {}
    identities: dict = {}
    projections: dict = {}
    compose_tables: dict = {}
    pos = 1
    while pos < len(rows):
        head = rows[pos]
        pos += 1
        if head[0] == "hom" and len(head) == 4:
            homs[(int(head[1]), int(head[2]))] = int(head[3])
        elif head[0] == "identity" and len(head) == 3:
            identities[int(head[1])] = int(head[2])
        elif head[0] == "projection" and len(head) == 4:
            projections[(int(head[1]), int(head[2]))] = int(head[3])
        elif head[0] == "compose" and len(head) == 4:
            l, m, n = int(head[1]), int(head[2]), int(head[3])
            if (m, n) not in homs or (l, m) not in homs:
                raise TableError(f"compose block {l} {m} {n} precedes hom sizes")
            block = []
            for _ in range(homs[(m, n)]):
                if pos >= len(rows) or len(rows[pos]) != homs[(l, m)]:
                    raise TableError(f"compose block {l} {m} {n} malformed")
                block.append(tuple(int(v) for v in rows[pos]))
                pos += 1
            compose_tables[(l, m, n)] = tuple(block)
        else:
            raise TableError(f"unrecognized theory line {' '.join(head)!r}")
    for m in range(N + 1):
        for n in range(N + 1):
            if (m, n) not in homs:
                raise TableError(f"hom size for ({m},{n}) missing")
            for l in range(N + 1):
                if (l, m, n) not in compose_tables:
                    raise TableError(f"compose block ({l},{m},{n}) missing")
    return TableTheory(arity_bound=N, homs=homs, compose_tables=compose_tables,
                       identities=identities, projections=projections)
