"""Monads on finite sets, presented by lazy callables on integer codes.

A finite set of size n is the range 0..n-1; a pair (x, y) in X x Y is the
code x*|Y| + y. A monad handle evaluates everything on demand: on_objects
maps a set size to the size of the image set, and the unit, multiplication,
and functorial action are per-set functions on element codes. Nothing is
materialized globally, so image sizes may be astronomically large as long
as the codes actually touched stay representable.

Elements of T(X) for the free-module monad are little-endian base-|R|
integer codes of coefficient vectors over X. Law checks quantify over
whole layers when they fit the budget, over seeded random codes when only
the codes are representable, and record a skip otherwise; an equivalent
Kleisli formulation keeps associativity checkable on every probe set.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import BudgetError, TableError
from .finalg import FiniteModule, FiniteRing, make_module

ENUM_BUDGET = 65536
CODE_BIT_BUDGET = 1 << 17
PROBE_SIZES = (0, 1, 2, 3)


# ---------------------------------------------------------------------------
# handles

@dataclass(frozen=True, eq=False)
class MonadHandle:
    """A monad on finite sets given by per-set functions on element codes.

    bind(f, dom, cod) is the Kleisli extension mult . T(f) for a table
    f: dom -> T(cod); shipped monads implement it natively so that
    composites never pass through a code over an unrepresentably large
    intermediate set.
    """
    name: str
    on_objects: callable
    on_maps: callable
    unit: callable
    mult: callable
    bind: callable

    def __repr__(self) -> str:
        return f"MonadHandle({self.name})"


@dataclass(frozen=True, eq=False)
class AlgebraHandle:
    monad: MonadHandle
    carrier: int
    structure: callable
    name: str = "algebra"

    def __repr__(self) -> str:
        return f"AlgebraHandle({self.name}, carrier={self.carrier})"


@dataclass(frozen=True, eq=False)
class MonadMorphism:
    source: MonadHandle
    target: MonadHandle
    component: callable
    name: str = "morphism"

    def __repr__(self) -> str:
        return f"MonadMorphism({self.name}: {self.source.name} -> {self.target.name})"


def pair_code(x: int, y: int, ysize: int) -> int:
    return x * ysize + y


def _encode(vec, base: int) -> int:
    code = 0
    for d in reversed(vec):
        code = code * base + d
    return code


# ---------------------------------------------------------------------------
# shipped monads

def identity_monad() -> MonadHandle:
    return MonadHandle(
        name="identity",
        on_objects=lambda n: n,
        on_maps=lambda f, dom, cod: (lambda x: f[x]),
        unit=lambda n: (lambda x: x),
        mult=lambda n: (lambda x: x),
        bind=lambda f, dom, cod: (lambda x: f[x]),
    )


def free_module_monad(ring: FiniteRing) -> MonadHandle:
    """T(X) = free left module on X; codes are little-endian base-|R|."""
    R = ring.size
    add = ring.add
    mul = ring.mul

    def on_objects(n: int) -> int:
        return R ** n

    def on_maps(f, dom: int, cod: int):
        def push(code: int) -> int:
            acc = [0] * cod
            p = 0
            while code:
                code, d = divmod(code, R)
                if d:
                    t = f[p]
                    acc[t] = add[acc[t]][d]
                p += 1
            return _encode(acc, R)
        return push

    def unit(n: int):
        return lambda x: R ** x

    def mult(n: int):
        # a digit position of the outer code is itself an inner code
        def flatten(code: int) -> int:
            acc = [0] * n
            p = 0
            while code:
                code, c = divmod(code, R)
                if c:
                    inner, q = p, 0
                    while inner:
                        inner, d = divmod(inner, R)
                        if d:
                            acc[q] = add[acc[q]][mul[c][d]]
                        q += 1
                p += 1
            return _encode(acc, R)
        return flatten

    def bind(f, dom: int, cod: int):
        def ext(code: int) -> int:
            acc = [0] * cod
            p = 0
            while code:
                code, c = divmod(code, R)
                if c:
                    inner, q = f[p], 0
                    while inner:
                        inner, d = divmod(inner, R)
                        if d:
                            acc[q] = add[acc[q]][mul[c][d]]
                        q += 1
                p += 1
            return _encode(acc, R)
        return ext

    return MonadHandle(name=f"free-module({ring.name})", on_objects=on_objects,
                       on_maps=on_maps, unit=unit, mult=mult, bind=bind)


def writer_monad(monoid, name: str = "writer") -> MonadHandle:
    """T(X) = M x X for a finite monoid M with identity 0.

    Codes are m*|X| + x. Commutative iff the monoid is; the left-zero
    monoid with a unit adjoined gives a lawful non-commutative monad.
    """
    msize = len(monoid)
    mmul = monoid

    def on_objects(n: int) -> int:
        return msize * n

    def on_maps(f, dom: int, cod: int):
        def push(code: int) -> int:
            m, x = divmod(code, dom)
            return m * cod + f[x]
        return push

    def unit(n: int):
        return lambda x: x  # 0 * n + x

    def mult(n: int):
        tn = msize * n

        def flatten(code: int) -> int:
            m1, inner = divmod(code, tn)
            m2, x = divmod(inner, n)
            return mmul[m1][m2] * n + x
        return flatten

    def bind(f, dom: int, cod: int):
        def ext(code: int) -> int:
            m1, x = divmod(code, dom)
            m2, y = divmod(f[x], cod)
            return mmul[m1][m2] * cod + y
        return ext

    return MonadHandle(name=name, on_objects=on_objects, on_maps=on_maps,
                       unit=unit, mult=mult, bind=bind)


def left_zero_unit_monoid(k: int = 2):
    """Identity 0 adjoined to the k-element left-zero semigroup x*y = x."""
    size = k + 1
    return tuple(tuple(j if i == 0 else (i if j else i) for j in range(size))
                 for i in range(size))


def parse_monoid(text: str):
    rows = [line.split() for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")]
    if not rows or rows[0][0] != "monoid" or len(rows[0]) != 2:
        raise TableError("expected a 'monoid <size>' header")
    size = int(rows[0][1])
    if len(rows) != 1 + size:
        raise TableError("monoid table has the wrong number of rows")
    table = tuple(tuple(int(v) for v in row) for row in rows[1:])
    if any(len(row) != size for row in table):
        raise TableError("monoid table has the wrong number of columns")
    if any(not 0 <= v < size for row in table for v in row):
        raise TableError("monoid entry out of range")
    for i in range(size):
        if table[0][i] != i or table[i][0] != i:
            raise TableError("element 0 is not a two-sided identity",
                             witness=i)
    for a in range(size):
        for b in range(size):
            for c in range(size):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise TableError("monoid is not associative",
                                     witness=(a, b, c))
    return table


def serialize_monoid(table) -> str:
    lines = [f"monoid {len(table)}"]
    lines.extend(" ".join(str(v) for v in row) for row in table)
    return "\n".join(lines) + "\n"


def monad_from_theory(T, budget: int = 2_000_000) -> MonadHandle:
    """Monad whose carrier on each set is the free-algebra quotient of the
    operation/tuple pairs; multiplication substitutes representatives."""
    from .lawvere import free_algebra_coend

    cache: dict = {}

    def fa(n: int):
        if n not in cache:
            cache[n] = free_algebra_coend(T, n, budget=budget)
        return cache[n]

    def on_objects(n: int) -> int:
        return fa(n).size

    def on_maps(f, dom: int, cod: int):
        src, tgt = fa(dom), fa(cod)

        def push(cls: int) -> int:
            m, theta, xs = src.class_reps[cls]
            return tgt.class_of_node(m, theta, tuple(f[x] for x in xs))
        return push

    def unit(n: int):
        return fa(n).unit

    def mult(n: int):
        tgt = fa(n)
        outer = fa(tgt.size)

        def flatten(cls: int) -> int:
            m, theta, xs = outer.class_reps[cls]
            return tgt.apply_row(theta, xs)
        return flatten

    def bind(f, dom: int, cod: int):
        src, tgt = fa(dom), fa(cod)

        def ext(cls: int) -> int:
            m, theta, xs = src.class_reps[cls]
            return tgt.apply_row(theta, tuple(f[x] for x in xs))
        return ext

    return MonadHandle(name=f"theory({T.ring.name})", on_objects=on_objects,
                       on_maps=on_maps, unit=unit, mult=mult, bind=bind)


def monad_by_name(spec: str, ring: FiniteRing | None = None) -> MonadHandle:
    if spec == "identity":
        return identity_monad()
    if spec == "free-module":
        if ring is None:
            raise TableError("the free-module monad needs a ring")
        return free_module_monad(ring)
    if spec == "nat-dist":
        if ring is None:
            raise TableError("the distribution monad needs a ring")
        from .distmonads import nat_dist_monad
        return nat_dist_monad(ring).monad
    if spec.startswith("table:"):
        from pathlib import Path
        return writer_monad(parse_monoid(Path(spec[6:]).read_text()),
                            name=spec)
    raise TableError(f"unknown monad name: {spec!r}")


# ---------------------------------------------------------------------------
# probe families and quantification policy

@dataclass(frozen=True)
class ProbeFamily:
    """All sets of the given sizes and all maps between them."""
    sizes: tuple = PROBE_SIZES

    def maps(self, dom: int, cod: int):
        return itertools.product(range(cod), repeat=dom)

    def all_maps(self):
        for a in self.sizes:
            for b in self.sizes:
                for f in self.maps(a, b):
                    yield a, b, f


DEFAULT_PROBES = ProbeFamily()


def _element_probe(total: int, budget: int, bit_budget: int, rng, samples: int):
    """Iterate a layer exhaustively, by seeded samples, or not at all."""
    if total <= budget:
        return range(total), "exhaustive"
    if total.bit_length() <= bit_budget:
        return (rng.randrange(total) for _ in range(samples)), "sampled"
    return None, "skipped"


class _Law:
    def __init__(self, law: str):
        self.law = law
        self.ok = True
        self.witness = None
        self.exhaustive = True
        self.touched = False
        self.skipped = []

    def mark(self, coverage: str, config=None):
        if coverage == "skipped":
            self.skipped.append(config)
        else:
            self.touched = True
            if coverage != "exhaustive":
                self.exhaustive = False

    def fail(self, witness) -> None:
        if self.ok:
            self.ok = False
            self.witness = witness

    def report(self) -> dict:
        if not self.touched:
            coverage = "skipped"
        elif self.exhaustive and not self.skipped:
            coverage = "exhaustive"
        else:
            coverage = "sampled"
        return {"law": self.law, "ok": self.ok, "coverage": coverage,
                "witness": self.witness, "skipped": tuple(self.skipped)}


# ---------------------------------------------------------------------------
# monad law checks

def check_monad_laws(M: MonadHandle, probes: ProbeFamily = DEFAULT_PROBES,
                     budget: int = ENUM_BUDGET,
                     bit_budget: int = CODE_BIT_BUDGET,
                     seed: int = 0, samples: int = 100) -> list:
    """Functoriality, unit/mult naturality, unit laws, and associativity.

    Associativity is checked directly on the triple layer where its codes
    are representable, and in Kleisli form (extension of probed arrows
    x -> T y) on every probe configuration; the latter never skips.
    """
    rng = random.Random(seed)
    laws = {key: _Law(key) for key in (
        "functor identity", "functor composition", "unit naturality",
        "mult naturality", "left unit", "right unit",
        "associativity (layers)", "associativity (kleisli)",
        "bind agrees with mult")}

    for n in probes.sizes:
        t1 = M.on_objects(n)
        ident = M.on_maps(tuple(range(n)), n, n)
        law = laws["functor identity"]
        elems, cov = _element_probe(t1, budget, bit_budget, rng, samples)
        law.mark(cov, ("identity", n))
        for xi in elems or ():
            if ident(xi) != xi:
                law.fail(("identity", n, xi))
                break

    law = laws["functor composition"]
    for a in probes.sizes:
        ta = M.on_objects(a)
        elems, cov = _element_probe(ta, budget, bit_budget, rng, samples)
        law.mark(cov, ("composition", a))
        if elems is None:
            continue
        elems = list(elems)
        for b in probes.sizes:
            for c in probes.sizes:
                for f in probes.maps(a, b):
                    tf = M.on_maps(f, a, b)
                    for g in probes.maps(b, c):
                        tg = M.on_maps(g, b, c)
                        tgf = M.on_maps(tuple(g[v] for v in f), a, c)
                        for xi in elems:
                            if tgf(xi) != tg(tf(xi)):
                                law.fail(("composition", a, b, c, f, g, xi))
                                break

    law = laws["unit naturality"]
    for a, b, f in probes.all_maps():
        law.mark("exhaustive")
        ua, ub = M.unit(a), M.unit(b)
        tf = M.on_maps(f, a, b)
        for x in range(a):
            if ub(f[x]) != tf(ua(x)):
                law.fail(("unit-naturality", a, b, f, x))
                break

    law = laws["mult naturality"]
    for a, b, f in probes.all_maps():
        try:
            ta, tb = M.on_objects(a), M.on_objects(b)
            if ta > budget:
                law.mark("skipped", ("mult-naturality", a, b))
                continue
            tta = M.on_objects(ta)
            elems, cov = _element_probe(tta, budget, bit_budget, rng, samples)
            law.mark(cov, ("mult-naturality", a, b))
            if elems is None:
                continue
            tf_table = tuple(map(M.on_maps(f, a, b), range(ta)))
            ttf = M.on_maps(tf_table, ta, tb)
            tf = M.on_maps(f, a, b)
            ma, mb = M.mult(a), M.mult(b)
            for xi in elems:
                if mb(ttf(xi)) != tf(ma(xi)):
                    law.fail(("mult-naturality", a, b, f, xi))
                    break
        except BudgetError:
            law.mark("skipped", ("mult-naturality", a, b))

    for n in probes.sizes:
        try:
            t1 = M.on_objects(n)
            if t1 > budget:
                laws["left unit"].mark("skipped", ("unit", n))
                laws["right unit"].mark("skipped", ("unit", n))
                continue
            un = M.unit(n)
            unit_table = tuple(un(x) for x in range(n))
            t_unit = M.on_maps(unit_table, n, t1)
            unit_at_tn = M.unit(t1)
            mn = M.mult(n)
            elems, cov = _element_probe(t1, budget, bit_budget, rng, samples)
            laws["left unit"].mark(cov, ("unit", n))
            laws["right unit"].mark(cov, ("unit", n))
            for xi in elems or ():
                if mn(t_unit(xi)) != xi:
                    laws["left unit"].fail(("left-unit", n, xi))
                if mn(unit_at_tn(xi)) != xi:
                    laws["right unit"].fail(("right-unit", n, xi))
        except BudgetError:
            laws["left unit"].mark("skipped", ("unit", n))
            laws["right unit"].mark("skipped", ("unit", n))

    law = laws["associativity (layers)"]
    for n in probes.sizes:
        try:
            t1 = M.on_objects(n)
            if t1 > budget:
                law.mark("skipped", ("associativity", n))
                continue
            tt1 = M.on_objects(t1)
            if tt1 > budget:
                # T(mult) needs the multiplication table over this layer
                law.mark("skipped", ("associativity", n))
                continue
            ttt1 = M.on_objects(tt1)
            # a sampled code on this layer costs about tt1 digit steps
            eff = samples if tt1 <= 2048 else max(4, 200_000 // tt1)
            elems, cov = _element_probe(ttt1, budget, bit_budget, rng, eff)
            law.mark(cov, ("associativity", n))
            if elems is None:
                continue
            mn, mtn = M.mult(n), M.mult(t1)
            mult_table = tuple(mn(xi) for xi in range(tt1))
            t_mult = M.on_maps(mult_table, tt1, t1)
            for xi in elems:
                if mn(mtn(xi)) != mn(t_mult(xi)):
                    law.fail(("associativity", n, xi))
                    break
        except BudgetError:
            law.mark("skipped", ("associativity", n))

    law = laws["associativity (kleisli)"]
    for a in probes.sizes:
        for b in probes.sizes:
            for c in probes.sizes:
                for d in probes.sizes:
                    tb, tc, td = (M.on_objects(k) for k in (b, c, d))
                    total = tb ** a * tc ** b * td ** c
                    if total * max(a, 1) <= budget:
                        triples = itertools.product(
                            itertools.product(range(tb), repeat=a),
                            itertools.product(range(tc), repeat=b),
                            itertools.product(range(td), repeat=c))
                        cov = "exhaustive"
                    else:
                        triples = (
                            (tuple(rng.randrange(tb) for _ in range(a)),
                             tuple(rng.randrange(tc) for _ in range(b)),
                             tuple(rng.randrange(td) for _ in range(c)))
                            for _ in range(max(1, samples // 10)))
                        cov = "sampled"
                    law.mark(cov, ("kleisli", a, b, c, d))
                    for f, g, h in triples:
                        gf = tuple(map(M.bind(g, b, c), f))
                        hg = tuple(map(M.bind(h, c, d), g))
                        left = tuple(map(M.bind(h, c, d), gf))
                        right = tuple(map(M.bind(hg, b, d), f))
                        if left != right:
                            law.fail(("kleisli", a, b, c, d, f, g, h))
                            break

    law = laws["bind agrees with mult"]
    for a in probes.sizes:
        for b in probes.sizes:
            try:
                ta, tb = M.on_objects(a), M.on_objects(b)
                if ta > budget or tb > budget:
                    law.mark("skipped", ("bind", a, b))
                    continue
                space = tb ** a
                if space * ta <= budget:
                    fs = itertools.product(range(tb), repeat=a)
                    cov = "exhaustive"
                else:
                    fs = (tuple(rng.randrange(tb) for _ in range(a))
                          for _ in range(max(1, samples // 10)))
                    cov = "sampled"
                law.mark(cov, ("bind", a, b))
                mb = M.mult(b)
                for f in fs:
                    ext = M.bind(f, a, b)
                    push = M.on_maps(f, a, tb)
                    for xi in range(ta):
                        if ext(xi) != mb(push(xi)):
                            law.fail(("bind", a, b, f, xi))
                            break
            except BudgetError:
                law.mark("skipped", ("bind", a, b))

    return [laws[key].report() for key in laws]


# ---------------------------------------------------------------------------
# strengths and commutativity

def strength_left(M: MonadHandle, x_size: int, y_size: int):
    """t'(mu, y) = T(x -> (x,y)) applied to mu."""
    def t_prime(mu: int, y: int) -> int:
        f = tuple(pair_code(x, y, y_size) for x in range(x_size))
        return M.on_maps(f, x_size, x_size * y_size)(mu)
    return t_prime


def strength_right(M: MonadHandle, x_size: int, y_size: int):
    """t''(x, nu) = T(y -> (x,y)) applied to nu."""
    def t_second(x: int, nu: int) -> int:
        f = tuple(pair_code(x, y, y_size) for y in range(y_size))
        return M.on_maps(f, y_size, x_size * y_size)(nu)
    return t_second


def otimes(M: MonadHandle, x_size: int, y_size: int):
    """mult . T(t') . t''_{TX,Y}, evaluated through bind."""
    tx = M.on_objects(x_size)
    t_prime = strength_left(M, x_size, y_size)
    prime_table = tuple(t_prime(mu, y)
                        for mu in range(tx) for y in range(y_size))
    t_second_outer = strength_right(M, tx, y_size)
    ext = M.bind(prime_table, tx * y_size, x_size * y_size)

    def tensor(mu: int, nu: int) -> int:
        return ext(t_second_outer(mu, nu))
    return tensor


def tilde_otimes(M: MonadHandle, x_size: int, y_size: int):
    """mult . T(t'') . t'_{X,TY}, evaluated through bind."""
    ty = M.on_objects(y_size)
    t_second = strength_right(M, x_size, y_size)
    second_table = tuple(t_second(x, nu)
                         for x in range(x_size) for nu in range(ty))
    t_prime_outer = strength_left(M, x_size, ty)
    ext = M.bind(second_table, x_size * ty, x_size * y_size)

    def tensor(mu: int, nu: int) -> int:
        return ext(t_prime_outer(mu, nu))
    return tensor


def check_strengths(M: MonadHandle, probes: ProbeFamily = DEFAULT_PROBES,
                    budget: int = ENUM_BUDGET, seed: int = 0,
                    samples: int = 100) -> list:
    """Unit compatibility and naturality of t' and t'' on probe maps."""
    rng = random.Random(seed)
    laws = {key: _Law(key) for key in
            ("strength unit", "left strength naturality",
             "right strength naturality")}

    law = laws["strength unit"]
    for xs in probes.sizes:
        for ys in probes.sizes:
            law.mark("exhaustive")
            t_prime = strength_left(M, xs, ys)
            t_second = strength_right(M, xs, ys)
            ux, uy = M.unit(xs), M.unit(ys)
            uxy = M.unit(xs * ys)
            for x in range(xs):
                for y in range(ys):
                    if t_second(x, uy(y)) != uxy(pair_code(x, y, ys)):
                        law.fail(("second", xs, ys, x, y))
                    if t_prime(ux(x), y) != uxy(pair_code(x, y, ys)):
                        law.fail(("first", xs, ys, x, y))

    for tag, key in (("left", "left strength naturality"),
                     ("right", "right strength naturality")):
        law = laws[key]
        for a, b, f in probes.all_maps():
            for ys in probes.sizes:
                ta = M.on_objects(a)
                elems, cov = _element_probe(ta, budget, CODE_BIT_BUDGET,
                                            rng, samples)
                law.mark(cov, (tag, a, b, ys))
                if elems is None:
                    continue
                if tag == "left":
                    # T(f x 1) . t'_{A,Y} = t'_{B,Y} . (Tf x 1)
                    src = strength_left(M, a, ys)
                    dst = strength_left(M, b, ys)
                    fx1 = tuple(pair_code(f[p // ys], p % ys, ys)
                                for p in range(a * ys))
                    pushed = M.on_maps(fx1, a * ys, b * ys)
                    tf = M.on_maps(f, a, b)
                    for mu in elems:
                        for y in range(ys):
                            if pushed(src(mu, y)) != dst(tf(mu), y):
                                law.fail((tag, a, b, ys, f, mu, y))
                else:
                    # T(1 x f) . t''_{Y,A} = t''_{Y,B} . (1 x Tf)
                    src = strength_right(M, ys, a)
                    dst = strength_right(M, ys, b)
                    one_x_f = tuple(pair_code(p // a, f[p % a], b)
                                    for p in range(ys * a))
                    pushed = M.on_maps(one_x_f, ys * a, ys * b)
                    tf = M.on_maps(f, a, b)
                    for nu in elems:
                        for x in range(ys):
                            if pushed(src(x, nu)) != dst(x, tf(nu)):
                                law.fail((tag, a, b, ys, f, nu, x))
    return [laws[key].report() for key in laws]


def is_commutative_monad(M: MonadHandle, probes: ProbeFamily = DEFAULT_PROBES,
                         budget: int = ENUM_BUDGET, seed: int = 0,
                         samples: int = 400):
    """Pointwise equality of the two strength-derived tensors on probes.

    Returns (ok, witness, coverage) with witness = (x_size, y_size, mu, nu).
    """
    rng = random.Random(seed)
    coverage = "exhaustive"
    for xs in probes.sizes:
        for ys in probes.sizes:
            try:
                tx, ty = M.on_objects(xs), M.on_objects(ys)
                fwd = otimes(M, xs, ys)
                bwd = tilde_otimes(M, xs, ys)
            except BudgetError:
                coverage = "partial"
                continue
            if tx * ty <= budget:
                pairs = itertools.product(range(tx), range(ty))
            else:
                if coverage == "exhaustive":
                    coverage = "sampled"
                pairs = ((rng.randrange(tx), rng.randrange(ty))
                         for _ in range(samples))
            for mu, nu in pairs:
                if fwd(mu, nu) != bwd(mu, nu):
                    return False, (xs, ys, mu, nu), coverage
    return True, None, coverage


# ---------------------------------------------------------------------------
# monad morphisms

def identity_morphism(M: MonadHandle) -> MonadMorphism:
    return MonadMorphism(source=M, target=M,
                         component=lambda n: (lambda xi: xi),
                         name="identity")


def unit_morphism(M: MonadHandle) -> MonadMorphism:
    """The unit of M as the unique monad morphism from the identity monad."""
    return MonadMorphism(source=identity_monad(), target=M,
                         component=M.unit, name=f"unit({M.name})")


def morphism_from_ring_hom(phi, src: FiniteRing, tgt: FiniteRing,
                           name: str = "base-change") -> MonadMorphism:
    """Coefficientwise application of a ring homomorphism between the two
    free-module monads. The caller supplies phi as an element table."""
    if phi[src.zero] != tgt.zero or phi[src.one] != tgt.one:
        raise TableError("the table does not preserve the ring units")
    for a in range(src.size):
        for b in range(src.size):
            if phi[src.add[a][b]] != tgt.add[phi[a]][phi[b]]:
                raise TableError("the table is not additive", witness=(a, b))
            if phi[src.mul[a][b]] != tgt.mul[phi[a]][phi[b]]:
                raise TableError("the table is not multiplicative",
                                 witness=(a, b))

    def component(n: int):
        def conv(code: int) -> int:
            acc = [0] * n
            p = 0
            while code:
                code, d = divmod(code, src.size)
                if d:
                    acc[p] = tgt.add[acc[p]][phi[d]]
                p += 1
            return _encode(acc, tgt.size)
        return conv

    return MonadMorphism(source=free_module_monad(src),
                         target=free_module_monad(tgt),
                         component=component, name=name)


def check_monad_morphism(lam: MonadMorphism,
                         probes: ProbeFamily = DEFAULT_PROBES,
                         budget: int = ENUM_BUDGET,
                         bit_budget: int = CODE_BIT_BUDGET,
                         seed: int = 0, samples: int = 100) -> list:
    """Unit law, associativity law, and naturality on probes."""
    rng = random.Random(seed)
    S, T = lam.source, lam.target
    laws = {key: _Law(key) for key in
            ("morphism unit", "morphism associativity",
             "morphism naturality")}

    law = laws["morphism unit"]
    for n in probes.sizes:
        law.mark("exhaustive")
        comp = lam.component(n)
        us, ut = S.unit(n), T.unit(n)
        for x in range(n):
            if comp(us(x)) != ut(x):
                law.fail(("unit", n, x))

    law = laws["morphism naturality"]
    for a, b, f in probes.all_maps():
        sa = S.on_objects(a)
        elems, cov = _element_probe(sa, budget, bit_budget, rng, samples)
        law.mark(cov, ("naturality", a, b))
        if elems is None:
            continue
        sf = S.on_maps(f, a, b)
        tf = T.on_maps(f, a, b)
        ca, cb = lam.component(a), lam.component(b)
        for xi in elems:
            if cb(sf(xi)) != tf(ca(xi)):
                law.fail(("naturality", a, b, f, xi))
                break

    law = laws["morphism associativity"]
    for n in probes.sizes:
        try:
            s1 = S.on_objects(n)
            if s1 > budget:
                law.mark("skipped", ("associativity", n))
                continue
            ss1 = S.on_objects(s1)
            t1 = T.on_objects(n)
            elems, cov = _element_probe(ss1, budget, bit_budget, rng, samples)
            law.mark(cov, ("associativity", n))
            if elems is None:
                continue
            comp_n = lam.component(n)
            comp_table = tuple(comp_n(xi) for xi in range(s1))
            s_comp = S.on_maps(comp_table, s1, t1)
            comp_t1 = lam.component(t1)
            ms, mt = S.mult(n), T.mult(n)
            for xi in elems:
                if comp_n(ms(xi)) != mt(comp_t1(s_comp(xi))):
                    law.fail(("associativity", n, xi))
                    break
        except BudgetError:
            law.mark("skipped", ("associativity", n))

    return [laws[key].report() for key in laws]


def induced_algebra_functor(lam: MonadMorphism,
                            B: AlgebraHandle) -> AlgebraHandle:
    """Pull an algebra of the target back along the morphism: the induced
    structure is b composed with the component at the carrier."""
    if B.monad is not lam.target:
        raise TableError("the algebra does not belong to the target monad")
    comp = lam.component(B.carrier)
    return AlgebraHandle(monad=lam.source, carrier=B.carrier,
                         structure=lambda xi: B.structure(comp(xi)),
                         name=f"{B.name} along {lam.name}")


# ---------------------------------------------------------------------------
# algebras and integration

def free_algebra_handle(M: MonadHandle, n: int) -> AlgebraHandle:
    return AlgebraHandle(monad=M, carrier=M.on_objects(n),
                         structure=M.mult(n), name=f"free({n})")


def module_algebra(mod: FiniteModule) -> AlgebraHandle:
    """A module as an algebra of the free-module monad over its ring."""
    R = mod.ring.size

    def structure(code: int) -> int:
        acc = 0
        p = 0
        while code:
            code, d = divmod(code, R)
            if d:
                acc = mod.add[acc][mod.act[d][p]]
            p += 1
        return acc

    return AlgebraHandle(monad=free_module_monad(mod.ring), carrier=mod.size,
                         structure=structure, name=mod.name)


def algebra_to_module(A: AlgebraHandle, ring: FiniteRing,
                      name: str = "carrier") -> FiniteModule:
    """Read module tables off an algebra of the free-module monad;
    validates the axioms via make_module."""
    R = ring.size
    size = A.carrier
    add = []
    for x in range(size):
        row = []
        for y in range(size):
            if x == y:
                two = ring.add[1][1]
                row.append(A.structure(two * R ** x))
            else:
                row.append(A.structure(R ** x + R ** y))
        add.append(tuple(row))
    act = tuple(tuple(A.structure(r * R ** x) for x in range(size))
                for r in range(R))
    neg = tuple(act[ring.neg[1]][x] for x in range(size))
    return make_module(ring, size, tuple(add), act, neg, name=name)


def check_algebra(A: AlgebraHandle, budget: int = ENUM_BUDGET,
                  bit_budget: int = CODE_BIT_BUDGET, seed: int = 0,
                  samples: int = 100,
                  probes: ProbeFamily = DEFAULT_PROBES) -> list:
    """Unit and multiplication laws of an algebra, the latter both on the
    double layer directly and in Kleisli form on probe arrows."""
    rng = random.Random(seed)
    M = A.monad
    laws = {key: _Law(key) for key in
            ("algebra unit", "algebra multiplication (layers)",
             "algebra multiplication (kleisli)")}

    law = laws["algebra unit"]
    law.mark("exhaustive")
    un = M.unit(A.carrier)
    for z in range(A.carrier):
        if A.structure(un(z)) != z:
            law.fail(("unit", z))

    law = laws["algebra multiplication (layers)"]
    try:
        t1 = M.on_objects(A.carrier)
        if t1 > budget:
            law.mark("skipped", ("layers",))
        else:
            tt1 = M.on_objects(t1)
            eff = samples if t1 <= 2048 else max(4, 200_000 // t1)
            elems, cov = _element_probe(tt1, budget, bit_budget, rng, eff)
            law.mark(cov, ("layers",))
            if elems is not None:
                a_table = tuple(A.structure(xi) for xi in range(t1))
                t_struct = M.on_maps(a_table, t1, A.carrier)
                mc = M.mult(A.carrier)
                for xi in elems:
                    if A.structure(mc(xi)) != A.structure(t_struct(xi)):
                        law.fail(("layers", xi))
                        break
    except BudgetError:
        law.mark("skipped", ("layers",))

    law = laws["algebra multiplication (kleisli)"]
    for p in probes.sizes:
        try:
            tz = M.on_objects(A.carrier)
            tp = M.on_objects(p)
        except BudgetError:
            law.mark("skipped", ("kleisli", p))
            continue
        if tz > budget or tp > budget:
            law.mark("skipped", ("kleisli", p))
            continue
        space = tz ** p
        if space * tp <= budget:
            fs = itertools.product(range(tz), repeat=p)
            cov = "exhaustive"
        else:
            fs = (tuple(rng.randrange(tz) for _ in range(p))
                  for _ in range(max(1, samples // 10)))
            cov = "sampled"
        law.mark(cov, ("kleisli", p))
        for f in fs:
            ext = M.bind(f, p, A.carrier)
            evaluated = tuple(A.structure(code) for code in f)
            pushed = M.on_maps(evaluated, p, A.carrier)
            for xi in range(tp):
                if A.structure(ext(xi)) != A.structure(pushed(xi)):
                    law.fail(("kleisli", p, f, xi))
                    break

    return [laws[key].report() for key in laws]


def integral(A: AlgebraHandle, f, mu: int) -> int:
    """structure(T f (mu)) for a table f: X -> carrier."""
    push = A.monad.on_maps(tuple(f), len(f), A.carrier)
    return A.structure(push(mu))


def is_algebra_homomorphism_via_integral(h, A: AlgebraHandle,
                                         B: AlgebraHandle,
                                         probes: ProbeFamily = DEFAULT_PROBES,
                                         budget: int = ENUM_BUDGET,
                                         bit_budget: int = CODE_BIT_BUDGET,
                                         seed: int = 0,
                                         samples: int = 100) -> dict:
    """h preserves integrals iff it satisfies the structure-map square;
    both routes are evaluated and must agree in verdict."""
    rng = random.Random(seed)
    M = A.monad
    h = tuple(h)

    square_ok, square_witness = True, None
    ta = M.on_objects(A.carrier)
    elems, cov = _element_probe(ta, budget, bit_budget, rng, samples)
    coverage = cov
    th = M.on_maps(h, A.carrier, B.carrier)
    for xi in elems or ():
        if h[A.structure(xi)] != B.structure(th(xi)):
            square_ok, square_witness = False, ("square", xi)
            break

    integral_ok, integral_witness = True, None
    sizes = tuple(probes.sizes) + ((A.carrier,)
                                   if A.carrier not in probes.sizes else ())
    for x_size in sizes:
        tx = M.on_objects(x_size)
        space = A.carrier ** x_size
        if space * tx <= budget:
            fs = itertools.product(range(A.carrier), repeat=x_size)
        else:
            coverage = "sampled"
            fs = (tuple(rng.randrange(A.carrier) for _ in range(x_size))
                  for _ in range(max(1, samples // 10)))
        for f in fs:
            hf = tuple(h[v] for v in f)
            mus, cov = _element_probe(tx, budget, bit_budget, rng, samples)
            if mus is None:
                continue
            if cov == "sampled":
                coverage = "sampled"
            for mu in mus:
                if h[integral(A, f, mu)] != integral(B, hf, mu):
                    integral_ok = False
                    if integral_witness is None:
                        integral_witness = ("integral", x_size, f, mu)
                    break
            if not integral_ok:
                break
        if not integral_ok:
            break

    if square_ok != integral_ok and coverage == "exhaustive":
        raise TableError("integral and square routes disagree",
                         witness=(square_witness, integral_witness))
    return {"ok": square_ok and integral_ok,
            "witness": square_witness or integral_witness,
            "square_ok": square_ok, "integral_ok": integral_ok,
            "coverage": coverage}


# ---------------------------------------------------------------------------
# vector-valued Fubini

def f_lower(A: AlgebraHandle, f, x_size: int, y_size: int):
    """(x, nu) -> integral of f(x, -) against nu."""
    f = tuple(f)

    def lower(x: int, nu: int) -> int:
        row = tuple(f[pair_code(x, y, y_size)] for y in range(y_size))
        return integral(A, row, nu)
    return lower


def f_upper(A: AlgebraHandle, f, x_size: int, y_size: int):
    """(mu, y) -> integral of f(-, y) against mu."""
    f = tuple(f)

    def upper(mu: int, y: int) -> int:
        col = tuple(f[pair_code(x, y, y_size)] for x in range(x_size))
        return integral(A, col, mu)
    return upper


def fubini_check(A: AlgebraHandle, f, x_size: int, y_size: int,
                 mu: int, nu: int) -> dict:
    """Both iterated integrals and the direct integral against the tensor
    of the pair; all three must agree."""
    f = tuple(f)
    lower = f_lower(A, f, x_size, y_size)
    upper = f_upper(A, f, x_size, y_size)
    iterated_lower = integral(
        A, tuple(lower(x, nu) for x in range(x_size)), mu)
    iterated_upper = integral(
        A, tuple(upper(mu, y) for y in range(y_size)), nu)
    product = otimes(A.monad, x_size, y_size)(mu, nu)
    direct = integral(A, f, product)
    ok = iterated_lower == iterated_upper == direct
    return {"ok": ok, "iterated_lower": iterated_lower,
            "iterated_upper": iterated_upper, "direct": direct,
            "witness": None if ok else (x_size, y_size, f, mu, nu)}


# ---------------------------------------------------------------------------
# relative tensors and extenders

def relative_tensors(delta: MonadMorphism, x_size: int, y_size: int):
    """The two canonical maps MX x LY -> M(X x Y) through a morphism
    from L to M; composites with the morphism component are fused through
    bind so no unrepresentable layer is materialized."""
    L, M = delta.source, delta.target
    mx = M.on_objects(x_size)
    xy = x_size * y_size

    # forward: L-strength on the right, then M-strength inside, then flatten
    prime = strength_left(M, x_size, y_size)
    prime_table = tuple(prime(mu, y) for mu in range(mx)
                        for y in range(y_size))
    second_outer = strength_right(L, mx, y_size)
    comp_outer = delta.component(mx * y_size)
    ext_fwd = M.bind(prime_table, mx * y_size, xy)

    def forward(mu: int, ell: int) -> int:
        return ext_fwd(comp_outer(second_outer(mu, ell)))

    # backward: M-strength outside an L-layer, convert pointwise, flatten
    ly = L.on_objects(y_size)
    second = strength_right(L, x_size, y_size)
    comp_xy = delta.component(xy)
    second_table = tuple(comp_xy(second(x, ell)) for x in range(x_size)
                         for ell in range(ly))
    prime_outer = strength_left(M, x_size, ly)
    ext_bwd = M.bind(second_table, x_size * ly, xy)

    def backward(mu: int, ell: int) -> int:
        return ext_bwd(prime_outer(mu, ell))

    return forward, backward


def extender(A: AlgebraHandle, x_size: int):
    """f -> (mu -> integral of f against mu)."""
    def omega(f):
        f = tuple(f)
        return lambda mu: integral(A, f, mu)
    return omega


def is_relatively_commutative(delta: MonadMorphism,
                              probes: ProbeFamily = DEFAULT_PROBES,
                              budget: int = ENUM_BUDGET, seed: int = 0,
                              samples: int = 400,
                              algebras=None, ring: FiniteRing | None = None
                              ) -> dict:
    """Pointwise tensor agreement, plus the equivalent reformulation that
    every extender is linear for the induced module structures.

    The source of the morphism must be the free-module monad of `ring`
    for the extender half; pass algebras of the target monad to probe
    (defaults to free ones on the probe sizes).
    """
    rng = random.Random(seed)
    L, M = delta.source, delta.target

    tensors_ok, tensor_witness = True, None
    coverage = "exhaustive"
    for xs in probes.sizes:
        for ys in probes.sizes:
            fwd, bwd = relative_tensors(delta, xs, ys)
            mx, ly = M.on_objects(xs), L.on_objects(ys)
            if mx * ly <= budget:
                pairs = itertools.product(range(mx), range(ly))
            else:
                coverage = "sampled"
                pairs = ((rng.randrange(mx), rng.randrange(ly))
                         for _ in range(samples))
            for mu, ell in pairs:
                if fwd(mu, ell) != bwd(mu, ell):
                    tensors_ok = False
                    if tensor_witness is None:
                        tensor_witness = (xs, ys, mu, ell)
                    break
            if not tensors_ok:
                break
        if not tensors_ok:
            break

    extenders_ok, extender_witness = True, None
    if ring is not None:
        if algebras is None:
            algebras = [free_algebra_handle(M, n) for n in probes.sizes
                        if M.on_objects(n) <= 64]
        for A in algebras:
            induced = induced_algebra_functor(delta, A)
            carrier_mod = algebra_to_module(induced, ring,
                                            name=f"induced({A.name})")
            for xs in probes.sizes:
                mx = M.on_objects(xs)
                work = ring.size * A.carrier ** (2 * xs) * max(mx, 1)
                if mx > budget or work > 300_000:
                    continue
                omega = extender(A, xs)
                # pointwise module structures on both function spaces
                for r in range(ring.size):
                    for f1 in itertools.product(range(A.carrier),
                                                repeat=xs):
                        for f2 in itertools.product(range(A.carrier),
                                                    repeat=xs):
                            sum_f = tuple(carrier_mod.add[a][b]
                                          for a, b in zip(f1, f2))
                            lhs = [omega(sum_f)(mu) for mu in range(mx)]
                            rhs = [carrier_mod.add[omega(f1)(mu)]
                                   [omega(f2)(mu)] for mu in range(mx)]
                            if lhs != rhs:
                                extenders_ok = False
                                if extender_witness is None:
                                    extender_witness = ("add", A.name, xs,
                                                        f1, f2)
                        scaled = tuple(carrier_mod.act[r][a] for a in f1)
                        lhs = [omega(scaled)(mu) for mu in range(mx)]
                        rhs = [carrier_mod.act[r][omega(f1)(mu)]
                               for mu in range(mx)]
                        if lhs != rhs:
                            extenders_ok = False
                            if extender_witness is None:
                                extender_witness = ("act", A.name, xs, r, f1)

    return {"tensors_ok": tensors_ok, "tensor_witness": tensor_witness,
            "extenders_ok": extenders_ok if ring is not None else None,
            "extender_witness": extender_witness,
            "equivalent": (tensors_ok == extenders_ok
                           if ring is not None else None),
            "coverage": coverage}
