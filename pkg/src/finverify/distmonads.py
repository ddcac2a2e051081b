"""Distribution monads on finite sets, landing in double duals.

Over a finite commutative ring the free module on n points is reflexive
and its double dual carries the same canonical indices as the module
itself, so the distribution layer over a set of size n is again the set
of width-n coefficient codes, this time read with the leftmost digit
most significant to match the hom-order indices of finalg. The monad
operations are the formal-sum operations in that reading, and the
comparison from the little-endian formal-sum monad is digit reversal.
check_codes_match_hom_order re-derives this identification against the
dense double-dual construction instead of assuming it.

An abstract distribution monad packages a set monad together with that
comparison (delta) and a per-module landing in the double dual (xi).
A distribution integrates scalar functions by coefficient combination,
module-valued functions through its double-dual value, and, when that
value is an evaluation functional of a separated module, through the
unique evaluating element. Every law here is quantified exhaustively
within the enumeration budget, by seeded samples when only the codes
are representable, and recorded as a skip otherwise.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import BudgetError, TableError
from .finalg import (FiniteModule, FiniteRing, LinearMap, dd_unit, double_dual,
                     dual, dual_map, enumerate_module_structures, free_index,
                     free_module, hom_module, image, is_reflexive,
                     is_separated, linear_map, probe_modules)
from .monadkit import (CODE_BIT_BUDGET, ENUM_BUDGET, PROBE_SIZES,
                       AlgebraHandle, MonadHandle, MonadMorphism,
                       _element_probe, _Law, check_algebra,
                       free_algebra_handle, free_module_monad,
                       identity_morphism, induced_algebra_functor,
                       algebra_to_module, is_algebra_homomorphism_via_integral,
                       otimes)

__all_reexports__ = (free_module_monad, is_reflexive, is_separated)

# Largest distribution layer whose module tables are materialized when a
# completeness question needs the layer as an honest finite module.
LAYER_CAP = 256


def reversed_code(code: int, width: int, base: int) -> int:
    """The same digit string read from the other end."""
    out = 0
    for _ in range(width):
        code, d = divmod(code, base)
        out = out * base + d
    return out


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class Functional:
    """An element of the dual of a module, kept with its value table."""
    domain_module: FiniteModule
    table: tuple

    def __call__(self, x: int) -> int:
        return self.table[x]


def functional(module: FiniteModule, table,
               budget: int = ENUM_BUDGET) -> Functional:
    """Wrap a value table after checking it sits in the dual."""
    table = tuple(table)
    if table not in dual(module, budget).index_by_table:
        raise TableError("the table is not a linear functional",
                         witness=table)
    return Functional(domain_module=module, table=table)


def functional_from_index(module: FiniteModule, index: int,
                          budget: int = ENUM_BUDGET) -> Functional:
    return Functional(module, dual(module, budget).maps[index].table)


def functional_index(fn: Functional, budget: int = ENUM_BUDGET) -> int:
    return dual(fn.domain_module, budget).index_by_table[fn.table]


@dataclass(frozen=True, eq=False)
class AbstractDistMonad:
    """A set monad with a comparison from formal sums and a per-module
    landing in the double dual.

    delta converts a little-endian formal-sum code over a set into an
    M-code over the same set; xi(E) sends an M-code over the carrier of
    E to the index of a functional on the dual of E. check_xi_laws
    quantifies the defining diagrams on probe modules.
    """
    ring: FiniteRing
    monad: MonadHandle
    delta: MonadMorphism
    xi: callable
    name: str = "dist"

    def __repr__(self) -> str:
        return f"AbstractDistMonad({self.name})"


@dataclass(frozen=True)
class PettisResult:
    """Outcome of looking for an element that evaluates like a
    double-dual integral value: found carries the unique preimage of
    the Dunford value under the evaluation unit."""
    status: str  # found / not-found / not-separated
    value: int | None
    dunford: int


@dataclass(frozen=True)
class ExtensionResult:
    """Outcome of extending a function on points to a linear map on the
    distribution layer over those points."""
    status: str  # found / none / not-unique
    map: LinearMap | None
    witness: object = None


# ---------------------------------------------------------------------------
# the distribution monad and its relatives

def nat_dist_monad(ring: FiniteRing, budget: int = ENUM_BUDGET
                   ) -> AbstractDistMonad:
    """Distributions over the ring as an abstract distribution monad.

    The layer over n points is the set of width-n coefficient codes,
    leftmost digit most significant, matching the carrier indices of
    double_dual(free_module(ring, n)); unit sends a point to its Dirac
    code, multiplication evaluates a formal sum of codes, and bind
    fuses both so deep layers never materialize.
    """
    R = ring.size
    add = ring.add
    mul = ring.mul

    def code_add(a: int, b: int) -> int:
        out, w = 0, 1
        while a or b:
            a, da = divmod(a, R)
            b, db = divmod(b, R)
            out += add[da][db] * w
            w *= R
        return out

    def code_scale(c: int, a: int) -> int:
        out, w = 0, 1
        while a:
            a, d = divmod(a, R)
            if d:
                out += mul[c][d] * w
            w *= R
        return out

    def on_objects(n: int) -> int:
        return R ** n

    def on_maps(f, dom: int, cod: int):
        def push(code: int) -> int:
            acc = [0] * cod
            p = dom - 1
            while code:
                code, d = divmod(code, R)
                if d:
                    t = f[p]
                    acc[t] = add[acc[t]][d]
                p -= 1
            out = 0
            for v in acc:
                out = out * R + v
            return out
        return push

    def unit(n: int):
        return lambda x: R ** (n - 1 - x)

    def mult(n: int):
        t1 = R ** n

        # the digit position of the outer code is itself an inner code
        def flatten(code: int) -> int:
            acc = 0
            q = t1 - 1
            while code:
                code, c = divmod(code, R)
                if c:
                    acc = code_add(acc, code_scale(c, q))
                q -= 1
            return acc
        return flatten

    def bind(f, dom: int, cod: int):
        def ext(code: int) -> int:
            acc = 0
            p = dom - 1
            while code:
                code, c = divmod(code, R)
                if c:
                    acc = code_add(acc, code_scale(c, f[p]))
                p -= 1
            return acc
        return ext

    handle = MonadHandle(name=f"nat-dist({ring.name})", on_objects=on_objects,
                         on_maps=on_maps, unit=unit, mult=mult, bind=bind)

    def component(n: int):
        return lambda code: reversed_code(code, n, R)

    delta = MonadMorphism(source=free_module_monad(ring), target=handle,
                          component=component, name=f"delta({ring.name})")

    landings: dict = {}

    def xi(module: FiniteModule):
        if module not in landings:
            dd = double_dual(module, budget)
            units = dd_unit(module, budget).table
            madd, mact = dd.module.add, dd.module.act
            n = module.size

            def land(code: int) -> int:
                acc = 0
                e = n - 1
                while code:
                    code, c = divmod(code, R)
                    if c:
                        acc = madd[acc][mact[c][units[e]]]
                    e -= 1
                return acc
            landings[module] = land
        return landings[module]

    return AbstractDistMonad(ring=ring, monad=handle, delta=delta, xi=xi,
                             name=f"nat-dist({ring.name})")


def formal_sum_landing(module: FiniteModule, budget: int = ENUM_BUDGET):
    """Little-endian coefficient codes over the carrier of a module into
    its double dual, as coefficient combinations of evaluation values."""
    R = module.ring.size
    dd = double_dual(module, budget)
    units = dd_unit(module, budget).table
    madd, mact = dd.module.add, dd.module.act

    def land(code: int) -> int:
        acc, e = 0, 0
        while code:
            code, c = divmod(code, R)
            if c:
                acc = madd[acc][mact[c][units[e]]]
            e += 1
        return acc
    return land


def free_dist_monad(ring: FiniteRing, budget: int = ENUM_BUDGET
                    ) -> AbstractDistMonad:
    """The formal-sum monad packaged as a distribution monad: delta is
    the identity and xi is the coefficientwise landing."""
    L = free_module_monad(ring)
    landings: dict = {}

    def xi(module: FiniteModule):
        if module not in landings:
            landings[module] = formal_sum_landing(module, budget)
        return landings[module]

    return AbstractDistMonad(ring=ring, monad=L, delta=identity_morphism(L),
                             xi=xi, name=f"free-dist({ring.name})")


# ---------------------------------------------------------------------------
# scalar integration

def scalar_integral(ring: FiniteRing, mu: int, f) -> int:
    """The value of a distribution code on a scalar function: the
    coefficient combination of the function values."""
    R = ring.size
    f = tuple(f)
    if not 0 <= mu < R ** len(f):
        raise TableError("distribution code out of range", witness=mu)
    acc = 0
    x = len(f) - 1
    while mu:
        mu, c = divmod(mu, R)
        if c:
            acc = ring.add[acc][ring.mul[c][f[x]]]
        x -= 1
    return acc


def fubini_product(adm: AbstractDistMonad, mu: int, nu: int, x_size: int,
                   y_size: int, budget: int = ENUM_BUDGET) -> tuple:
    """Strength product of two distribution codes, with scalar checks.

    Every scalar function on the pair set is integrated in both
    iterated orders and directly against the product; all three values
    must agree. When the square of the pair layer also fits, the
    product is confirmed to be the only code whose direct integrals
    match. Returns (product, report).
    """
    ring = adm.ring
    R = ring.size
    xy = x_size * y_size
    if R ** xy > budget:
        raise BudgetError("the function space over the pair set is too big",
                          needed=R ** xy, budget=budget)
    product = otimes(adm.monad, x_size, y_size)(mu, nu)
    funs = list(itertools.product(range(R), repeat=xy))
    directs = []
    report = {"ok": True, "witness": None, "unique": None,
              "checked_functions": len(funs)}
    for f in funs:
        rows = tuple(scalar_integral(ring, nu, f[x * y_size:(x + 1) * y_size])
                     for x in range(x_size))
        lower = scalar_integral(ring, mu, rows)
        cols = tuple(scalar_integral(ring, mu, f[y::y_size])
                     for y in range(y_size))
        upper = scalar_integral(ring, nu, cols)
        direct = scalar_integral(ring, product, f)
        directs.append(direct)
        if not lower == upper == direct:
            report["ok"] = False
            report["witness"] = (f, lower, upper, direct)
            break
    if report["ok"] and (R ** xy) * len(funs) <= budget * 4:
        rivals = [w for w in range(R ** xy)
                  if all(scalar_integral(ring, w, f) == d
                         for f, d in zip(funs, directs))]
        report["unique"] = rivals == [product]
        if not report["unique"]:
            report["witness"] = tuple(rivals)
    return product, report


# ---------------------------------------------------------------------------
# double dualization as a monad on modules

@dataclass(frozen=True, eq=False)
class DualizationMonadHandle:
    """Double dualization of modules with evaluation units.

    unit(E) is the evaluation map into the double dual; mult(E) is the
    dual of the evaluation of the dual, contracting a fourfold dual to
    the double dual. check_dualization_monad quantifies the laws.
    """
    ring: FiniteRing
    budget: int = ENUM_BUDGET

    def on_objects(self, module: FiniteModule) -> FiniteModule:
        return double_dual(module, self.budget).module

    def on_maps(self, f: LinearMap) -> LinearMap:
        return dual_map(dual_map(f, self.budget), self.budget)

    def unit(self, module: FiniteModule) -> LinearMap:
        return dd_unit(module, self.budget)

    def mult(self, module: FiniteModule) -> LinearMap:
        return dual_map(dd_unit(dual(module, self.budget).module,
                                self.budget), self.budget)

    def __repr__(self) -> str:
        return f"DualizationMonadHandle({self.ring.name})"


def dualization_monad(ring: FiniteRing,
                      budget: int = ENUM_BUDGET) -> DualizationMonadHandle:
    return DualizationMonadHandle(ring=ring, budget=budget)


def check_dualization_monad(H: DualizationMonadHandle, modules=None,
                            seed: int = 0, max_maps: int = 3) -> list:
    """Unit and multiplication laws of double dualization on modules.

    All identities compare value tables, so freshly built hom modules
    only need to agree structurally; dual chains that would exceed the
    budget are recorded as skips.
    """
    rng = random.Random(seed)
    if modules is None:
        modules = list(probe_modules(H.ring))
    laws = {key: _Law(key) for key in (
        "unit linearity", "unit evaluation", "unit naturality",
        "left unit", "right unit", "associativity")}

    for E in modules:
        try:
            dd = double_dual(E, H.budget)
            unit = dd_unit(E, H.budget)
            functionals = dual(E, H.budget)
        except BudgetError:
            for law in laws.values():
                law.mark("skipped", E.name)
            continue
        he = dd.module

        law = laws["unit linearity"]
        law.mark("exhaustive", E.name)
        for a in range(E.size):
            for b in range(E.size):
                if unit.table[E.add[a][b]] != he.add[unit.table[a]][unit.table[b]]:
                    law.fail((E.name, "add", a, b))
            for r in range(H.ring.size):
                if unit.table[E.act[r][a]] != he.act[r][unit.table[a]]:
                    law.fail((E.name, "act", r, a))

        law = laws["unit evaluation"]
        law.mark("exhaustive", E.name)
        for e in range(E.size):
            evals = dd.maps[unit.table[e]]
            for phi in range(functionals.size):
                if evals.table[phi] != functionals.apply(phi, e):
                    law.fail((E.name, e, phi))
                    break

        try:
            kappa = H.mult(E)
        except BudgetError:
            for key in ("left unit", "right unit", "associativity"):
                laws[key].mark("skipped", E.name)
            continue

        law = laws["left unit"]
        try:
            outer_unit = dd_unit(he, H.budget)
        except BudgetError:
            law.mark("skipped", E.name)
        else:
            law.mark("exhaustive", E.name)
            for z in range(he.size):
                if kappa.table[outer_unit.table[z]] != z:
                    law.fail((E.name, z))
                    break

        law = laws["right unit"]
        try:
            lifted_unit = H.on_maps(unit)
        except BudgetError:
            law.mark("skipped", E.name)
        else:
            law.mark("exhaustive", E.name)
            for z in range(he.size):
                if kappa.table[lifted_unit.table[z]] != z:
                    law.fail((E.name, z))
                    break

        law = laws["associativity"]
        try:
            inner_kappa = H.mult(he)
            lifted_kappa = H.on_maps(kappa)
        except BudgetError:
            law.mark("skipped", E.name)
        else:
            law.mark("exhaustive", E.name)
            for z in range(len(lifted_kappa.table)):
                if kappa.table[inner_kappa.table[z]] != kappa.table[lifted_kappa.table[z]]:
                    law.fail((E.name, z))
                    break

    law = laws["unit naturality"]
    for A in modules:
        for B in modules:
            try:
                homs = hom_module(A, B, H.budget)
                unit_a = dd_unit(A, H.budget)
                unit_b = dd_unit(B, H.budget)
            except BudgetError:
                law.mark("skipped", (A.name, B.name))
                continue
            if homs.size <= max_maps + 1:
                picks = list(range(homs.size))
                cov = "exhaustive"
            else:
                picks = [0] + [rng.randrange(homs.size)
                               for _ in range(max_maps)]
                cov = "sampled"
            law.mark(cov, (A.name, B.name))
            for idx in picks:
                f = homs.maps[idx]
                try:
                    lifted = H.on_maps(f)
                except BudgetError:
                    law.mark("skipped", (A.name, B.name, idx))
                    continue
                for a in range(A.size):
                    if lifted.table[unit_a.table[a]] != unit_b.table[f.table[a]]:
                        law.fail((A.name, B.name, idx, a))
                        break

    return [laws[key].report() for key in laws]


def check_codes_match_hom_order(ring: FiniteRing, ranks=(0, 1, 2),
                                budget: int = ENUM_BUDGET) -> dict:
    """The identification behind the distribution codes, re-derived.

    On free modules of the probed ranks the evaluation unit must be the
    identity permutation of the carrier, and the functor action of the
    distribution monad must agree entrywise with the double dual of the
    linear extension of each map between the probed ranks.
    """
    D = nat_dist_monad(ring, budget).monad
    for n in ranks:
        free = free_module(ring, n, budget=budget)
        unit = dd_unit(free, budget)
        if unit.table != tuple(range(free.size)):
            return {"ok": False, "witness": ("unit", n)}
    for n in ranks:
        src = free_module(ring, n, budget=budget)
        for m in ranks:
            tgt = free_module(ring, m, budget=budget)
            basis = tuple(free_index(ring.size, m,
                                     tuple(int(i == t) for i in range(m)))
                          for t in range(m))
            for f in itertools.product(range(m), repeat=n):
                table = []
                for v in range(src.size):
                    img = 0
                    vec = _free_tuple(ring.size, n, v)
                    for x, c in enumerate(vec):
                        img = tgt.add[img][tgt.act[c][basis[f[x]]]]
                    table.append(img)
                lifted = dual_map(dual_map(
                    linear_map(src, tgt, tuple(table)), budget), budget)
                push = D.on_maps(f, n, m)
                if lifted.table != tuple(push(c) for c in range(src.size)):
                    return {"ok": False, "witness": ("map", n, m, f)}
    return {"ok": True, "witness": None, "ranks": tuple(ranks)}


def _free_tuple(base: int, rank: int, index: int) -> tuple:
    digits = []
    for _ in range(rank):
        index, d = divmod(index, base)
        digits.append(d)
    return tuple(reversed(digits))


# ---------------------------------------------------------------------------
# laws of the landing family

def check_xi_laws(adm: AbstractDistMonad, modules=None,
                  budget: int = ENUM_BUDGET,
                  bit_budget: int = CODE_BIT_BUDGET,
                  seed: int = 0, samples: int = 64) -> list:
    """Defining diagrams of the double-dual landing on probe modules.

    landing triangle: xi after delta agrees with the coefficientwise
    landing of formal sums. unit: Dirac codes land on evaluation
    values. multiplication: flattening before landing agrees with
    landing twice and contracting, with the middle layer materialized
    only when it fits the budget.
    """
    rng = random.Random(seed)
    if modules is None:
        modules = list(probe_modules(adm.ring))
    laws = {key: _Law(key) for key in
            ("landing triangle", "landing unit", "landing multiplication")}
    R = adm.ring.size
    H = dualization_monad(adm.ring, budget)

    for E in modules:
        n = E.size
        try:
            land = adm.xi(E)
            sums = formal_sum_landing(E, budget)
            units = dd_unit(E, budget).table
        except BudgetError:
            for law in laws.values():
                law.mark("skipped", E.name)
            continue

        law = laws["landing triangle"]
        convert = adm.delta.component(n)
        elems, cov = _element_probe(R ** n, budget, bit_budget, rng, samples)
        law.mark(cov, E.name)
        for code in elems or ():
            if land(convert(code)) != sums(code):
                law.fail((E.name, code))
                break

        law = laws["landing unit"]
        law.mark("exhaustive", E.name)
        dirac = adm.monad.unit(n)
        for e in range(n):
            if land(dirac(e)) != units[e]:
                law.fail((E.name, e))
                break

        law = laws["landing multiplication"]
        try:
            layer = adm.monad.on_objects(n)
            if layer > budget:
                law.mark("skipped", E.name)
                continue
            he = double_dual(E, budget).module
            kappa = H.mult(E)
            land_he = adm.xi(he)
            land_table = tuple(land(code) for code in range(layer))
            push = adm.monad.on_maps(land_table, layer, he.size)
            flatten = adm.monad.mult(n)
            double_layer = adm.monad.on_objects(layer)
            eff = samples if layer <= 2048 else max(4, 200_000 // layer)
            elems, cov = _element_probe(double_layer, budget, bit_budget,
                                        rng, eff)
            law.mark(cov, E.name)
            for code in elems or ():
                if land(flatten(code)) != kappa.table[land_he(push(code))]:
                    law.fail((E.name, code))
                    break
        except BudgetError:
            law.mark("skipped", E.name)

    return [laws[key].report() for key in laws]


def check_free_algebra_transport(adm: AbstractDistMonad, sizes=(1, 2),
                                 budget: int = ENUM_BUDGET,
                                 bit_budget: int = CODE_BIT_BUDGET,
                                 seed: int = 0, samples: int = 64) -> list:
    """Carrying the free dualization algebra on a free module back over
    the landing gives the free distribution algebra on its points."""
    rng = random.Random(seed)
    H = dualization_monad(adm.ring, budget)
    law = _Law("free algebra transport")
    for n in sizes:
        try:
            free = free_module(adm.ring, n, budget=budget)
            he = double_dual(free, budget).module
            kappa = H.mult(free)
            land = adm.xi(he)
        except BudgetError:
            law.mark("skipped", n)
            continue
        if he.size != adm.monad.on_objects(n):
            law.fail(("carrier", n))
            continue
        flatten = adm.monad.mult(n)
        double_layer = adm.monad.on_objects(he.size)
        eff = samples if he.size <= 2048 else max(4, 200_000 // he.size)
        elems, cov = _element_probe(double_layer, budget, bit_budget,
                                    rng, eff)
        law.mark(cov, n)
        for code in elems or ():
            if kappa.table[land(code)] != flatten(code):
                law.fail((n, code))
                break
    return [law.report()]


# ---------------------------------------------------------------------------
# Dunford and Pettis integration

def dunford_integral(adm: AbstractDistMonad, f, mu: int,
                     module: FiniteModule) -> int:
    """Double-dual value of a module-valued function on a distribution:
    push the code along the function, then land."""
    f = tuple(f)
    push = adm.monad.on_maps(f, len(f), module.size)
    return adm.xi(module)(push(mu))


def pettis_integral(adm: AbstractDistMonad, f, mu: int,
                    module: FiniteModule,
                    budget: int = ENUM_BUDGET) -> PettisResult:
    """Search for the unique module element evaluating to the
    double-dual value; only separated modules can answer."""
    value = dunford_integral(adm, f, mu, module)
    unit = dd_unit(module, budget)
    if not unit.is_injective():
        return PettisResult(status="not-separated", value=None, dunford=value)
    for e in range(module.size):
        if unit.table[e] == value:
            return PettisResult(status="found", value=e, dunford=value)
    return PettisResult(status="not-found", value=None, dunford=value)


def pettis_report(module: FiniteModule, adm: AbstractDistMonad,
                  budget: int = ENUM_BUDGET,
                  bit_budget: int = CODE_BIT_BUDGET,
                  seed: int = 0, samples: int = 400) -> dict:
    """Separation plus containment of the landing image in the image of
    the evaluation unit, with honest coverage of the layer."""
    unit = dd_unit(module, budget)
    separated = unit.is_injective()
    mask = image(unit).mask
    land = adm.xi(module)
    layer = adm.monad.on_objects(module.size)
    rng = random.Random(seed)
    if layer <= budget:
        codes = range(layer)
        coverage = "exhaustive"
    else:
        dirac = adm.monad.unit(module.size)
        codes = [dirac(e) for e in range(module.size)]
        if layer.bit_length() <= bit_budget:
            codes += [rng.randrange(layer) for _ in range(samples)]
        coverage = "sampled"
    contained, witness = True, None
    for code in codes:
        t = land(code)
        if not mask[t]:
            contained, witness = False, (code, t)
            break
    return {"separated": separated, "contained": contained,
            "pettis": separated and contained, "coverage": coverage,
            "witness": witness, "module": module.name, "monad": adm.name}


def is_pettis(module: FiniteModule, adm: AbstractDistMonad,
              budget: int = ENUM_BUDGET, bit_budget: int = CODE_BIT_BUDGET,
              seed: int = 0, samples: int = 400) -> bool:
    return pettis_report(module, adm, budget, bit_budget, seed,
                         samples)["pettis"]


def pettis_structure(module: FiniteModule, adm: AbstractDistMonad,
                     verify: bool = True,
                     budget: int = ENUM_BUDGET) -> AlgebraHandle:
    """The algebra structure a Pettis module carries: each code goes to
    the unique element evaluating to its landing value."""
    unit = dd_unit(module, budget)
    if not unit.is_injective():
        raise TableError("the module is not separated", witness=module.name)
    back = {t: e for e, t in enumerate(unit.table)}
    land = adm.xi(module)

    def structure(code: int) -> int:
        t = land(code)
        try:
            return back[t]
        except KeyError:
            raise TableError("a landing value escapes the unit image",
                             witness=(code, t)) from None

    algebra = AlgebraHandle(monad=adm.monad, carrier=module.size,
                            structure=structure,
                            name=f"pettis({module.name})")
    if verify:
        reports = check_algebra(algebra, budget=budget)
        bad = [r for r in reports if not r["ok"]]
        if bad:
            raise TableError("the factored structure fails an algebra law",
                             witness=bad[0])
    return algebra


# ---------------------------------------------------------------------------
# distribution algebras and completeness

def dist_module_algebra(adm: AbstractDistMonad,
                        module: FiniteModule) -> AlgebraHandle:
    """A module as an algebra of the distribution monad: codes evaluate
    coefficientwise, leftmost digit on element 0."""
    R = module.ring.size
    madd, mact = module.add, module.act
    n = module.size

    def structure(code: int) -> int:
        acc = 0
        x = n - 1
        while code:
            code, c = divmod(code, R)
            if c:
                acc = madd[acc][mact[c][x]]
            x -= 1
        return acc

    return AlgebraHandle(monad=adm.monad, carrier=n, structure=structure,
                         name=f"{module.name} (dist)")


def enumerate_dist_algebras(adm: AbstractDistMonad, carrier: int,
                            budget: int = ENUM_BUDGET) -> tuple:
    """All algebras of the distribution monad on the given carrier,
    normalized so the empty distribution lands on element 0.

    Brute force over the full function space where it fits; otherwise
    the algebras come from the module structures on the carrier, a
    route the brute-force one confirms wherever both run. Returns
    (algebras, method).
    """
    layer = adm.monad.on_objects(carrier)
    tables = carrier ** layer
    if layer <= budget:
        double_layer = adm.monad.on_objects(layer)
        if double_layer <= budget and tables * double_layer <= budget * 16:
            unit = adm.monad.unit(carrier)
            flatten = adm.monad.mult(carrier)
            found = []
            for table in itertools.product(range(carrier), repeat=layer):
                if table[0] != 0:
                    continue
                if any(table[unit(x)] != x for x in range(carrier)):
                    continue
                push = adm.monad.on_maps(table, layer, carrier)
                if all(table[flatten(code)] == table[push(code)]
                       for code in range(double_layer)):
                    found.append(AlgebraHandle(
                        monad=adm.monad, carrier=carrier,
                        structure=table.__getitem__,
                        name=f"table-algebra({len(found)})"))
            return found, "functions"
    mods = enumerate_module_structures(adm.ring, carrier)
    return [dist_module_algebra(adm, m) for m in mods], "module-structures"


_layer_modules: dict = {}


def induced_layer_module(adm: AbstractDistMonad, n: int,
                         budget: int = ENUM_BUDGET) -> FiniteModule:
    """Module tables on the distribution layer over n points, read off
    the free algebra through delta."""
    layer = adm.monad.on_objects(n)
    if layer > min(LAYER_CAP, budget):
        raise BudgetError("the layer is too large to materialize as tables",
                          needed=layer, budget=min(LAYER_CAP, budget))
    if (adm, n) not in _layer_modules:
        induced = induced_algebra_functor(adm.delta,
                                          free_algebra_handle(adm.monad, n))
        _layer_modules[adm, n] = algebra_to_module(
            induced, adm.ring, name=f"layer({adm.name}, {n})")
    return _layer_modules[adm, n]


def linear_extension(adm: AbstractDistMonad, f, module: FiniteModule,
                     budget: int = ENUM_BUDGET) -> ExtensionResult:
    """Search the linear maps from the layer over the points of f for
    the ones restricting to f along Diracs."""
    f = tuple(f)
    n = len(f)
    layer_module = induced_layer_module(adm, n, budget)
    homs = hom_module(layer_module, module, budget)
    dirac = adm.monad.unit(n)
    points = [dirac(x) for x in range(n)]
    matches = [m for m in homs.maps
               if all(m.table[points[x]] == f[x] for x in range(n))]
    if not matches:
        return ExtensionResult(status="none", map=None, witness=f)
    if len(matches) > 1:
        return ExtensionResult(status="not-unique", map=None,
                               witness=(matches[0].table, matches[1].table))
    return ExtensionResult(status="found", map=matches[0])


def is_dist_complete(module: FiniteModule, adm: AbstractDistMonad,
                     probe_sizes=PROBE_SIZES,
                     budget: int = ENUM_BUDGET) -> dict:
    """For each probed point count, restriction along Diracs must be a
    bijection from linear maps on the layer to functions on the points.

    The layer carries the module structure induced through delta; the
    report records each size as bijective, failed with a witness, or
    skipped when the layer cannot be materialized.
    """
    sizes: dict = {}
    complete = True
    touched = False
    for n in probe_sizes:
        # the hom search walks about size**n candidate maps over the layer
        if module.size ** n * adm.monad.on_objects(n) > budget * 16:
            sizes[n] = {"status": "skipped"}
            continue
        try:
            layer_module = induced_layer_module(adm, n, budget)
            homs = hom_module(layer_module, module, budget)
        except BudgetError:
            sizes[n] = {"status": "skipped"}
            continue
        dirac = adm.monad.unit(n)
        points = [dirac(x) for x in range(n)]
        seen: dict = {}
        witness = None
        for idx in range(homs.size):
            key = tuple(homs.maps[idx].table[p] for p in points)
            if key in seen:
                witness = ("collision", seen[key], idx)
                break
            seen[key] = idx
        total = module.size ** n
        bijective = witness is None and len(seen) == total
        if witness is None and len(seen) != total:
            for g in itertools.product(range(module.size), repeat=n):
                if g not in seen:
                    witness = ("missing", g)
                    break
        sizes[n] = {"status": "exhaustive", "bijective": bijective,
                    "linear_maps": homs.size, "functions": total,
                    "witness": witness}
        touched = True
        complete = complete and bijective
    return {"complete": complete if touched else None, "sizes": sizes,
            "module": module.name, "monad": adm.name}


def dirac_retraction(adm: AbstractDistMonad, module: FiniteModule,
                     budget: int = ENUM_BUDGET,
                     bit_budget: int = CODE_BIT_BUDGET,
                     seed: int = 0, samples: int = 25) -> dict:
    """The linear retraction of the Dirac map on the module carrier.

    Small layers get the exhaustive treatment: the unique linear map
    restricting to the identity is found by search and returned as an
    algebra. On large layers the double-dual factoring supplies the
    candidate, the retraction identity is checked on every carrier
    element and linearity on sampled codes, and uniqueness is left
    unresolved.
    """
    n = module.size
    layer = adm.monad.on_objects(n)
    if layer <= min(LAYER_CAP, budget):
        res = linear_extension(adm, tuple(range(n)), module, budget)
        if res.status != "found":
            return {"status": res.status, "algebra": None, "unique": False,
                    "coverage": "exhaustive", "laws": (),
                    "witness": res.witness}
        table = res.map.table
        algebra = AlgebraHandle(monad=adm.monad, carrier=n,
                                structure=table.__getitem__,
                                name=f"retraction({module.name})")
        laws = check_algebra(algebra, budget=budget, bit_budget=bit_budget,
                             seed=seed, samples=samples)
        return {"status": "found", "algebra": algebra, "unique": True,
                "coverage": "exhaustive", "laws": laws, "witness": None}

    try:
        algebra = pettis_structure(module, adm, verify=False, budget=budget)
    except TableError as err:
        return {"status": "skipped", "algebra": None, "unique": None,
                "coverage": "skipped", "laws": (), "witness": err.args[0]}
    dirac = adm.monad.unit(n)
    for e in range(n):
        if algebra.structure(dirac(e)) != e:
            return {"status": "failed", "algebra": None, "unique": None,
                    "coverage": "exhaustive", "laws": (),
                    "witness": ("dirac", e)}
    if layer.bit_length() <= bit_budget:
        rng = random.Random(seed)
        induced = induced_algebra_functor(adm.delta,
                                          free_algebra_handle(adm.monad, n))
        R = adm.ring.size
        two = adm.ring.add[1][1]
        for _ in range(samples):
            a = rng.randrange(layer)
            b = rng.randrange(layer)
            code = two * R ** a if a == b else R ** a + R ** b
            s = induced.structure(code)
            if algebra.structure(s) != module.add[algebra.structure(a)][algebra.structure(b)]:
                return {"status": "failed", "algebra": None, "unique": None,
                        "coverage": "sampled", "laws": (),
                        "witness": ("add", a, b)}
            r = rng.randrange(R)
            s = induced.structure(r * R ** a)
            if algebra.structure(s) != module.act[r][algebra.structure(a)]:
                return {"status": "failed", "algebra": None, "unique": None,
                        "coverage": "sampled", "laws": (),
                        "witness": ("act", r, a)}
    laws = check_algebra(algebra, budget=budget, bit_budget=bit_budget,
                         seed=seed, samples=samples)
    return {"status": "found", "algebra": algebra, "unique": None,
            "coverage": "sampled", "laws": laws, "witness": None}


def check_linear_maps_are_homomorphisms(dom_module: FiniteModule,
                                        cod_module: FiniteModule,
                                        dom_algebra: AlgebraHandle,
                                        cod_algebra: AlgebraHandle,
                                        budget: int = ENUM_BUDGET,
                                        **kwargs) -> dict:
    """Every linear map between the carriers respects the two algebra
    structures, checked through the integral route."""
    homs = hom_module(dom_module, cod_module, budget)
    coverage = "exhaustive"
    for idx in range(homs.size):
        res = is_algebra_homomorphism_via_integral(
            homs.maps[idx].table, dom_algebra, cod_algebra,
            budget=budget, **kwargs)
        if res["coverage"] != "exhaustive":
            coverage = res["coverage"]
        if not res["ok"]:
            return {"ok": False, "checked": idx + 1, "coverage": coverage,
                    "witness": (homs.maps[idx].table, res["witness"])}
    return {"ok": True, "checked": homs.size, "coverage": coverage,
            "witness": None}


# ---------------------------------------------------------------------------
# the comparison into distributions

def j_morphism(adm: AbstractDistMonad,
               budget: int = ENUM_BUDGET) -> MonadMorphism:
    """The canonical comparison into the distribution monad of the same
    ring: push a code along the Dirac elements of the free module on
    its points, then land in the double dual."""
    ring = adm.ring

    def component(n: int):
        # the free module is dense, so its table budget is the square
        # of its size; keep component construction within memory
        free = free_module(ring, n, budget=min(budget, 1024))
        basis = tuple(free_index(ring.size, n,
                                 tuple(int(i == x) for i in range(n)))
                      for x in range(n))
        push = adm.monad.on_maps(basis, n, free.size)
        land = adm.xi(free)
        return lambda code: land(push(code))

    return MonadMorphism(source=adm.monad,
                         target=nat_dist_monad(ring, budget).monad,
                         component=component, name=f"j({adm.name})")


def check_j_diagrams(adm: AbstractDistMonad, sizes=PROBE_SIZES,
                     modules=None, budget: int = ENUM_BUDGET,
                     bit_budget: int = CODE_BIT_BUDGET,
                     seed: int = 0, samples: int = 64) -> list:
    """The comparison commutes with delta and with the landings."""
    rng = random.Random(seed)
    ring = adm.ring
    R = ring.size
    target = nat_dist_monad(ring, budget)
    j = j_morphism(adm, budget)
    if modules is None:
        modules = list(probe_modules(ring))
    laws = {key: _Law(key) for key in ("j after delta", "landing after j")}

    law = laws["j after delta"]
    for n in sizes:
        try:
            comp = j.component(n)
        except BudgetError:
            law.mark("skipped", n)
            continue
        convert_m = adm.delta.component(n)
        convert_d = target.delta.component(n)
        elems, cov = _element_probe(R ** n, budget, bit_budget, rng, samples)
        law.mark(cov, n)
        for code in elems or ():
            if comp(convert_m(code)) != convert_d(code):
                law.fail((n, code))
                break

    law = laws["landing after j"]
    for E in modules:
        try:
            comp = j.component(E.size)
            land_m = adm.xi(E)
            land_d = target.xi(E)
        except BudgetError:
            law.mark("skipped", E.name)
            continue
        layer = adm.monad.on_objects(E.size)
        elems, cov = _element_probe(layer, budget, bit_budget, rng, samples)
        law.mark(cov, E.name)
        for code in elems or ():
            if land_d(comp(code)) != land_m(code):
                law.fail((E.name, code))
                break

    return [laws[key].report() for key in laws]


def j_uniqueness_report(adm: AbstractDistMonad, sizes=(0, 1, 2),
                        modules=None, budget: int = ENUM_BUDGET) -> dict:
    """Exhaust the per-size tables satisfying the comparison constraints
    and confirm the canonical component is the only one.

    Constraints at size n: Diracs to Diracs, the same conversion of
    formal sums, commuting with the functor action of every endomap of
    n, and compatible landings on probe modules with carrier n.
    """
    ring = adm.ring
    R = ring.size
    target = nat_dist_monad(ring, budget)
    j = j_morphism(adm, budget)
    if modules is None:
        modules = list(probe_modules(ring))
    per_size: dict = {}
    all_unique = True
    for n in sizes:
        layer = adm.monad.on_objects(n)
        dn = R ** n
        if layer > budget or dn ** layer > budget:
            per_size[n] = {"status": "skipped"}
            continue
        jn = tuple(j.component(n)(code) for code in range(layer))
        dirac_m = adm.monad.unit(n)
        dirac_d = target.monad.unit(n)
        convert_m = adm.delta.component(n)
        convert_d = target.delta.component(n)
        mods_n = [E for E in modules if E.size == n]
        land_d = {E.name: target.xi(E) for E in mods_n}
        land_m = {E.name: adm.xi(E) for E in mods_n}
        endos = [(adm.monad.on_maps(f, n, n), target.monad.on_maps(f, n, n))
                 for f in itertools.product(range(n), repeat=n)]
        matches = []
        for cand in itertools.product(range(dn), repeat=layer):
            if any(cand[dirac_m(x)] != dirac_d(x) for x in range(n)):
                continue
            if any(cand[convert_m(code)] != convert_d(code)
                   for code in range(dn)):
                continue
            ok = all(cand[push_m(code)] == push_d(cand[code])
                     for push_m, push_d in endos for code in range(layer))
            if ok:
                ok = all(land_d[E.name](cand[code]) == land_m[E.name](code)
                         for E in mods_n for code in range(layer))
            if ok:
                matches.append(cand)
                if len(matches) > 2:
                    break
        per_size[n] = {"status": "exhaustive", "count": len(matches),
                       "unique": matches == [jn],
                       "matches_canonical": jn in matches}
        all_unique = all_unique and matches == [jn]
    return {"unique": all_unique, "sizes": per_size, "monad": adm.name}
