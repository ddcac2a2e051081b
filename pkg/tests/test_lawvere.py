import itertools

import pytest
from hypothesis import given, settings, strategies as st

from finverify.errors import TableError
from finverify.finalg import (
    bilinearity_failure,
    corpus_rings,
    enumerate_homs,
    free_module,
    make_zmod,
    probe_modules,
    ring_by_spec,
    ring_module,
    tensor_product,
)
from finverify.lawvere import (
    Op,
    check_normal_algebra,
    check_theory_axioms,
    free_algebra_coend,
    free_algebra_matches_free_module,
    is_commutative_theory,
    module_from_normal_algebra,
    normal_algebra_from_module,
    parse_theory,
    serialize_theory,
    sigma_of_set_map,
    table_theory_from_matrix,
    tensor_product_of_algebras,
    theory_of_ring,
)

Z2 = make_zmod(2)
Z3 = make_zmod(3)
Z4 = make_zmod(4)


class TestMatrixTheory:
    def test_hom_sizes(self) -> None:
        T = theory_of_ring(Z2, 3)
        assert T.hom_size(2, 1) == 4
        assert T.hom_size(3, 2) == 2 ** 6
        assert T.hom_size(0, 2) == 1
        assert T.hom_size(2, 0) == 1

    def test_compose_is_matrix_product(self) -> None:
        T = theory_of_ring(Z2, 2)
        f = Op(2, 2, ((1, 1), (0, 1)))
        g = Op(2, 2, ((1, 0), (1, 1)))
        assert T.compose(f, g).data == ((0, 1), (1, 1))

    def test_identity_and_projection(self) -> None:
        T = theory_of_ring(Z3, 2)
        assert T.identity(2).data == ((1, 0), (0, 1))
        assert T.projection(2, 0).data == ((1, 0),)
        assert T.projection(2, 1).data == ((0, 1),)

    def test_index_round_trip(self) -> None:
        T = theory_of_ring(Z3, 2)
        for m in range(3):
            for n in range(3):
                for i in range(T.hom_size(m, n)):
                    assert T.index_of(T.op(m, n, i)) == i

    def test_tuple_and_components(self) -> None:
        T = theory_of_ring(Z4, 2)
        f = Op(2, 2, ((1, 2), (3, 0)))
        assert T.tuple_op(2, T.components(f)).data == f.data

    def test_arity_bound_must_be_positive(self) -> None:
        with pytest.raises(ValueError):
            theory_of_ring(Z2, 0)

    def test_sigma_of_set_map(self) -> None:
        T = theory_of_ring(Z2, 4)
        # g: 2 -> 1 collapsing both points; sigma(g) duplicates the input
        s = sigma_of_set_map(T, [0, 0], 1)
        assert (s.dom, s.cod, s.data) == (1, 2, ((1,), (1,)))
        # g: 1 -> 2 picking the second point; sigma(g) is that projection
        s2 = sigma_of_set_map(T, [1], 2)
        assert (s2.dom, s2.cod, s2.data) == (2, 1, ((0, 1),))

    def test_sigma_is_contravariant(self) -> None:
        T = theory_of_ring(Z3, 4)
        g = [1, 0]      # 2 -> 2
        h = [0, 0, 1]   # 3 -> 2 composed after g? compose as h then g: 3 -> 2
        hg = [g[h[i]] for i in range(3)]
        lhs = sigma_of_set_map(T, hg, 2)
        rhs = T.compose(sigma_of_set_map(T, h, 2), sigma_of_set_map(T, g, 2))
        assert lhs.data == rhs.data


class TestTheoryAxioms:
    def test_corpus_rings_satisfy_axioms(self) -> None:
        for ring in corpus_rings():
            T = theory_of_ring(ring, 2)
            report = check_theory_axioms(T, budget=8192)
            assert [r["law"] for r in report] == [
                "identity units",
                "composition associativity",
                "power cones",
            ]
            assert all(r["ok"] for r in report)

    def test_coverage_policy(self) -> None:
        report = check_theory_axioms(theory_of_ring(Z3, 2), budget=4096)
        by_law = {r["law"]: r for r in report}
        assert by_law["identity units"]["coverage"] == "exhaustive"
        assert by_law["composition associativity"]["coverage"] == "sampled"
        assert by_law["power cones"]["coverage"] == "exhaustive"
        assert all(r["ok"] for r in report)

    def test_corrupted_composition_is_caught(self) -> None:
        from dataclasses import replace

        tt = table_theory_from_matrix(theory_of_ring(Z2, 2))
        tables = dict(tt.compose_tables)
        grid = [list(row) for row in tables[(1, 1, 1)]]
        grid[1][1] ^= 1
        tables[(1, 1, 1)] = tuple(tuple(row) for row in grid)
        bad = replace(tt, compose_tables=tables)
        report = {r["law"]: r for r in check_theory_axioms(bad)}
        assert report["identity units"]["witness"] == ("identity", 1, 1, 1)
        assert report["composition associativity"]["witness"] == (
            "associativity", 1, 1, 1, 2, 1, 1, 1)
        assert report["power cones"]["witness"] == (
            "cone-tupling", 1, 1, 0, (1, 1, 2))

    def test_table_theory_agrees_with_matrix_theory(self) -> None:
        T = theory_of_ring(Z3, 2)
        tt = table_theory_from_matrix(T)
        for m in range(3):
            for n in range(3):
                assert tt.hom_size(m, n) == T.hom_size(m, n)
        for m, l, n in itertools.product(range(3), repeat=3):
            for gi in range(T.hom_size(m, l)):
                for fi in range(T.hom_size(l, n)):
                    f = T.op(l, n, fi)
                    g = T.op(m, l, gi)
                    via_table = tt.compose(tt.op(l, n, fi), tt.op(m, l, gi))
                    assert tt.index_of(via_table) == T.index_of(T.compose(f, g))


class TestCommutativity:
    def test_corpus_rings_are_commutative_theories(self) -> None:
        for ring in corpus_rings():
            assert is_commutative_theory(theory_of_ring(ring, 3)) == (True, None)

    def test_bound_one_reduces_to_ring_commutativity(self) -> None:
        assert is_commutative_theory(theory_of_ring(make_zmod(6), 1)) == (True, None)

    def test_noncommutative_ring_fails(self) -> None:
        ut = ring_by_spec("ut2f2")
        assert is_commutative_theory(theory_of_ring(ut, 3)) == (False, (1, 1, 2, 3))
        # already detectable at unary operations
        assert is_commutative_theory(theory_of_ring(ut, 1)) == (False, (1, 1, 2, 3))
        ti, pi = 2, 3
        assert ut.mul[ti][pi] != ut.mul[pi][ti]


class TestNormalAlgebras:
    def test_module_round_trip(self) -> None:
        for ring in corpus_rings():
            T = theory_of_ring(ring, 2)
            for mod in probe_modules(ring, max_size=9):
                back = module_from_normal_algebra(normal_algebra_from_module(mod, T))
                assert back.add == mod.add
                assert back.act == mod.act
                assert back.neg == mod.neg

    def test_apply_evaluates_linear_combinations(self) -> None:
        T = theory_of_ring(Z4, 2)
        A = normal_algebra_from_module(free_module(Z4, 1), T)
        add = Op(2, 1, ((1, 1),))
        scale3 = Op(1, 1, ((3,),))
        assert A.apply(add, (1, 3)) == 0
        assert A.apply(scale3, (2,)) == 2

    def test_laws_hold_on_probes(self) -> None:
        for ring in corpus_rings():
            T = theory_of_ring(ring, 2)
            for mod in probe_modules(ring, max_size=6):
                report = check_normal_algebra(
                    normal_algebra_from_module(mod, T), budget=4096)
                assert report["ok"], report["witness"]

    def test_corrupted_structure_is_caught(self) -> None:
        from finverify.lawvere import NormalAlgebra

        T = theory_of_ring(Z2, 2)
        good = normal_algebra_from_module(free_module(Z2, 1), T)

        def twisted(op: Op, args):
            if op.dom == 2 and op.data == ((1, 1),) and args == (1, 1):
                return 1
            return good.apply(op, args)

        bad = NormalAlgebra(theory=T, size=good.size, apply=twisted, name="bad")
        report = check_normal_algebra(bad, budget=4096)
        assert not report["ok"]
        assert report["witness"] is not None


class TestFreeAlgebra:
    def test_class_counts_match_free_modules(self) -> None:
        assert free_algebra_coend(theory_of_ring(Z2, 2), 2).size == 4
        assert free_algebra_coend(theory_of_ring(Z2, 2), 0).size == 1
        assert free_algebra_coend(theory_of_ring(Z3, 2), 1).size == 3
        assert free_algebra_coend(theory_of_ring(Z4, 2), 3).size == 64

    def test_empty_set_gives_constants(self) -> None:
        T = theory_of_ring(Z3, 2)
        fa = free_algebra_coend(T, 0)
        assert fa.size == T.hom_size(0, 1) == 1

    def test_units_are_distinct_basis_vectors(self) -> None:
        fa = free_algebra_coend(theory_of_ring(Z4, 2), 3)
        units = [fa.unit(x) for x in range(3)]
        assert len(set(units)) == 3
        for x, cls in enumerate(units):
            vec = fa.vector(cls)
            assert vec[x] == 1 and sum(v != 0 for v in vec) == 1

    def test_matches_free_module_on_corpus(self) -> None:
        for ring in corpus_rings():
            for n in range(4):
                fa = free_algebra_coend(theory_of_ring(ring, 2), n,
                                        budget=2_000_000)
                ok, witness, coverage = free_algebra_matches_free_module(fa)
                assert ok, witness
                assert fa.size == ring.size ** n

    def test_generated_relation_equals_full_relation(self) -> None:
        # independent oracle: union over every set map, not just generators
        T = theory_of_ring(Z2, 2)
        fa = free_algebra_coend(T, 2)
        R, X, bound = 2, 2, fa.bound
        nodes = []
        for n in range(bound + 1):
            for theta in itertools.product(range(R), repeat=n):
                for xs in itertools.product(range(X), repeat=n):
                    nodes.append((n, theta, xs))
        index = {node: i for i, node in enumerate(nodes)}
        parent = list(range(len(nodes)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for m in range(bound + 1):
            for n in range(bound + 1):
                for g in itertools.product(range(n), repeat=m):
                    for theta in itertools.product(range(R), repeat=m):
                        for xs in itertools.product(range(X), repeat=n):
                            pushed = [0] * n
                            for i in range(m):
                                pushed[g[i]] ^= theta[i]
                            a = index[(m, theta, tuple(xs[g[i]] for i in range(m)))]
                            b = index[(n, tuple(pushed), xs)]
                            ra, rb = find(a), find(b)
                            if ra != rb:
                                parent[max(ra, rb)] = min(ra, rb)

        pairing = {}
        for node, i in index.items():
            root = find(i)
            cls = fa.class_of_node(*node)
            assert pairing.setdefault(root, cls) == cls
        assert len(set(pairing.values())) == len(pairing) == fa.size

    def test_substitution_reduces_high_arity_nodes(self) -> None:
        fa = free_algebra_coend(theory_of_ring(Z2, 2), 2)
        # x + x + y collapses to y over Z/2
        cls = fa.class_of_node(3, (1, 1, 1), (0, 0, 1))
        assert cls == fa.unit(1)

    def test_algebra_satisfies_laws(self) -> None:
        fa = free_algebra_coend(theory_of_ring(Z3, 2), 2)
        report = check_normal_algebra(fa.algebra(), budget=4096)
        assert report["ok"], report["witness"]


class TestAlgebraTensor:
    def test_scalars_absorb_into_either_slot(self) -> None:
        T = theory_of_ring(Z4, 2)
        two = [m for m in probe_modules(Z4, max_size=2) if m.size == 2][0]
        B = normal_algebra_from_module(two, T)
        t = tensor_product_of_algebras(B, B)
        assert t.module.size == 2

    def test_infeasible_product_set_is_rejected(self) -> None:
        from finverify.errors import BudgetError

        T = theory_of_ring(Z4, 2)
        A = normal_algebra_from_module(ring_module(Z4), T)
        two = [m for m in probe_modules(Z4, max_size=2) if m.size == 2][0]
        B = normal_algebra_from_module(two, T)
        # the free module on an 8-element product set over Z/4 is dense
        # and far beyond the carrier budget
        with pytest.raises(BudgetError):
            tensor_product_of_algebras(A, B)

    def test_agrees_with_module_tensor(self) -> None:
        T = theory_of_ring(Z2, 2)
        V4 = free_module(Z2, 2)
        A = normal_algebra_from_module(V4, T)
        B = normal_algebra_from_module(ring_module(Z2), T)
        t = tensor_product_of_algebras(A, B)
        assert t.module.size == tensor_product(V4, ring_module(Z2)).module.size == 4

    def test_unit_law(self) -> None:
        T = theory_of_ring(Z2, 2)
        V4 = free_module(Z2, 2)
        A = normal_algebra_from_module(ring_module(Z2), T)
        B = normal_algebra_from_module(V4, T)
        t = tensor_product_of_algebras(A, B)
        h = t.factor_bimorphism(lambda r, b: V4.act[r][b], V4)
        assert h.is_bijective()

    def test_swap_symmetry(self) -> None:
        T = theory_of_ring(Z2, 2)
        A = normal_algebra_from_module(ring_module(Z2), T)
        B = normal_algebra_from_module(free_module(Z2, 2), T)
        t_ab = tensor_product_of_algebras(A, B)
        t_ba = tensor_product_of_algebras(B, A)
        h = t_ab.factor_bimorphism(lambda a, b: t_ba.pure(b, a), t_ba.module)
        assert h.is_bijective()

    def test_universal_property_by_counting(self) -> None:
        # bimorphisms out of the pair biject with linear maps out of the tensor
        T = theory_of_ring(Z2, 2)
        V4 = free_module(Z2, 2)
        A = normal_algebra_from_module(V4, T)
        B = normal_algebra_from_module(ring_module(Z2), T)
        t = tensor_product_of_algebras(A, B)
        cod = ring_module(Z2)
        n_bil = 0
        for vals in itertools.product(range(cod.size), repeat=V4.size * 2):
            def beta(a: int, b: int) -> int:
                return vals[a * 2 + b]
            if bilinearity_failure(V4, ring_module(Z2), cod, beta) is None:
                n_bil += 1
                h = t.factor_bimorphism(beta, cod)
                assert all(h.table[t.pure(a, b)] == beta(a, b)
                           for a in range(V4.size) for b in range(2))
        assert n_bil == len(enumerate_homs(t.module, cod)) == 4

    def test_rejects_non_bimorphism(self) -> None:
        T = theory_of_ring(Z2, 2)
        A = normal_algebra_from_module(ring_module(Z2), T)
        t = tensor_product_of_algebras(A, A)
        with pytest.raises(TableError):
            t.factor_bimorphism(lambda a, b: 1, ring_module(Z2))


class TestTheoryIO:
    def test_round_trip(self) -> None:
        for ring in (Z2, Z3):
            tt = table_theory_from_matrix(theory_of_ring(ring, 2))
            text = serialize_theory(tt)
            back = parse_theory(text)
            assert serialize_theory(back) == text
            assert back.homs == tt.homs
            assert back.compose_tables == tt.compose_tables
            assert back.identities == tt.identities
            assert back.projections == tt.projections

    def test_rejects_bad_header(self) -> None:
        with pytest.raises(TableError):
            parse_theory("theory\n")

    def test_rejects_missing_blocks(self) -> None:
        tt = table_theory_from_matrix(theory_of_ring(Z2, 1))
        lines = serialize_theory(tt).splitlines()
        cut = next(i for i, l in enumerate(lines) if l.startswith("compose"))
        with pytest.raises(TableError):
            parse_theory("\n".join(lines[:cut]) + "\n")


class TestProperties:
    @given(st.sampled_from([2, 3, 4, 6]), st.data())
    @settings(max_examples=60, deadline=None)
    def test_composition_associates(self, n: int, data) -> None:
        T = theory_of_ring(make_zmod(n), 2)
        dims = [data.draw(st.integers(0, 2), label=f"d{i}") for i in range(4)]
        k, l, m, o = dims
        f = T.op(k, l, data.draw(st.integers(0, T.hom_size(k, l) - 1), label="f"))
        g = T.op(l, m, data.draw(st.integers(0, T.hom_size(l, m) - 1), label="g"))
        h = T.op(m, o, data.draw(st.integers(0, T.hom_size(m, o) - 1), label="h"))
        assert T.compose(T.compose(h, g), f).data == T.compose(h, T.compose(g, f)).data

    @given(st.integers(0, 3 ** 4 - 1))
    @settings(max_examples=40, deadline=None)
    def test_coend_classes_are_stable_under_relabeling(self, code: int) -> None:
        fa = free_algebra_coend(theory_of_ring(Z3, 2), 2)
        theta = (code % 3, code // 3 % 3)
        xs = (code // 9 % 2, code // 27 % 2)
        swapped = fa.class_of_node(2, (theta[1], theta[0]), (xs[1], xs[0]))
        assert fa.class_of_node(2, theta, xs) == swapped

    @given(st.integers(0, 63), st.integers(0, 63))
    @settings(max_examples=50, deadline=None)
    def test_free_algebra_addition_matches_vectors(self, a: int, b: int) -> None:
        fa = free_algebra_coend(theory_of_ring(Z4, 2), 3)
        s = fa.apply_row((1, 1), (a, b))
        va, vb, vs = fa.vector(a), fa.vector(b), fa.vector(s)
        assert vs == tuple(Z4.add[x][y] for x, y in zip(va, vb))
