import pytest

from quotcert.classpoly import ClassPoly
from quotcert.counting import (
    BudgetExceeded,
    FieldSpec,
    InvalidField,
    brute_force_twisted_count,
    burnside_quotient_count,
    cyclic_torus_quotient_count,
    default_qs,
    stabilization_degree,
    twisted_affine_count,
    twisted_count_via_congruence,
    twisted_torus_count,
)
from quotcert.gf import extension_field, finite_field
from quotcert.groups import MonomialElement, induce_monomial_rep
from quotcert.intmat import IntMatrix
from quotcert.torus import TwistedMonomialAction, action_of


class TestFields:
    def test_table_polys_are_primitive(self):
        from quotcert.gf import PRIMITIVE_POLYS, _is_irreducible, _is_primitive

        for (p, k), poly in PRIMITIVE_POLYS.items():
            assert poly[-1] == 1
            assert _is_irreducible(list(poly), p)
            if k > 1:
                assert _is_primitive(list(poly), p)

    def test_field_arithmetic(self):
        F = finite_field(9)
        assert len(F.units()) == 8
        one = F.one()
        g = F.generator()
        assert F.pow(g, 8) == one
        assert F.pow(g, 4) != one
        # distributed multiplication sanity against Z/3[x] arithmetic
        a, b = F.exp[3], F.exp[5]
        assert F.mul(a, b) == F.exp[0] if (3 + 5) % 8 == 0 else F.exp[(3 + 5) % 8]

    def test_root_of_unity(self):
        F = finite_field(7)
        z = F.root_of_unity(3)
        assert F.pow(z, 3) == F.one() and z != F.one()
        with pytest.raises(ValueError):
            F.root_of_unity(4)

    def test_extension(self):
        F = extension_field(4, 3)  # F_64
        assert F.size == 64
        z9 = F.root_of_unity(9)
        assert F.pow(z9, 9) == F.one() and F.pow(z9, 3) != F.one()


class TestFieldSpec:
    def test_valid(self):
        FieldSpec(7, 3)
        FieldSpec(19, 9)
        FieldSpec(5, 4)

    def test_conductor_guard(self):
        with pytest.raises(InvalidField):
            FieldSpec(7, 9)
        with pytest.raises(InvalidField):
            FieldSpec(4, 4)  # characteristic divides the conductor

    def test_default_qs(self):
        assert default_qs(3) == [7, 13, 19]
        assert default_qs(9) == [19, 37, 73]
        assert default_qs(4) == [5, 13, 17]


class TestTwistedTorusCount:
    def test_identity_rank1(self):
        act = TwistedMonomialAction.identity(1, 3)
        assert twisted_torus_count(act, 5) == 4

    def test_full_swap(self):
        M = IntMatrix.from_rows([[0, 1], [1, 0]])
        act = TwistedMonomialAction(M, (0, 0), 2)
        assert twisted_torus_count(act, 3) == 8  # q^2 - 1

    def test_companion_rank2(self):
        A = IntMatrix.from_rows([[0, -1], [1, -1]])
        act = TwistedMonomialAction(A, (0, 0), 3)
        for q in (4, 7, 13):
            assert twisted_torus_count(act, q) == q * q + q + 1

    def test_twist_does_not_change_count(self):
        M = IntMatrix.from_rows([[0, 1], [1, 0]])
        a0 = TwistedMonomialAction(M, (0, 0), 4)
        a1 = TwistedMonomialAction(M, (2, 0), 4)
        assert twisted_torus_count(a0, 5) == twisted_torus_count(a1, 5)


class TestBruteForce:
    def test_rank1_identity(self):
        act = TwistedMonomialAction.identity(1, 2)
        assert brute_force_twisted_count(act, 3, 1) == 2

    def test_rank2_swap(self):
        M = IntMatrix.from_rows([[0, 1], [1, 0]])
        act = TwistedMonomialAction(M, (0, 0), 2)
        assert brute_force_twisted_count(act, 3, 2) == 8

    def test_companion_q4(self):
        A = IntMatrix.from_rows([[0, -1], [1, -1]])
        act = TwistedMonomialAction(A, (0, 0), 3)
        assert brute_force_twisted_count(act, 4, 3) == 21

    def test_naive_full_enumeration_cross_check(self):
        # fully naive nested-loop oracle for a twisted diagonal action
        act = TwistedMonomialAction(IntMatrix.identity(2), (1, 2), 3)
        F = extension_field(4, 1)
        z = F.root_of_unity(3)
        naive = 0
        for x0 in F.units():
            for x1 in F.units():
                if (F.pow(x0, 4) == F.mul(F.pow(z, 1), x0)
                        and F.pow(x1, 4) == F.mul(F.pow(z, 2), x1)):
                    naive += 1
        assert brute_force_twisted_count(act, 4, 1) == naive
        assert twisted_torus_count(act, 4) == 9  # (q-1)^2, twist-independent

    def test_budget_guard(self):
        act = TwistedMonomialAction(IntMatrix.from_rows([[1, 1], [0, 1]]), (0, 0), 2)
        with pytest.raises(BudgetExceeded):
            brute_force_twisted_count(act, 7, 5)

    def test_congruence_route_matches_det(self):
        A = IntMatrix.from_rows([[0, -1], [1, -1]])
        act = TwistedMonomialAction(A, (0, 0), 3)
        for q in (4, 7):
            m = stabilization_degree(act, q)
            assert twisted_count_via_congruence(act, q, m) == \
                twisted_torus_count(act, q)


class TestOracleAgreement:
    @pytest.mark.parametrize("kind,p,q", [
        ("heisenberg", 3, 4),
        ("heisenberg", 3, 7),
        ("dihedral8", 2, 5),
        ("quaternion8", 2, 5),
    ])
    def test_det_vs_brute_force_sample(self, kind, p, q):
        rep = induce_monomial_rep(kind, p)
        tested = 0
        for g in rep.closure():
            act = action_of(g)
            try:
                m = stabilization_degree(act, q)
            except InvalidField:
                continue
            try:
                bf = brute_force_twisted_count(act, q, m)
            except BudgetExceeded:
                continue
            assert bf == twisted_torus_count(act, q), g
            assert twisted_count_via_congruence(act, q, m) == bf
            tested += 1
        assert tested >= 3


class TestAffineCounts:
    def test_identity(self):
        g = MonomialElement.identity(3, 3)
        assert twisted_affine_count(g, 7) == 343

    def test_always_qn(self):
        for kind, p, q in [("heisenberg", 3, 7), ("modular", 3, 19),
                           ("quaternion8", 2, 5), ("dihedral8", 2, 13)]:
            rep = induce_monomial_rep(kind, p)
            for g in rep.closure():
                assert twisted_affine_count(g, q) == q ** rep.n

    def test_diagonal_minus_one(self):
        g = MonomialElement(2, 2, (0, 1), (1, 1))
        assert twisted_affine_count(g, 5) == 25


class TestBurnside:
    def test_trivial_group(self):
        rep = induce_monomial_rep("abelian", 2, (1,))
        report = burnside_quotient_count(rep, 5)
        assert report.quotient_count == 5

    def test_heisenberg_affine(self):
        rep = induce_monomial_rep("heisenberg", 3)
        report = burnside_quotient_count(rep, 7, ClassPoly((0, 0, 0, 1)))
        assert report.quotient_count == 343
        assert report.match

    def test_inversion_torus(self):
        act = TwistedMonomialAction(IntMatrix.from_rows([[-1]]), (0,), 2)
        # (1/2)((q-1) + (q+1)) = q
        assert cyclic_torus_quotient_count(act, 5) == 5

    def test_s_variant_oracle_formula(self):
        # companion action: (1/p)((q-1)^(p-1) + (p-1)(q^p-1)/(q-1))
        A = IntMatrix.from_rows([[0, -1], [1, -1]])
        act = TwistedMonomialAction(A, (0, 0), 3)
        for q in (4, 7, 13):
            expect = ((q - 1) ** 2 + 2 * (q ** 3 - 1) // (q - 1)) // 3
            assert cyclic_torus_quotient_count(act, q) == expect
