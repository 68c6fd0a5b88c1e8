import pytest

from quotcert.certificate import structural_errors, total_class
from quotcert.classpoly import ClassPoly
from quotcert.cyclo import CycloNumber
from quotcert.engine import (
    AffineFunctional,
    CertBuilder,
    EngineConfig,
    NotFound,
    arrangement_subtree,
    center_reduce,
    certify_quotient,
    companion_matrix,
    cycle_matrix,
    cyclic_generator,
    find_invariant_splitting,
    lemma33_class,
    open_stratum_class,
    tau_lattice_action,
)
from quotcert.groups import induce_monomial_rep
from quotcert.intmat import IntMatrix, det, hermite_normal_form
from quotcert.torus import InvariantLattice, action_of


def L(*coeffs):
    return ClassPoly(tuple(coeffs))


class TestCenterReduce:
    def test_heisenberg(self):
        rep = induce_monomial_rep("heisenberg", 3)
        lat, residual, data = center_reduce(rep)
        assert data["order"] == 3 and lat.index == 3
        by_name = dict(residual)
        assert by_name["s"].is_identity()          # the center drops out
        assert by_name["pi"].char == (0, 1, 1)     # fixes y1, scales y2 y3
        assert by_name["t"].char == (0, 0, 0)
        assert by_name["t"].lattice_map.col(0) == [1, 3, 0]  # tau(y1)=y1 y2^3

    def test_modular(self):
        rep = induce_monomial_rep("modular", 3)
        lat, residual, data = center_reduce(rep)
        assert data["order"] == 3
        by_name = dict(residual)
        assert by_name["s"].char == (3, 3, 3)      # zeta on every y_i

    def test_trivial_center_identity_reduction(self):
        rep = induce_monomial_rep("abelian", 2, (1,))
        lat, residual, data = center_reduce(rep)
        assert data["order"] == 1 and lat.basis.is_identity()


class TestInvariantSplitting:
    def test_heisenberg_vector(self):
        rep = induce_monomial_rep("heisenberg", 3)
        _, residual, _ = center_reduce(rep)
        acts = [a for _, a in residual if not a.is_identity()]
        tau = [a for a in acts if not a.is_diagonal()][0]
        diags = [a for a in acts if a.is_diagonal()]
        v, u, U = find_invariant_splitting(
            acts, 3, require_untwisted_for=[tau], char_trivial_for=diags)
        assert v in ([1, 2, 1], [-1, -2, -1])      # z1 = (y1 y2^2 y3)^(+-1)
        assert abs(det(U)) == 1

    def test_dihedral8_bound_two(self):
        rep = induce_monomial_rep("dihedral8", 2)
        _, residual, _ = center_reduce(rep)
        acts = [a for _, a in residual if not a.is_identity()]
        tau = [a for a in acts if not a.is_diagonal()][0]
        diags = [a for a in acts if a.is_diagonal()]
        v, u, U = find_invariant_splitting(
            acts, 2, require_untwisted_for=[tau], char_trivial_for=diags)
        assert max(abs(x) for x in v) <= 2

    def test_modular_has_no_strict_splitting(self):
        # z1 is tau-invariant but the sigma residual scales it: the strict
        # search must fail and the pipeline takes the single-character branch
        rep = induce_monomial_rep("modular", 3)
        _, residual, _ = center_reduce(rep)
        acts = [a for _, a in residual if not a.is_identity()]
        tau = [a for a in acts if not a.is_diagonal()][0]
        diags = [a for a in acts if a.is_diagonal()]
        with pytest.raises(NotFound):
            find_invariant_splitting(
                acts, 3, require_untwisted_for=[tau], char_trivial_for=diags)
        cert = certify_quotient(rep)
        kinds = [n.kind for n in cert.walk()]
        assert "lemma33_strata" in kinds
        lem = [n for n in cert.walk() if n.kind == "lemma33_strata"][0]
        assert lem.data["variant"] == "T"


class TestTauLatticeAction:
    def test_companion_from_normal_form(self):
        # tau: w1 -> w2 -> (w1 w2)^-1 on the character lattice
        A = companion_matrix(3)
        assert A.col(0) == [0, 1] and A.col(1) == [-1, -1]
        acc = IntMatrix.identity(2) + A + A @ A
        assert acc.is_zero()

    def test_rank1_inversion(self):
        assert companion_matrix(2) == IntMatrix.from_rows([[-1]])

    def test_restriction_satisfies_relation(self):
        rep = induce_monomial_rep("heisenberg", 3)
        _, residual, _ = center_reduce(rep)
        tau = dict(residual)["t"]
        # restrict to the pi-invariant sublattice inside the split complement
        from quotcert.torus import abelian_invariant_lattice, apply_substitution

        acts = [a for _, a in residual if not a.is_identity()]
        diags = [a for a in acts if a.is_diagonal()]
        v, u, U = find_invariant_splitting(
            acts, 3, require_untwisted_for=[tau], char_trivial_for=diags)
        sub_tau = apply_substitution(tau, U)
        M2 = IntMatrix.from_rows([[sub_tau.lattice_map[i, j]
                                   for j in (1, 2)] for i in (1, 2)])
        from quotcert.torus import TwistedMonomialAction

        tau2 = TwistedMonomialAction(M2, sub_tau.char[1:], 3)
        pi2 = TwistedMonomialAction(IntMatrix.identity(2), (1, 1), 3)
        lat = abelian_invariant_lattice([pi2.char], 2, 3)
        A, res = tau_lattice_action(tau2, lat)
        acc = IntMatrix.identity(2) + A + A @ A
        assert acc.is_zero()
        assert res.char == (0, 0)


class TestCyclicGenerator:
    def test_companion_e1_works(self):
        for p in (2, 3, 5, 7):
            A = companion_matrix(p)
            n = p - 1
            cols = [[1 if i == 0 else 0 for i in range(n)]]
            for _ in range(n - 1):
                cols.append(A.mul_vec(cols[-1]))
            assert abs(det(IntMatrix.from_cols(cols))) == 1

    def test_search_finds_unimodular(self):
        A = companion_matrix(3)
        v, C = cyclic_generator(A, 3)
        assert abs(det(C)) == 1

    def test_conjugated_companion(self):
        U = IntMatrix.from_rows([[2, 1], [1, 1]])
        Uinv = IntMatrix.from_rows([[1, -1], [-1, 2]])
        A = U @ companion_matrix(3) @ Uinv
        v, C = cyclic_generator(A, 3)
        assert abs(det(C)) == 1

    def test_deterministic(self):
        A = companion_matrix(5)
        assert cyclic_generator(A, 3) == cyclic_generator(A, 3)

    def test_nonprincipal_ideal_not_found(self):
        # multiplication by zeta_23 on the prime ideal (47, zeta - g) of
        # Z[zeta_23]; the search must come back empty at the default bound
        p = 23
        g = next(x for x in range(2, 47) if pow(x, p, 47) == 1)
        phi = companion_matrix(p)          # multiplication by zeta on Z[zeta]
        n = p - 1
        gens = []
        for i in range(n):
            col = [0] * n
            col[i] = 47
            gens.append(col)
        elt = [-g, 1] + [0] * (n - 2)      # zeta - g
        for _ in range(n):
            gens.append(list(elt))
            elt = phi.mul_vec(elt)
        H, _ = hermite_normal_form(IntMatrix.from_cols(gens))
        B = IntMatrix.from_cols([H.col(j) for j in range(n)])
        assert abs(det(B)) == 47           # the ideal has norm 47
        from quotcert.intmat import inverse_times

        A = inverse_times(B, phi @ B)
        assert A is not None               # the ideal is zeta-stable
        acc = IntMatrix.zero(n, n)
        power = IntMatrix.identity(n)
        for _ in range(p):
            acc = acc + power
            power = power @ A
        assert acc.is_zero()               # cyclotomic relation holds
        with pytest.raises(NotFound):
            cyclic_generator(A, 3, candidate_budget=1500)

    def test_principal_ideal_control(self):
        # same construction for the principal ideal (zeta - 1): found fast
        p = 23
        phi = companion_matrix(p)
        n = p - 1
        gens = []
        elt = [-1, 1] + [0] * (n - 2)
        for _ in range(n):
            gens.append(list(elt))
            elt = phi.mul_vec(elt)
        H, _ = hermite_normal_form(IntMatrix.from_cols(gens))
        B = IntMatrix.from_cols([H.col(j) for j in range(n)])
        assert abs(det(B)) == p            # norm of (1 - zeta) is p
        from quotcert.intmat import inverse_times

        A = inverse_times(B, phi @ B)
        v, C = cyclic_generator(A, 1, candidate_budget=10 ** 5)
        assert abs(det(C)) == 1


class TestLemma33:
    @pytest.mark.parametrize("p,variant,coeffs", [
        (2, "S", (0, 1)),
        (3, "S", (1, 0, 1)),
        (5, "S", (1, 0, 2, 0, 1)),
        (2, "T", (0, -1, 1)),
        (3, "T", (-1, 1, -1, 1)),
    ])
    def test_classes(self, p, variant, coeffs):
        cert = lemma33_class(p, variant)
        assert total_class(cert) == ClassPoly(coeffs)
        assert structural_errors(cert) == []

    def test_burnside_oracle(self):
        for p, variant in [(2, "S"), (3, "S"), (5, "S"), (2, "T"), (3, "T")]:
            cert = lemma33_class(p, variant)
            cls = total_class(cert)
            qs = [q for q in (3, 7, 11, 13, 29, 31, 41, 43) if q % p == 1][:3]
            for q in qs:
                if variant == "S":
                    oracle = ((q - 1) ** (p - 1)
                              + (p - 1) * (q ** p - 1) // (q - 1)) // p
                else:
                    oracle = ((q - 1) ** p + (p - 1) * (q ** p - 1)) // p
                assert cls.evaluate(q) == oracle, (p, variant, q)

    def test_guards(self):
        with pytest.raises(ValueError):
            lemma33_class(4, "S")
        with pytest.raises(ValueError):
            lemma33_class(11, "S")  # exceeds the default cap
        with pytest.raises(ValueError):
            lemma33_class(3, "X")


class TestArrangementSplit:
    def test_two_points_on_a_line(self):
        # A^1 minus {v = 1, v = -1} with tau: v -> -v: class L - 1
        e = 2
        one = CycloNumber.one(e)
        hyps = [AffineFunctional(-one, (one,)), AffineFunctional(one, (one,))]
        b = CertBuilder()
        nid, cls = arrangement_subtree(b, 1, hyps, [1], e, 2)
        assert cls == L(-1, 1)

    def test_lemma_triple_flat_empty(self):
        # the three lines of the p=3 stratum have no common point, and the
        # subtree class is L^2 - L + 1
        e = 3
        z = CycloNumber.zeta(e)
        hyps = []
        for m in range(3):
            const = CycloNumber.one(e)
            coeffs = (CycloNumber.zeta(e, -m), CycloNumber.zeta(e, -2 * m))
            hyps.append(AffineFunctional(const, coeffs))
        b = CertBuilder()
        nid, cls = arrangement_subtree(b, 2, hyps, [2, 1], e, 3)
        assert cls == L(1, -1, 1)
        node = b.node(nid)
        subsets = {tuple(f["subset"]) for f in node.data["flats"]}
        assert (0, 1, 2) not in subsets    # common triple flat is empty

    def test_empty_arrangement(self):
        # inconsistent constant equations: complement is everything
        e = 3
        one = CycloNumber.one(e)
        hyps = [AffineFunctional(one, (CycloNumber.zero(e),)) for _ in range(3)]
        b = CertBuilder()
        nid, cls = arrangement_subtree(b, 1, hyps, [1], e, 3)
        assert cls == L(0, 1)


class TestCertify:
    @pytest.mark.parametrize("kind,p,params,dim", [
        ("heisenberg", 3, (), 3),
        ("modular", 3, (), 3),
        ("dihedral8", 2, (), 2),
        ("quaternion8", 2, (), 2),
        ("heisenberg", 2, (), 2),
        ("modular", 2, (), 2),
        ("semidirect", 2, (3,), 2),
    ])
    def test_total_is_lefschetz_power(self, kind, p, params, dim):
        rep = induce_monomial_rep(kind, p, params)
        cert = certify_quotient(rep)
        assert cert.complete
        assert total_class(cert) == ClassPoly.lefschetz_power(dim)
        assert structural_errors(cert) == []

    def test_abelian(self):
        rep = induce_monomial_rep("abelian", 3, (3, 3))
        cert = certify_quotient(rep)
        assert total_class(cert) == ClassPoly.lefschetz_power(2)

    def test_open_stratum_factorization(self):
        # heisenberg open stratum = (L-1) * lemma33(3, S)
        cert = certify_quotient(induce_monomial_rep("heisenberg", 3))
        s_class = total_class(lemma33_class(3, "S"))
        assert open_stratum_class(cert) == L(-1, 1) * s_class
        # modular open stratum = lemma33(3, T)
        cert = certify_quotient(induce_monomial_rep("modular", 3))
        t_class = total_class(lemma33_class(3, "T"))
        assert open_stratum_class(cert) == t_class

    def test_heisenberg5_needs_larger_bound(self):
        rep = induce_monomial_rep("heisenberg", 5)
        stuck = certify_quotient(rep)                  # default bound 3
        assert not stuck.complete
        assert stuck.stuck["stage"] == "invariant_split"
        cert = certify_quotient(rep, EngineConfig(search_bound=4))
        assert total_class(cert) == ClassPoly.lefschetz_power(5)

    def test_stuck_at_bound_zero(self):
        rep = induce_monomial_rep("heisenberg", 3)
        cert = certify_quotient(rep, EngineConfig(search_bound=0))
        assert not cert.complete
        assert cert.stuck["stage"] == "invariant_split"
        from quotcert.certificate import IncompleteCertificate

        with pytest.raises(IncompleteCertificate):
            total_class(cert)

    def test_deterministic_reruns(self):
        from quotcert.document import certificate_to_document, dumps

        rep = induce_monomial_rep("heisenberg", 3)
        a = dumps(certificate_to_document(certify_quotient(rep)))
        b = dumps(certificate_to_document(certify_quotient(rep)))
        assert a == b

    def test_substitution_matrices_unimodular(self):
        for kind, p in [("heisenberg", 3), ("modular", 3), ("quaternion8", 2)]:
            cert = certify_quotient(induce_monomial_rep(kind, p))
            for node in cert.walk():
                if "matrix" in node.data:
                    from quotcert.certificate import _data_matrix

                    if node.kind in ("substitution", "invariant_split"):
                        assert abs(det(_data_matrix(node.data["matrix"]))) == 1
