import numpy as np
import pytest

from vcsqse.operators import (FermionOperator, PauliOperator, add_penalty,
                              commutator, fermion_to_dense, jordan_wigner,
                              normal_order, parse_ladder, pauli_to_dense,
                              symmetry_operator)


def random_fermion(rng, m, n_terms=6, max_len=4):
    op = FermionOperator(m)
    for _ in range(n_terms):
        length = int(rng.integers(0, max_len + 1))
        seq = tuple((int(rng.integers(0, m)), bool(rng.integers(0, 2)))
                    for _ in range(length))
        op.terms[seq] = op.terms.get(seq, 0.0) + complex(rng.normal(), rng.normal())
    return op._prune()


def jw_dense(op):
    return pauli_to_dense(jordan_wigner(op))


class TestFermionAlgebra:
    def test_adjoint_of_ladder(self):
        a0d = FermionOperator.from_term("0^", 1.0, 2)
        assert a0d.adjoint().render() == "(1+0i) [0]"

    def test_adjoint_involution(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            op = random_fermion(rng, 3)
            assert np.abs(fermion_to_dense(op.adjoint().adjoint())
                          - fermion_to_dense(op)).max() < 1e-12

    def test_adjoint_reverses_and_conjugates(self):
        op = FermionOperator.from_term("0^ 1", 2.0 + 1.0j, 2)
        assert op.adjoint().render() == "(2-1i) [1^ 0]"

    def test_commutator_with_self_is_zero(self):
        rng = np.random.default_rng(1)
        op = random_fermion(rng, 3)
        assert normal_order(commutator(op, op)).is_zero()

    def test_commutator_example_symbolic_and_dense(self):
        a = FermionOperator.from_term("0^ 1", 1.0, 2)
        b = FermionOperator.from_term("1^ 0", 1.0, 2)
        comm = normal_order(commutator(a, b))
        expected = (FermionOperator.from_term("0^ 0", 1.0, 2)
                    - FermionOperator.from_term("1^ 1", 1.0, 2))
        assert comm.render() == normal_order(expected).render()
        # independent dense oracle through the JW route
        assert np.abs(jw_dense(comm)
                      - (jw_dense(a) @ jw_dense(b) - jw_dense(b) @ jw_dense(a))
                      ).max() < 1e-12

    def test_mode_count_mismatch(self):
        a = FermionOperator.from_term("0^", 1.0, 2)
        b = FermionOperator.from_term("0^", 1.0, 3)
        with pytest.raises(ValueError, match="mode_count"):
            _ = a * b
        with pytest.raises(ValueError, match="mode_count"):
            _ = a + b

    def test_rank(self):
        op = FermionOperator.from_term("0^ 1^ 2 3", 1.0, 4)
        assert op.rank() == 2
        assert FermionOperator.identity(4).rank() == 0


class TestNormalOrder:
    def test_anticommutation_rule(self):
        op = FermionOperator.from_term("0 0^", 1.0, 1)
        assert normal_order(op).render() == "(1+0i) []\n(-1+0i) [0^ 0]"

    def test_disjoint_modes_anticommute(self):
        op = FermionOperator.from_term("1 0^", 1.0, 2)
        assert normal_order(op).render() == "(-1+0i) [0^ 1]"

    def test_repeated_ladder_operators_vanish(self):
        assert normal_order(FermionOperator.from_term("0^ 0^", 1.0, 2)).is_zero()
        assert normal_order(FermionOperator.from_term("1 1", 1.0, 2)).is_zero()

    def test_preserves_dense_representation(self):
        rng = np.random.default_rng(2)
        for _ in range(40):
            op = random_fermion(rng, 4)
            assert np.abs(fermion_to_dense(normal_order(op))
                          - fermion_to_dense(op)).max() < 1e-12

    def test_term_structure(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            op = normal_order(random_fermion(rng, 4))
            for seq in op.terms:
                daggers = [d for _, d in seq]
                # all creations before all annihilations
                assert daggers == sorted(daggers, reverse=True)
                creations = [m for m, d in seq if d]
                annihilations = [m for m, d in seq if not d]
                assert creations == sorted(creations)
                assert annihilations == sorted(annihilations, reverse=True)

    def test_commutator_with_two_body_h_has_rank_three(self):
        # (a_i^ a_j)^dag [H, a_k^ a_l] contracts to at most three-body terms
        rng = np.random.default_rng(4)
        m = 4
        h = FermionOperator(m)
        for _ in range(10):
            p, q, r, s = (int(rng.integers(0, m)) for _ in range(4))
            seq = ((p, True), (q, True), (r, False), (s, False))
            h.terms[seq] = h.terms.get(seq, 0.0) + rng.normal()
        h = h + h.adjoint()
        for (i, j, k, l) in [(0, 1, 2, 3), (1, 1, 0, 2), (3, 0, 0, 0)]:
            exc = FermionOperator(m, {((k, True), (l, False)): 1.0})
            row = FermionOperator(m, {((i, True), (j, False)): 1.0})
            comm = normal_order(commutator(h, exc))
            assert comm.rank() <= 2
            assert normal_order(row.adjoint() * comm).rank() <= 3


class TestJordanWigner:
    def test_single_mode_creation(self):
        op = jordan_wigner(FermionOperator.from_term("0^", 1.0, 1))
        assert op.render() == "(0.5+0i) [X0]\n(0-0.5i) [Y0]"

    def test_parity_string(self):
        op = jordan_wigner(FermionOperator.from_term("1^", 1.0, 2))
        assert op.render() == "(0.5+0i) [Z0 X1]\n(0-0.5i) [Z0 Y1]"

    def test_number_operator_single_mode(self):
        op = jordan_wigner(FermionOperator.from_term("0^ 0", 1.0, 1))
        # (I - Z)/2, checked against a 2x2 multiplication oracle
        dense = pauli_to_dense(op)
        assert np.abs(dense - np.diag([0.0, 1.0])).max() < 1e-14

    def test_homomorphism_on_random_operators(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = random_fermion(rng, 4, n_terms=4, max_len=3)
            b = random_fermion(rng, 4, n_terms=4, max_len=3)
            lhs = jw_dense(a * b)
            rhs = jw_dense(a) @ jw_dense(b)
            assert np.abs(lhs - rhs).max() < 1e-12

    def test_ladder_adjoint_pairs_and_anticommutators(self):
        m = 3
        eye = np.eye(1 << m)
        for p in range(m):
            cp = jw_dense(FermionOperator.from_term(f"{p}^", 1.0, m))
            ap = jw_dense(FermionOperator.from_term(f"{p}", 1.0, m))
            assert np.abs(cp - ap.conj().T).max() < 1e-14
            for q in range(m):
                aq = jw_dense(FermionOperator.from_term(f"{q}", 1.0, m))
                anti = aq @ cp + cp @ aq
                expected = eye if p == q else 0.0 * eye
                assert np.abs(anti - expected).max() < 1e-13

    def test_jw_route_matches_direct_dense(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            op = random_fermion(rng, 4)
            assert np.abs(jw_dense(op) - fermion_to_dense(op)).max() < 1e-12


class TestPauliOperator:
    def test_identity_dense(self):
        assert np.abs(pauli_to_dense(PauliOperator.identity(2)) - np.eye(4)).max() == 0

    def test_z_on_single_qubit(self):
        op = PauliOperator.from_letter("Z", 0, 1)
        assert np.abs(pauli_to_dense(op) - np.diag([1.0, -1.0])).max() == 0

    def test_number_operator_occupation_ordering(self):
        n_op = jordan_wigner(symmetry_operator("number", 2))
        dense = pauli_to_dense(n_op)
        occupations = np.array([bin(b).count("1") for b in range(4)], dtype=float)
        assert np.abs(dense - np.diag(occupations)).max() < 1e-14

    def test_products_match_dense(self):
        rng = np.random.default_rng(7)
        letters = "IXYZ"
        for _ in range(30):
            w1 = "".join(rng.choice(list(letters)) for _ in range(3))
            w2 = "".join(rng.choice(list(letters)) for _ in range(3))
            p1 = PauliOperator(3, {w1: 1.0})
            p2 = PauliOperator(3, {w2: 1.0})
            assert np.abs(pauli_to_dense(p1 * p2)
                          - pauli_to_dense(p1) @ pauli_to_dense(p2)).max() < 1e-13

    def test_dense_guard(self):
        with pytest.raises(ValueError, match="exceeds"):
            pauli_to_dense(PauliOperator.identity(13))

    def test_render_golden(self):
        op = PauliOperator(2, {"ZX": 0.25})
        assert op.render() == "(0.25+0i) [Z0 X1]"
        fop = FermionOperator.from_term("0^ 1", -0.5, 2)
        assert fop.render() == "(-0.5+0i) [0^ 1]"

    def test_render_sorted_and_sigfigs(self):
        op = FermionOperator(2, {parse_ladder("1^ 0"): 1 / 3, parse_ladder("0^ 1"): -1.0})
        assert op.render() == "(-1+0i) [0^ 1]\n(0.333333333333+0i) [1^ 0]"


class TestSymmetryOperators:
    def test_number_m2(self):
        op = symmetry_operator("number", 2)
        assert op.render() == "(1+0i) [0^ 0]\n(1+0i) [1^ 1]"

    def test_s_squared_on_vacuum(self):
        s2 = fermion_to_dense(symmetry_operator("s_squared", 4))
        vac = np.zeros(16)
        vac[0] = 1.0
        assert abs(vac @ s2 @ vac) < 1e-14

    def test_s_squared_triplet_eigenvalue(self):
        # a_{0a}^ a_{1a}^ |vac> occupies modes 0 and 2 -> S=1, eigenvalue 2
        s2 = fermion_to_dense(symmetry_operator("s_squared", 4))
        state = np.zeros(16)
        state[0b0101] = 1.0
        assert np.abs(s2 @ state - 2.0 * state).max() < 1e-12

    def test_s_squared_sector_diagonalization(self):
        # dense diagonalization of S^2 in the 2-electron sector: {0, 2} only
        s2 = fermion_to_dense(symmetry_operator("s_squared", 4))
        idx = [b for b in range(16) if bin(b).count("1") == 2]
        w = np.linalg.eigvalsh(s2[np.ix_(idx, idx)])
        assert np.allclose(sorted(w), [0, 0, 0, 2, 2, 2], atol=1e-12)

    def test_s_squared_commutes_with_number_and_sz(self):
        s2 = fermion_to_dense(symmetry_operator("s_squared", 4))
        for name in ("number", "sz"):
            od = fermion_to_dense(symmetry_operator(name, 4))
            assert np.abs(s2 @ od - od @ s2).max() < 1e-12

    def test_spinful_operators_need_even_modes(self):
        with pytest.raises(ValueError, match="even"):
            symmetry_operator("sz", 3)
        with pytest.raises(ValueError, match="unknown"):
            symmetry_operator("parity", 4)


class TestPenalty:
    def test_zero_weight_is_identity(self):
        h = FermionOperator.from_term("0^ 1", 1.0, 2)
        h = h + h.adjoint()
        out = add_penalty(h, symmetry_operator("number", 2), 1.0, 0.0)
        assert np.abs(fermion_to_dense(out) - fermion_to_dense(h)).max() < 1e-14

    def test_eigenstate_energy_unchanged(self):
        h = FermionOperator.from_term("0^ 0", -1.0, 2)
        n_op = symmetry_operator("number", 2)
        pen = add_penalty(h, n_op, 1.0, 50.0)
        state = np.zeros(4)
        state[0b01] = 1.0  # one electron: N eigenvalue 1 = target
        hd, pd = fermion_to_dense(h), fermion_to_dense(pen)
        assert abs(state @ hd @ state - state @ pd @ state) < 1e-12

    def test_number_penalty_shift(self):
        # (N - 2)^2 = 1 on a one-electron state -> energy shift +10
        h = FermionOperator.zero(4)
        pen = add_penalty(h, symmetry_operator("number", 4), 2.0, 10.0)
        state = np.zeros(16)
        state[0b0001] = 1.0
        dense = fermion_to_dense(pen)
        assert abs(np.real(state @ dense @ state) - 10.0) < 1e-12
        # independent dense oracle for (N-2)^2
        nd = fermion_to_dense(symmetry_operator("number", 4))
        oracle = 10.0 * (nd - 2 * np.eye(16)) @ (nd - 2 * np.eye(16))
        assert np.abs(dense - oracle).max() < 1e-12

    def test_penalized_operator_stays_hermitian(self):
        h = FermionOperator.from_term("0^ 1", 0.3 + 0.1j, 4)
        h = h + h.adjoint()
        pen = add_penalty(h, symmetry_operator("s_squared", 4), 0.0, 3.0)
        dense = fermion_to_dense(pen)
        assert np.abs(dense - dense.conj().T).max() < 1e-12

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            add_penalty(FermionOperator.zero(2), symmetry_operator("number", 2),
                        0.0, -1.0)
