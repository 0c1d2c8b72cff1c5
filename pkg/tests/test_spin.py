import random
from fractions import Fraction

import pytest

from adg2 import hk, spin
from adg2.exact import (QQi, dagger, eye, is_zero_matrix, mat_apply, mchain,
                        mmul, mscale)

F = Fraction


@pytest.fixture(scope="module")
def model():
    return spin.build_spinor_model()


class TestBuild:
    def test_vertical_anticommutator_offdiag(self, model):
        # c(x1)c(x2) + c(x2)c(x1) = 0
        _, x_ops = model.clifford7()
        s = mmul(x_ops[0], x_ops[1])
        t = mmul(x_ops[1], x_ops[0])
        assert is_zero_matrix(tuple(tuple(s[i][j] + t[i][j] for j in range(8))
                                    for i in range(8)))

    def test_mixed_anticommutator_zero(self, model):
        t_ops, x_ops = model.clifford7()
        s = mmul(x_ops[0], t_ops[0])
        t = mmul(t_ops[0], x_ops[0])
        assert is_zero_matrix(tuple(tuple(s[i][j] + t[i][j] for j in range(8))
                                    for i in range(8)))

    def test_i_squares_minus_one(self, model):
        for i in range(3):
            assert mmul(model.i_sp[i], model.i_sp[i]) == mscale(QQi(-1), eye(2))

    def test_eps_scaled_vertical_relation(self, model):
        eps = F(1, 3)
        _, x_ops = model.clifford7(eps)
        s = mmul(x_ops[2], x_ops[2])
        assert s == mscale(QQi(-eps), eye(8))

    def test_corrupt_hook_breaks_quaternions(self):
        bad = spin.build_spinor_model(corrupt="i2_sign")
        ok = (mmul(bad.i_sp[0], bad.i_sp[1]) == bad.i_sp[2])
        assert not ok


class TestOmegaDecomposition:
    def test_spectrum(self, model):
        dec = spin.c_omega_decomposition(model)
        assert set(dec) == {-6, 2}
        assert len(dec[-6]) == 1 and len(dec[2]) == 3

    def test_eigenvectors(self, model):
        om = model.c_omega_block()
        dec = spin.c_omega_decomposition(model)
        for lam, vecs in dec.items():
            for v in vecs:
                got = mat_apply(om, v)
                want = tuple(QQi(lam) * c for c in v)
                assert got == want

    def test_c_lambda_on_negative_block(self, model):
        lam = model.c_lambda()
        for i in range(4):
            assert lam[i][i] == QQi(1)

    def test_c_omega_trivial_on_negative(self, model):
        # the action is defined block-diagonally; self-dual forms act as zero on S-
        for w in hk.STANDARD_TRIPLE:
            assert is_zero_matrix(model.c_form2_minus(w))

    def test_minus6_space_real_invariant(self, model):
        dec = spin.c_omega_decomposition(model)
        v = dec[-6][0]
        rv = spin.real_structure_fixed(v)
        # rv stays in the eigenspace: proportional to v
        ratios = {(-6): None}
        nz = next(i for i, c in enumerate(v) if bool(c))
        lam = rv[nz] / v[nz]
        assert all(rv[i] == lam * v[i] for i in range(4))


class TestCanonicalPhi:
    def test_intertwining_and_unitarity(self, model):
        for sign in (1, -1):
            phi = spin.canonical_phi(model, sign)
            for i in range(3):
                assert mmul(phi, model.i_sp[i]) == mmul(model.cb[i], phi)
            assert mmul(dagger(phi), phi) == eye(2)

    def test_two_real_choices_differ_by_sign(self, model):
        p1 = spin.canonical_phi(model, 1)
        p2 = spin.canonical_phi(model, -1)
        assert p1 == mscale(QQi(-1), p2)

    def test_downstream_sign_invariance(self, model):
        # transporting the S+ quaternion action through either sign of the
        # isomorphism gives the same base operators
        for sign in (1, -1):
            phi = spin.canonical_phi(model, sign)
            transported = [mchain(phi, model.i_sp[i], dagger(phi))
                           for i in range(3)]
            assert transported == list(model.cb)


class TestCurvature:
    def test_zero_jet(self, model):
        rks = spin.curvature_operators(spin.zero_jet(), model)
        assert all(is_zero_matrix(r) for r in rks)

    def test_cancellation_on_donaldson_jets(self, model):
        rng = random.Random(1)
        for _ in range(100):
            jet = spin.random_donaldson_jet(rng)
            assert jet.all_flags()
            assert is_zero_matrix(spin.curvature_sum(jet, model))

    def test_linearity_in_jet(self, model):
        rng = random.Random(2)
        j1 = spin.random_donaldson_jet(rng)
        j2 = spin.violate_jet(spin.zero_jet(), "d_H_Theta", rng)
        # sum of jets maps to sum of operators
        v = tuple(tuple(hk.add2(j1.v[k][m], j2.v[k][m]) for m in range(3))
                  for k in range(3))
        w = tuple(tuple(tuple(hk.add2(j1.w[k][m][i], j2.w[k][m][i]) for i in range(4))
                        for m in range(3)) for k in range(3))
        js = spin.AdiabaticJet(v, w)
        a = spin.curvature_sum(j1, model)
        b = spin.curvature_sum(j2, model)
        c = spin.curvature_sum(js, model)
        assert c == tuple(tuple(a[i][j] + b[i][j] for j in range(2)) for i in range(2))

    def test_constraint_subspace_in_kernel(self, model):
        # basis of the constraint subspace: symmetric ASD slot grids with zero
        # trace; 5 independent (k,m) patterns x 3 ASD generators x 4 slots
        def basis_jets():
            for i_slot in range(4):
                for eta in hk.ASD_BASIS:
                    for k in range(3):
                        for m in range(k, 3):
                            if k == m == 2:
                                continue  # eliminated by the trace condition
                            w = [[[hk.zero2() for _ in range(4)] for _ in range(3)]
                                 for _ in range(3)]
                            w[k][m][i_slot] = eta
                            w[m][k][i_slot] = eta
                            if k == m:
                                w[2][2][i_slot] = hk.scale2(-1, eta)
                            yield spin.AdiabaticJet(
                                spin.zero_jet().v,
                                tuple(tuple(tuple(w[a][b][c] for c in range(4))
                                            for b in range(3)) for a in range(3)))

        count = 0
        for jet in basis_jets():
            assert jet.all_flags()
            assert is_zero_matrix(spin.curvature_sum(jet, model))
            count += 1
        assert count == 4 * 3 * 5

    def test_negative_controls(self, model):
        rng = random.Random(3)
        nonzero = 0
        total = 0
        for which in ("d_H_omega", "d_H_mu", "d_H_Theta"):
            for _ in range(34 if which == "d_H_omega" else 33):
                jet = spin.violate_jet(spin.random_donaldson_jet(rng), which, rng)
                flags = jet.flags()
                if which == "d_H_omega":
                    assert not flags["d_H_omega_sym"]
                if which == "d_H_Theta":
                    assert not flags["d_H_Theta"]
                if which == "d_H_mu":
                    assert not flags["d_H_mu"]
                total += 1
                if not is_zero_matrix(spin.curvature_sum(jet, model)):
                    nonzero += 1
        assert total == 100
        assert nonzero >= 95


class TestDiracVariation:
    def test_zero_jet(self, model):
        z, first = spin.dirac_variation_symbol(spin.zero_jet(), model)
        assert is_zero_matrix(z)
        assert all(is_zero_matrix(c) for c in first)

    def test_vanishing_on_donaldson_jets(self, model):
        rng = random.Random(4)
        for _ in range(100):
            jet = spin.random_donaldson_jet(rng)
            z, first = spin.dirac_variation_symbol(jet, model)
            assert is_zero_matrix(z)
            assert all(is_zero_matrix(c) for c in first)

    def test_symmetry_violation_hits_first_order(self, model):
        rng = random.Random(5)
        hits = 0
        for _ in range(50):
            jet = spin.violate_jet(spin.random_donaldson_jet(rng), "d_H_omega", rng)
            _, first = spin.dirac_variation_symbol(jet, model)
            if any(not is_zero_matrix(c) for c in first):
                hits += 1
        assert hits >= 48

    def test_theta_violation_hits_first_order(self, model):
        rng = random.Random(6)
        hits = 0
        for _ in range(50):
            jet = spin.violate_jet(spin.random_donaldson_jet(rng), "d_H_Theta", rng)
            _, first = spin.dirac_variation_symbol(jet, model)
            if any(not is_zero_matrix(c) for c in first):
                hits += 1
        assert hits >= 48
