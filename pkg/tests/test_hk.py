import random
from fractions import Fraction

import pytest

from adg2 import hk
from adg2.exact import QQi, mmul, mscale
from adg2.spin import build_spinor_model

F = Fraction


def rand_frac(rng, lo=-4, hi=4):
    return F(rng.randint(lo, hi), rng.randint(1, 3))


def random_asd(rng):
    out = hk.zero2()
    for eta in hk.ASD_BASIS:
        out = hk.add2(out, hk.scale2(rand_frac(rng), eta))
    return out


def rotate_triple(omega, R):
    return tuple(
        hk.add2(hk.add2(hk.scale2(R[i][0], omega[0]), hk.scale2(R[i][1], omega[1])),
                hk.scale2(R[i][2], omega[2]))
        for i in range(3))


# a rational SO(3) matrix (rotation by the 3-4-5 angle around the z axis
# composed with one around x)
R_SO3 = (
    (F(3, 5), F(4, 5), F(0)),
    (F(-4, 5), F(3, 5), F(0)),
    (F(0), F(0), F(1)),
)


class TestMetricFromTriple:
    def test_standard(self):
        g, mu = hk.metric_from_triple(hk.STANDARD_TRIPLE)
        assert mu == 1
        assert g == tuple(tuple(F(1 if a == b else 0) for b in range(4)) for a in range(4))

    def test_scaling(self):
        c = F(3, 2)
        scaled = tuple(hk.scale2(c, w) for w in hk.STANDARD_TRIPLE)
        g, mu = hk.metric_from_triple(scaled)
        assert mu == c ** 2
        assert all(g[a][b] == (c if a == b else 0) for a in range(4) for b in range(4))

    def test_so3_rotation_invariance(self):
        rot = rotate_triple(hk.STANDARD_TRIPLE, R_SO3)
        g, mu = hk.metric_from_triple(rot)
        g0, mu0 = hk.metric_from_triple(hk.STANDARD_TRIPLE)
        assert (g, mu) == (g0, mu0)

    def test_reject_bad_triple(self):
        bad = (hk.STANDARD_TRIPLE[0], hk.STANDARD_TRIPLE[1],
               hk.add2(hk.STANDARD_TRIPLE[2], hk.scale2(F(1, 2), hk.STANDARD_TRIPLE[0])))
        with pytest.raises(hk.TripleRelationError) as err:
            hk.metric_from_triple(bad)
        assert err.value.pair in {(0, 2), (2, 2)}


class TestDecomposeVariation:
    def setup_method(self):
        self.t = hk.HKTriple.standard()

    def test_basis_case(self):
        v = hk.TripleVariation.of(hk.STANDARD_TRIPLE[1], hk.zero2(), hk.zero2())
        a, b, asd = hk.decompose_variation(self.t, v)
        assert b == 0
        assert a[0][1] == 1
        assert sum(abs(a[i][j]) for i in range(3) for j in range(3)) == 1
        assert all(hk.is_zero2(r) for r in asd)

    def test_asd_case(self):
        eta = hk.form2({(0, 1): 1, (2, 3): -1})
        v = hk.TripleVariation.of(hk.zero2(), hk.zero2(), eta)
        a, b, asd = hk.decompose_variation(self.t, v)
        assert b == 0 and all(x == 0 for row in a for x in row)
        assert asd[2] == eta and hk.is_zero2(asd[0]) and hk.is_zero2(asd[1])

    def test_conformal_case(self):
        c = F(5, 3)
        v = hk.TripleVariation.of(*(hk.scale2(c, w) for w in hk.STANDARD_TRIPLE))
        a, b, asd = hk.decompose_variation(self.t, v)
        assert b == c
        assert all(x == 0 for row in a for x in row)
        assert all(hk.is_zero2(r) for r in asd)

    def test_projection_idempotent_and_orthogonal(self):
        rng = random.Random(0)
        for _ in range(20):
            v = hk.TripleVariation.of(*(random_asd(rng) for _ in range(3)))
            # add random span and conformal parts
            c = rand_frac(rng)
            rot = [[rand_frac(rng) for _ in range(3)] for _ in range(3)]
            full = []
            for i in range(3):
                w = v.omega_dot[i]
                w = hk.add2(w, hk.scale2(c, hk.STANDARD_TRIPLE[i]))
                for j in range(3):
                    w = hk.add2(w, hk.scale2(rot[i][j], hk.STANDARD_TRIPLE[j]))
                full.append(w)
            a, b, asd = hk.decompose_variation(self.t, hk.TripleVariation.of(*full))
            # re-decomposition of the ASD remainder is trivial
            a2, b2, asd2 = hk.decompose_variation(self.t, hk.TripleVariation.of(*asd))
            assert b2 == 0 and all(x == 0 for row in a2 for x in row)
            assert asd2 == asd
            # components are wedge-orthogonal
            for r in asd:
                for w in hk.STANDARD_TRIPLE:
                    assert hk.wedge22(r, w) == 0


class TestMetricVariation:
    def setup_method(self):
        self.t = hk.HKTriple.standard()

    def test_worked_example(self):
        # variation of the third form by dx1 dx2 - dx3 dx4 moves the metric by
        # -dx1.dx3 - dx3.dx1 + dx2.dx4 + dx4.dx2
        eta = hk.form2({(0, 1): 1, (2, 3): -1})
        v = hk.TripleVariation.of(hk.zero2(), hk.zero2(), eta)
        mv = hk.metric_variation(self.t, v)
        want = [[0] * 4 for _ in range(4)]
        want[0][2] = want[2][0] = -1
        want[1][3] = want[3][1] = 1
        assert mv.g_dot == tuple(tuple(F(x) for x in row) for row in want)
        assert mv.mu_dot == 0

    def test_zero(self):
        v = hk.TripleVariation.of(hk.zero2(), hk.zero2(), hk.zero2())
        mv = hk.metric_variation(self.t, v)
        assert hk.is_zero2(mv.g_dot) and mv.mu_dot == 0

    def test_pure_rotation_gives_zero(self):
        rng = random.Random(1)
        for _ in range(10):
            a01, a02, a12 = (rand_frac(rng) for _ in range(3))
            rot = ((F(0), a01, a02), (-a01, F(0), a12), (-a02, -a12, F(0)))
            full = []
            for i in range(3):
                w = hk.zero2()
                for j in range(3):
                    w = hk.add2(w, hk.scale2(rot[i][j], hk.STANDARD_TRIPLE[j]))
                full.append(w)
            mv = hk.metric_variation(self.t, hk.TripleVariation.of(*full))
            assert hk.is_zero2(mv.g_dot) and mv.mu_dot == 0

    def test_conformal_scales_metric(self):
        c = F(7, 4)
        v = hk.TripleVariation.of(*(hk.scale2(c, w) for w in hk.STANDARD_TRIPLE))
        mv = hk.metric_variation(self.t, v)
        assert mv.mu_dot == 2 * c
        # g_dot = b * g here (trace part only)
        assert mv.g_dot == tuple(tuple(c if a == b else F(0) for b in range(4))
                                 for a in range(4))


class TestRecoverFormVariation:
    def setup_method(self):
        self.t = hk.HKTriple.standard()

    def test_worked_example_inverse(self):
        g_dot = [[F(0)] * 4 for _ in range(4)]
        g_dot[0][2] = g_dot[2][0] = F(-1)
        g_dot[1][3] = g_dot[3][1] = F(1)
        forms = hk.recover_form_variation(self.t, tuple(map(tuple, g_dot)))
        assert hk.is_zero2(forms[0]) and hk.is_zero2(forms[1])
        assert forms[2] == hk.form2({(0, 1): 1, (2, 3): -1})

    def test_zero(self):
        z = tuple(tuple(F(0) for _ in range(4)) for _ in range(4))
        forms = hk.recover_form_variation(self.t, z)
        assert all(hk.is_zero2(f) for f in forms)

    def test_roundtrip_on_asd(self):
        rng = random.Random(2)
        for _ in range(100):
            v = hk.TripleVariation.of(*(random_asd(rng) for _ in range(3)))
            mv = hk.metric_variation(self.t, v)
            back = hk.recover_form_variation(self.t, mv.g_dot)
            assert back == v.omega_dot

    def test_traceless_required(self):
        g_dot = tuple(tuple(F(1 if a == b else 0) for b in range(4)) for a in range(4))
        with pytest.raises(ValueError):
            hk.recover_form_variation(self.t, g_dot)

    def test_frame_independence(self):
        # a rational orthogonal frame (columns of a 3-4-5 rotation in two planes)
        c, s = F(3, 5), F(4, 5)
        frame = (
            (c, -s, F(0), F(0)),
            (s, c, F(0), F(0)),
            (F(0), F(0), c, -s),
            (F(0), F(0), s, c),
        )
        rng = random.Random(3)
        for _ in range(20):
            v = hk.TripleVariation.of(*(random_asd(rng) for _ in range(3)))
            mv = hk.metric_variation(self.t, v)
            a = hk.recover_form_variation(self.t, mv.g_dot)
            b = hk.recover_form_variation(self.t, mv.g_dot, frame=frame)
            assert a == b


class TestCyclicIdentities:
    """The four-family variation identities relating g_dot and the form dots."""

    def setup_method(self):
        self.t = hk.HKTriple.standard()
        self.ivec = hk.complex_structure_matrices(self.t)

    def _check_families(self, v):
        mv = hk.metric_variation(self.t, v)
        gd = mv.g_dot
        ivec = self.ivec

        def apply(m, vec):
            return tuple(sum(m[a][b] * vec[b] for b in range(4)) for a in range(4))

        for y in range(4):
            ey = tuple(F(1 if i == y else 0) for i in range(4))
            iys = [apply(ivec[i], ey) for i in range(3)]
            for z in range(4):
                ez = tuple(F(1 if i == z else 0) for i in range(4))

                def w(i, vec):
                    return sum(vec[a] * v.omega_dot[i][a][b] * ez[b]
                               for a in range(4) for b in range(4))

                def gdot(vec):
                    return sum(vec[a] * gd[a][b] * ez[b]
                               for a in range(4) for b in range(4))

                assert gdot(ey) == -(w(0, iys[0]) + w(1, iys[1]) + w(2, iys[2]))
                assert gdot(iys[0]) == w(0, ey) + w(1, iys[2]) - w(2, iys[1])
                assert gdot(iys[1]) == -w(0, iys[2]) + w(1, ey) + w(2, iys[0])
                assert gdot(iys[2]) == w(0, iys[1]) - w(1, iys[0]) + w(2, ey)

    def test_on_random_asd(self):
        rng = random.Random(4)
        for _ in range(100):
            self._check_families(hk.TripleVariation.of(*(random_asd(rng) for _ in range(3))))

    def test_jet_level_slots(self):
        # independent random tensors in the derivative slots obey the same identities
        rng = random.Random(5)
        for _ in range(50):
            self._check_families(hk.TripleVariation.of(*(random_asd(rng) for _ in range(3))))


class TestCliffordOfVariation:
    def setup_method(self):
        self.t = hk.HKTriple.standard()
        self.model = build_spinor_model()

    def test_worked_example(self):
        g_dot = [[F(0)] * 4 for _ in range(4)]
        g_dot[0][2] = g_dot[2][0] = F(-1)
        g_dot[1][3] = g_dot[3][1] = F(1)
        g_dot = tuple(map(tuple, g_dot))
        # k = 3: equals c(dx1 dx2 - dx3 dx4) = 2 c1 c2 on negative spinors
        got = hk.clifford_of_variation(self.t, g_dot, 2, self.model)
        c1c2 = self.model.cc_minus[0][1]
        assert got == mscale(QQi(2), c1c2)
        direct = self.model.c_form2_minus(hk.form2({(0, 1): 1, (2, 3): -1}))
        assert got == direct
        # k = 1, 2: zero
        for k in (0, 1):
            assert all(not bool(x) for row in
                       hk.clifford_of_variation(self.t, g_dot, k, self.model) for x in row)

    def test_zero(self):
        z = tuple(tuple(F(0) for _ in range(4)) for _ in range(4))
        for k in range(3):
            out = hk.clifford_of_variation(self.t, z, k, self.model)
            assert all(not bool(x) for row in out for x in row)

    def test_matches_direct_action_on_random(self):
        rng = random.Random(6)
        for _ in range(50):
            v = hk.TripleVariation.of(*(random_asd(rng) for _ in range(3)))
            mv = hk.metric_variation(self.t, v)
            for k in range(3):
                got = hk.clifford_of_variation(self.t, mv.g_dot, k, self.model)
                assert got == self.model.c_form2_minus(v.omega_dot[k])

    def test_action_on_positive_spinors_vanishes(self):
        rng = random.Random(7)
        for _ in range(20):
            eta = random_asd(rng)
            assert all(not bool(x) for row in self.model.c_form2_plus(eta) for x in row)
