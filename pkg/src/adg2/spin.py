"""Spinor algebra for the split 3+4 model, with exact Gaussian-rational matrices.

Conventions, frozen here and proved by build_spinor_model():
  * fibre half-spinors S+ and S- are each C^2; the fibre Clifford action of
    the coordinate vectors e_1..e_4 is built from the quaternion units
    q_0 = 1, q_k = -i sigma_k, with e_a: S- -> S+ given by q_{a-1} and
    S+ -> S- by -q_{a-1}^dagger;
  * the base Clifford action is c_B(dt_k) = -i sigma_k, so that
    c_B(dt_1) c_B(dt_2) c_B(dt_3) = -1;
  * with these choices the self-dual forms act on S+ only, the anti-self-dual
    forms on S- only, the operators (1/2) c(omega_i) on S+ satisfy the
    quaternion relations, and c(vol4) = +1 on S-, -1 on S+.

The total module S = S_X (x) S_B is ordered (u1,u2,v1,v2) (x) (b1,b2) with
u = S- and v = S+; indices 0..3 are the S- (x) S_B block and 4..7 the
S+ (x) S_B block.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import hk
from .exact import (
    QQi,
    dagger,
    eye,
    frac_sqrt,
    is_zero_matrix,
    kernel_basis,
    kron,
    madd,
    mchain,
    mmul,
    mscale,
    msub,
    mtrace,
    zeros,
)

I_ = QQi(0, 1)

SIGMA = (
    ((QQi(0), QQi(1)), (QQi(1), QQi(0))),
    ((QQi(0), -I_), (I_, QQi(0))),
    ((QQi(1), QQi(0)), (QQi(0), QQi(-1))),
)

Q_UNITS = (eye(2),) + tuple(mscale(-I_, s) for s in SIGMA)

EPSILON2 = ((QQi(0), QQi(1)), (QQi(-1), QQi(0)))  # complex volume form on C^2


def _conj_linear_j(v: Sequence[QQi]) -> tuple:
    """Quaternionic structure on C^2: j(z1, z2) = (-conj z2, conj z1)."""
    return (-v[1].conj(), v[0].conj())


class ConventionError(AssertionError):
    pass


@dataclass(frozen=True)
class SpinorModel:
    mp: tuple  # c(e_a): S- -> S+, four 2x2 matrices
    pm: tuple  # c(e_a): S+ -> S-
    cb: tuple  # c_B(dt_k), three 2x2 matrices
    i_sp: tuple  # (1/2) c(omega_i) on S+
    cc_plus: tuple  # (c_a c_b)|_{S+}
    cc_minus: tuple  # (c_a c_b)|_{S-}
    ccc: tuple  # (c_l c_i c_j): S- -> S+, indexed [l][i][j]

    def clifford7(self, eps: Fraction = Fraction(1)):
        """The 8x8 module action of the seven coordinate vectors at scale eps."""
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        ops = []
        for a in range(4):
            m = [[QQi(0)] * 8 for _ in range(8)]
            _place(m, 0, 4, mscale(QQi(eps), kron(self.pm[a], eye(2))))
            _place(m, 4, 0, kron(self.mp[a], eye(2)))
            ops.append(tuple(map(tuple, m)))
        t_ops = []
        for k in range(3):
            m = [[QQi(0)] * 8 for _ in range(8)]
            _place(m, 0, 0, kron(eye(2), self.cb[k]))
            _place(m, 4, 4, mscale(QQi(-1), kron(eye(2), self.cb[k])))
            t_ops.append(tuple(map(tuple, m)))
        return tuple(t_ops), tuple(ops)

    def c_lambda(self):
        """Action of the base 3-form -dt1 dt2 dt3 on S."""
        t_ops, _ = self.clifford7()
        return mscale(QQi(-1), mchain(t_ops[0], t_ops[1], t_ops[2]))

    def c_mu(self):
        """Action of the fibre volume form, with the scale-free normalization."""
        _, x_ops = self.clifford7(Fraction(1))
        return mchain(x_ops[0], x_ops[1], x_ops[2], x_ops[3])

    def c_omega_block(self):
        """c(omega) = -sum_i c_X(omega_i) (x) c_B(dt_i) on the S+ (x) S_B block (4x4)."""
        out = zeros(4)
        for i in range(3):
            out = msub(out, kron(mscale(QQi(2), self.i_sp[i]), self.cb[i]))
        return out

    def c_theta_block(self):
        """c(Theta) = -sum_cyc c_X(omega_i) (x) c_B(dt_j) c_B(dt_k) on S+ (x) S_B."""
        out = zeros(4)
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            out = msub(out, kron(mscale(QQi(2), self.i_sp[i]),
                                 mmul(self.cb[j], self.cb[k])))
        return out

    def c_form2_minus(self, w: hk.Mat4):
        """Clifford action of a fibre 2-form on S-."""
        out = zeros(2)
        for a in range(4):
            for b in range(a + 1, 4):
                if w[a][b]:
                    out = madd(out, mscale(QQi(w[a][b]), self.cc_minus[a][b]))
        return out

    def c_form2_plus(self, w: hk.Mat4):
        out = zeros(2)
        for a in range(4):
            for b in range(a + 1, 4):
                if w[a][b]:
                    out = madd(out, mscale(QQi(w[a][b]), self.cc_plus[a][b]))
        return out


def _place(m, r0, c0, block):
    for i, row in enumerate(block):
        for j, v in enumerate(row):
            m[r0 + i][c0 + j] = v


def build_spinor_model(corrupt: str | None = None) -> SpinorModel:
    """Construct the concrete model and prove every frozen convention.

    corrupt is a test hook: "i2_sign" flips one quaternion unit before the
    derived operators are formed, which downstream identity suites must
    catch (the construction checks that cannot see the flip are skipped).
    """
    mp = tuple(Q_UNITS)
    pm = (mscale(QQi(-1), eye(2)),) + tuple(Q_UNITS[1:])
    cb = tuple(Q_UNITS[1:])
    if corrupt == "i2_sign":
        mp = (mp[0], mp[1], mscale(QQi(-1), mp[2]), mp[3])

    cc_plus = tuple(tuple(mmul(mp[a], pm[b]) for b in range(4)) for a in range(4))
    cc_minus = tuple(tuple(mmul(pm[a], mp[b]) for b in range(4)) for a in range(4))
    ccc = tuple(tuple(tuple(mmul(mp[l], cc_minus[i][j]) for j in range(4))
                      for i in range(4)) for l in range(4))

    i_sp = []
    for w in hk.STANDARD_TRIPLE:
        m = zeros(2)
        for a in range(4):
            for b in range(a + 1, 4):
                if w[a][b]:
                    m = madd(m, mscale(QQi(Fraction(w[a][b], 2)), cc_plus[a][b]))
        i_sp.append(m)
    model = SpinorModel(mp, pm, cb, tuple(i_sp), cc_plus, cc_minus, ccc)

    if corrupt is None:
        _verify_conventions(model)
    return model


def _verify_conventions(model: SpinorModel):
    # base convention: c_B(dt1) c_B(dt2) c_B(dt3) = -1
    if mchain(*model.cb) != mscale(QQi(-1), eye(2)):
        raise ConventionError("base volume convention failed")
    # quaternion relations for the S+ operators
    for i in range(3):
        if mmul(model.i_sp[i], model.i_sp[i]) != mscale(QQi(-1), eye(2)):
            raise ConventionError("i_sp squares")
    if mmul(model.i_sp[0], model.i_sp[1]) != model.i_sp[2]:
        raise ConventionError("i_sp product")
    # Clifford relations of the full module at two scales
    for eps in (Fraction(1), Fraction(1, 3)):
        t_ops, x_ops = model.clifford7(eps)
        for a in range(4):
            for b in range(4):
                anti = madd(mmul(x_ops[a], x_ops[b]), mmul(x_ops[b], x_ops[a]))
                want = mscale(QQi(-2 * eps if a == b else 0), eye(8))
                if anti != want:
                    raise ConventionError("vertical Clifford relation")
        for i in range(3):
            for j in range(3):
                anti = madd(mmul(t_ops[i], t_ops[j]), mmul(t_ops[j], t_ops[i]))
                want = mscale(QQi(-2 if i == j else 0), eye(8))
                if anti != want:
                    raise ConventionError("horizontal Clifford relation")
            for a in range(4):
                anti = madd(mmul(x_ops[a], t_ops[i]), mmul(t_ops[i], x_ops[a]))
                if not is_zero_matrix(anti):
                    raise ConventionError("mixed Clifford relation")
    # chirality of the form actions
    for i, w in enumerate(hk.STANDARD_TRIPLE):
        if not is_zero_matrix(model.c_form2_minus(w)):
            raise ConventionError("self-dual form acts on S-")
    for eta in hk.ASD_BASIS:
        if not is_zero_matrix(model.c_form2_plus(eta)):
            raise ConventionError("anti-self-dual form acts on S+")
    # volume actions: c(lambda) c(mu) = 1 and the block signs
    lam = model.c_lambda()
    mu = model.c_mu()
    if mmul(lam, mu) != eye(8):
        raise ConventionError("lambda mu product")
    for blk, sign in ((0, 1), (4, -1)):
        for i in range(4):
            for j in range(4):
                want = QQi(sign if i == j else 0)
                if lam[blk + i][blk + j] != want or mu[blk + i][blk + j] != want:
                    raise ConventionError("volume block signs")
    # c(Theta) = c(omega)
    if model.c_theta_block() != model.c_omega_block():
        raise ConventionError("Theta and omega actions differ")


def c_omega_decomposition(model: SpinorModel):
    """Exact eigen-decomposition of c(omega) on S+ (x) S_B.

    Returns a dict eigenvalue -> list of exact basis vectors; the spectrum is
    verified to be {-6 (multiplicity 1), 2 (multiplicity 3)}.
    """
    om = model.c_omega_block()
    shifted_m6 = msub(om, mscale(QQi(-6), eye(4)))
    shifted_p2 = msub(om, mscale(QQi(2), eye(4)))
    k_m6 = kernel_basis(shifted_m6)
    k_p2 = kernel_basis(shifted_p2)
    if len(k_m6) != 1 or len(k_p2) != 3:
        raise ConventionError(
            f"spectrum multiplicities wrong: {len(k_m6)} and {len(k_p2)}")
    # the two eigenspaces exhaust the space: trace check
    if mtrace(om) != QQi(-6 + 3 * 2):
        raise ConventionError("trace inconsistent with spectrum")
    return {-6: k_m6, 2: k_p2}


def real_structure_fixed(v: Sequence[QQi]) -> tuple:
    """Apply the canonical real structure (j (x) j) on S+ (x) S_B to a vector.

    With j(z1, z2) = (-conj z2, conj z1) on each factor:
    (j (x) j v)_{alpha beta} = (-1)^(alpha+beta) conj(v_{1-alpha, 1-beta}).
    """
    out = [QQi(0)] * 4
    for alpha in range(2):
        for beta in range(2):
            s = 1 if (alpha + beta) % 2 == 0 else -1
            out[2 * alpha + beta] = QQi(s) * v[2 * (1 - alpha) + (1 - beta)].conj()
    return tuple(out)


def canonical_phi(model: SpinorModel, sign: int = 1):
    """The canonical unit map S+ -> S_B built from the -6 eigenvector.

    Returns a 2x2 matrix Phi with Phi I_i^{S+} = c_B(dt_i) Phi, unitary and
    complex-volume preserving.  sign selects between the two real unit
    sections; both are valid and downstream quantities must not depend on the
    choice.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    dec = c_omega_decomposition(model)
    v = dec[-6][0]
    fixed = tuple(a + b for a, b in zip(v, real_structure_fixed(v)))
    if all(not bool(c) for c in fixed):
        v = tuple(I_ * c for c in v)
        fixed = tuple(a + b for a, b in zip(v, real_structure_fixed(v)))
    # view in Hom(S+, S_B) through the complex volume form on S+:
    # (u (x) w) |-> eps(u, .) w, i.e. Phi[beta][s] = sum_alpha eps[alpha][s] v_{alpha beta}
    phi = [[QQi(0)] * 2 for _ in range(2)]
    for alpha in range(2):
        for beta in range(2):
            for s in range(2):
                phi[beta][s] += EPSILON2[alpha][s] * fixed[2 * alpha + beta]
    phi = tuple(map(tuple, phi))
    gram = mmul(dagger(phi), phi)
    scale2 = gram[0][0]
    if gram != mscale(scale2, eye(2)) or not bool(scale2) or scale2.im != 0:
        raise ConventionError("eigenvector does not induce a conformal map")
    norm = frac_sqrt(scale2.re)
    phi = mscale(QQi(Fraction(sign, 1) / norm), phi)
    for i in range(3):
        if mmul(phi, model.i_sp[i]) != mmul(model.cb[i], phi):
            raise ConventionError("intertwining failed")
    if mmul(dagger(phi), phi) != eye(2):
        raise ConventionError("phi not unitary")
    # complex volume forms correspond: eps_B(phi a, phi b) = det(phi) eps_+(a, b)
    det = phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0]
    if det != QQi(1):
        raise ConventionError("phi does not preserve the complex volume forms")
    return phi


# ----------------------------------------------------------------------------
# jets and the curvature identities


@dataclass(frozen=True)
class AdiabaticJet:
    """Pointwise jet of the fibrewise structure along the base directions.

    v[k][m]    : variation of the m-th triple form along direction t_k;
    w[k][m][i] : its fibre derivative in direction e_i (flat background, so
                 plain derivative slots).
    All entries are antisymmetric 4x4 Fraction matrices.
    """

    v: tuple
    w: tuple

    def flags(self) -> dict:
        std = hk.HKTriple.standard()

        def sd_free(m):
            a, b, _ = hk.decompose_variation(std, hk.TripleVariation.of(*m))
            return b == 0 and all(x == 0 for row in a for x in row)

        sym = all(self.v[k][m] == self.v[m][k] for k in range(3) for m in range(3))
        sym = sym and all(self.w[k][m][i] == self.w[m][k][i]
                          for k in range(3) for m in range(3) for i in range(4))
        trace_zero = hk.is_zero2(_sum2(self.v[k][k] for k in range(3))) and all(
            hk.is_zero2(_sum2(self.w[k][k][i] for k in range(3))) for i in range(4))
        b_zero = True
        asd = True
        for k in range(3):
            _, b, rem = hk.decompose_variation(std, hk.TripleVariation.of(*self.v[k]))
            b_zero = b_zero and b == 0
            asd = asd and sd_free(self.v[k])
            for i in range(4):
                tri = tuple(self.w[k][m][i] for m in range(3))
                _, bi, _ = hk.decompose_variation(std, hk.TripleVariation.of(*tri))
                b_zero = b_zero and bi == 0
                asd = asd and sd_free(tri)
        return {"d_H_omega_sym": sym, "d_H_mu": b_zero,
                "d_H_Theta": trace_zero, "asd": asd}

    def all_flags(self) -> bool:
        return all(self.flags().values())


def _sum2(mats):
    out = hk.zero2()
    for m in mats:
        out = hk.add2(out, m)
    return out


def zero_jet() -> AdiabaticJet:
    z = hk.zero2()
    return AdiabaticJet(
        tuple(tuple(z for _ in range(3)) for _ in range(3)),
        tuple(tuple(tuple(z for _ in range(4)) for _ in range(3)) for _ in range(3)),
    )


def random_asd(rng) -> hk.Mat4:
    out = hk.zero2()
    for eta in hk.ASD_BASIS:
        out = hk.add2(out, hk.scale2(Fraction(rng.randint(-6, 6), rng.randint(1, 3)), eta))
    return out


def random_donaldson_jet(rng) -> AdiabaticJet:
    """A random jet satisfying every constraint: symmetric, ASD, trace-free."""

    def sym_tracefree():
        grid = [[None] * 3 for _ in range(3)]
        for k in range(3):
            for m in range(k, 3):
                grid[k][m] = random_asd(rng)
                grid[m][k] = grid[k][m]
        grid[2][2] = hk.sub2(hk.scale2(-1, grid[0][0]), grid[1][1])
        return tuple(tuple(row) for row in grid)

    v = sym_tracefree()
    w_per_i = [sym_tracefree() for _ in range(4)]
    w = tuple(tuple(tuple(w_per_i[i][k][m] for i in range(4)) for m in range(3))
              for k in range(3))
    return AdiabaticJet(v, w)


def violate_jet(jet: AdiabaticJet, which: str, rng) -> AdiabaticJet:
    """Break exactly the named constraint in the derivative slots (and mirror
    the break in the zeroth-order slots so both identity families see it)."""
    v = [list(row) for row in jet.v]
    w = [[list(slots) for slots in row] for row in jet.w]
    if which == "d_H_omega":
        delta = random_asd(rng)
        while hk.is_zero2(delta):
            delta = random_asd(rng)
        v[0][1] = hk.add2(v[0][1], delta)
        for i in range(4):
            d = random_asd(rng)
            if hk.is_zero2(d):
                d = hk.ASD_BASIS[0]
            w[0][1][i] = hk.add2(w[0][1][i], d)
    elif which == "d_H_Theta":
        # diagonal additions keep the symmetry flag but break the trace
        delta = random_asd(rng)
        while hk.is_zero2(delta):
            delta = random_asd(rng)
        v[0][0] = hk.add2(v[0][0], delta)
        for i in range(4):
            d = random_asd(rng)
            if hk.is_zero2(d):
                d = hk.ASD_BASIS[1]
            w[0][0][i] = hk.add2(w[0][0][i], d)
    elif which == "d_H_mu":
        # conformal injection on the k-diagonal: b^k becomes nonzero while the
        # symmetry flag survives (a standalone volume violation necessarily
        # disturbs the trace too, since self-dual parts cannot cancel in it)
        c = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        k = rng.randrange(3)
        v[k][k] = hk.add2(v[k][k], hk.scale2(3 * c, hk.STANDARD_TRIPLE[k]))
        for i in range(4):
            w[k][k][i] = hk.add2(w[k][k][i], hk.scale2(3 * c, hk.STANDARD_TRIPLE[k]))
    else:
        raise ValueError(f"unknown constraint {which}")
    return AdiabaticJet(tuple(tuple(r) for r in v),
                        tuple(tuple(tuple(s) for s in row) for row in w))


def jet_metric_slots(jet: AdiabaticJet):
    """Derived metric-variation data: (Lg)_k and the derivative slots (Lg)_k^(i)."""
    std = hk.HKTriple.standard()
    g0 = [hk.metric_variation(std, hk.TripleVariation.of(*jet.v[k])).g_dot
          for k in range(3)]
    g1 = [[hk.metric_variation(
        std, hk.TripleVariation.of(*(jet.w[k][m][i] for m in range(3)))).g_dot
        for i in range(4)] for k in range(3)]
    return g0, g1


def curvature_operators(jet: AdiabaticJet, model: SpinorModel):
    """The three maps S- -> S+ assembled from the mixed curvature of the
    limiting connection on a flat fibre background."""
    _, g1 = jet_metric_slots(jet)
    out = []
    for k in range(3):
        rk = [[QQi(0), QQi(0)], [QQi(0), QQi(0)]]
        for l, i, j in product(range(4), repeat=3):
            coeff = g1[k][i][l][j] - g1[k][j][l][i]
            if not coeff:
                continue
            q = QQi(-coeff / 8)
            term = model.ccc[l][i][j]
            for r in range(2):
                for c in range(2):
                    rk[r][c] = rk[r][c] + q * term[r][c]
        out.append(tuple(map(tuple, rk)))
    return tuple(out)


def curvature_sum(jet: AdiabaticJet, model: SpinorModel):
    """sum_k I_k^{S+} R~_k, which vanishes exactly on constraint-compatible jets."""
    rks = curvature_operators(jet, model)
    out = zeros(2)
    for k in range(3):
        out = madd(out, mmul(model.i_sp[k], rks[k]))
    return out


def dirac_variation_symbol(jet: AdiabaticJet, model: SpinorModel):
    """Operator symbol of sum_k I_k^{S+} [nabla_{t_k}, D^-].

    Returns (zeroth, first) with zeroth a 2x2 matrix (equal to minus the
    curvature sum) and first a list of four 2x2 coefficient matrices, one per
    fibre derivative direction.  All vanish exactly on compatible jets.
    """
    g0, _ = jet_metric_slots(jet)
    zeroth = mscale(QQi(-1), curvature_sum(jet, model))
    first = []
    for i in range(4):
        ci = zeros(2)
        for k in range(3):
            inner = zeros(2)
            for j in range(4):
                if g0[k][i][j]:
                    inner = madd(inner, mscale(QQi(g0[k][i][j]), model.mp[j]))
            ci = madd(ci, mmul(model.i_sp[k], inner))
        first.append(mscale(QQi(Fraction(-1, 2)), ci))
    return zeroth, tuple(first)
