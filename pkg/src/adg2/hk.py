"""Pointwise hyperkähler algebra on the fibre R^4.

Two-forms are antisymmetric 4x4 Fraction matrices F with F(X,Y) = X^T F Y;
the volume 4-form is a rational multiple of vol4 = dx1 dx2 dx3 dx4.  The
triple determines the metric through g(Y,Z) mu = i_Y w1 ^ i_Z w2 ^ w3, and
variations of the triple decompose into rotation/conformal coefficients
plus anti-self-dual remainders, which carry the whole metric variation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Mat4 = tuple  # 4x4 tuple of tuples of Fraction

_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def form2(entries) -> Mat4:
    """Antisymmetric matrix from {(a,b): coeff} with a < b, or a full matrix."""
    m = [[Fraction(0)] * 4 for _ in range(4)]
    if isinstance(entries, dict):
        for (a, b), c in entries.items():
            c = Fraction(c)
            m[a][b] += c
            m[b][a] -= c
    else:
        for a in range(4):
            for b in range(4):
                m[a][b] = Fraction(entries[a][b])
        for a in range(4):
            for b in range(4):
                if m[a][b] != -m[b][a]:
                    raise ValueError("2-form matrix must be antisymmetric")
    return tuple(tuple(row) for row in m)


def zero2() -> Mat4:
    return form2({})


def add2(a: Mat4, b: Mat4) -> Mat4:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub2(a: Mat4, b: Mat4) -> Mat4:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale2(c, a: Mat4) -> Mat4:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def is_zero2(a: Mat4) -> bool:
    return all(x == 0 for row in a for x in row)


def wedge22(a: Mat4, b: Mat4) -> Fraction:
    """Coefficient of vol4 in a ^ b for 2-forms a, b."""
    return (a[0][1] * b[2][3] + a[2][3] * b[0][1]
            - a[0][2] * b[1][3] - a[1][3] * b[0][2]
            + a[0][3] * b[1][2] + a[1][2] * b[0][3])


def wedge112(u: Sequence, v: Sequence, c: Mat4) -> Fraction:
    """Coefficient of vol4 in u ^ v ^ c for covectors u, v and a 2-form c."""
    return ((u[0] * v[1] - u[1] * v[0]) * c[2][3]
            + (u[2] * v[3] - u[3] * v[2]) * c[0][1]
            - (u[0] * v[2] - u[2] * v[0]) * c[1][3]
            - (u[1] * v[3] - u[3] * v[1]) * c[0][2]
            + (u[0] * v[3] - u[3] * v[0]) * c[1][2]
            + (u[1] * v[2] - u[2] * v[1]) * c[0][3])


def contract(vector: Sequence, a: Mat4) -> tuple:
    """Covector i_Y a, components (a(Y, e_b))_b."""
    return tuple(sum(Fraction(vector[c]) * a[c][b] for c in range(4)) for b in range(4))


STANDARD_TRIPLE: tuple[Mat4, Mat4, Mat4] = (
    form2({(0, 1): 1, (2, 3): 1}),
    form2({(0, 2): 1, (1, 3): -1}),
    form2({(0, 3): 1, (1, 2): 1}),
)

ASD_BASIS: tuple[Mat4, Mat4, Mat4] = (
    form2({(0, 1): 1, (2, 3): -1}),
    form2({(0, 2): 1, (1, 3): 1}),
    form2({(0, 3): 1, (1, 2): -1}),
)


class TripleRelationError(ValueError):
    def __init__(self, pair, value):
        self.pair = pair
        self.value = value
        super().__init__(
            f"hyperkähler relations violated for pair {pair}: residual {value}")


@dataclass(frozen=True)
class HKTriple:
    omega: tuple[Mat4, Mat4, Mat4]
    g: Mat4
    mu: Fraction

    @staticmethod
    def standard() -> "HKTriple":
        g, mu = metric_from_triple(STANDARD_TRIPLE)
        return HKTriple(STANDARD_TRIPLE, g, mu)


@dataclass(frozen=True)
class TripleVariation:
    """First variations (w1dot, w2dot, w3dot) of the triple along one direction."""

    omega_dot: tuple[Mat4, Mat4, Mat4]

    @staticmethod
    def of(w1, w2, w3) -> "TripleVariation":
        return TripleVariation((w1, w2, w3))


@dataclass(frozen=True)
class MetricVariation:
    g_dot: Mat4  # symmetric
    mu_dot: Fraction  # coefficient of vol4


def metric_from_triple(omega: Sequence[Mat4]) -> tuple[Mat4, Fraction]:
    """Recover (g, mu) from a candidate triple via g(Y,Z) mu = i_Y w1 ^ i_Z w2 ^ w3.

    The relations w_i ^ w_j = 2 delta_ij mu are verified first and the three
    cyclic versions of the defining product are required to agree.
    """
    mu = wedge22(omega[0], omega[0]) / 2
    if mu == 0:
        raise TripleRelationError((0, 0), 0)
    for i in range(3):
        for j in range(i, 3):
            want = 2 * mu if i == j else Fraction(0)
            got = wedge22(omega[i], omega[j])
            if got != want:
                raise TripleRelationError((i, j), got - want)
    cyc = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    gs = []
    for (i, j, k) in cyc:
        g = [[Fraction(0)] * 4 for _ in range(4)]
        for a in range(4):
            ya = [Fraction(1 if c == a else 0) for c in range(4)]
            ia = contract(ya, omega[i])
            for b in range(4):
                zb = [Fraction(1 if c == b else 0) for c in range(4)]
                g[a][b] = wedge112(ia, contract(zb, omega[j]), omega[k]) / mu
        gs.append(tuple(tuple(r) for r in g))
    if not (gs[0] == gs[1] == gs[2]):
        raise TripleRelationError(("cyclic",), gs)
    g = gs[0]
    for a in range(4):
        for b in range(4):
            if g[a][b] != g[b][a]:
                raise TripleRelationError(("symmetry",), (a, b))
    return g, mu


def triple(omega: Sequence[Mat4]) -> HKTriple:
    g, mu = metric_from_triple(omega)
    return HKTriple(tuple(omega), g, mu)


def decompose_variation(t: HKTriple, v: TripleVariation):
    """Split each w_i-dot into span{w_j} plus an anti-self-dual remainder.

    Returns (a, b, asd): the traceless projection coefficients a[i][j]
    (antisymmetric exactly when the variation preserves the algebraic
    relations to first order), the conformal coefficient b with
    mu_dot = 2 b mu, and the three ASD remainders.
    """
    c = [[wedge22(v.omega_dot[i], t.omega[j]) / (2 * t.mu) for j in range(3)]
         for i in range(3)]
    b = (c[0][0] + c[1][1] + c[2][2]) / 3
    a = tuple(tuple(c[i][j] - (b if i == j else 0) for j in range(3)) for i in range(3))
    asd = []
    for i in range(3):
        r = v.omega_dot[i]
        for j in range(3):
            r = sub2(r, scale2(c[i][j], t.omega[j]))
        asd.append(r)
    return a, b, tuple(asd)


def conformal_coefficient(t: HKTriple, v: TripleVariation) -> Fraction:
    """b with mu_dot = 2 b mu: the average self-dual diagonal coefficient."""
    return sum(wedge22(v.omega_dot[i], t.omega[i]) for i in range(3)) / (6 * t.mu)


def metric_variation(t: HKTriple, v: TripleVariation) -> MetricVariation:
    """Solve the variation of the defining product for g_dot, given mu_dot = 2 b mu."""
    mu_dot = 2 * conformal_coefficient(t, v) * t.mu
    w1, w2, w3 = t.omega
    w1d, w2d, w3d = v.omega_dot
    g_dot = [[Fraction(0)] * 4 for _ in range(4)]
    for aa in range(4):
        # contraction with a basis vector is row extraction
        r1d, r1 = w1d[aa], w1[aa]
        for bb in range(4):
            rhs = (wedge112(r1d, w2[bb], w3)
                   + wedge112(r1, w2d[bb], w3)
                   + wedge112(r1, w2[bb], w3d))
            g_dot[aa][bb] = (rhs - t.g[aa][bb] * mu_dot) / t.mu
    return MetricVariation(tuple(tuple(r) for r in g_dot), mu_dot)


def complex_structure_matrices(t: HKTriple) -> tuple[Mat4, Mat4, Mat4]:
    """I_i on fibre vectors, from omega_i(X,Y) = g(I_i X, Y)."""
    ginv = _inv4(t.g)
    out = []
    for w in t.omega:
        # (I e_b)_a = sum_c ginv[a][c] * w[b][c] ... w(e_b, e_c) = g(I e_b, e_c)
        m = tuple(tuple(sum(ginv[a][c] * w[b][c] for c in range(4)) for b in range(4))
                  for a in range(4))
        out.append(m)
    return tuple(out)


def recover_form_variation(t: HKTriple, g_dot: Mat4,
                           frame: Sequence[Sequence] | None = None):
    """Invert the metric variation: -(1/2) sum_j I_i e_j-flat ^ i_{e_j} g_dot.

    g_dot must be traceless w.r.t. the triple metric (pure ASD variation);
    frame optionally supplies a g-orthonormal basis (default: coordinate
    frame, valid for the standard triple).
    """
    ginv = _inv4(t.g)
    tr = sum(ginv[a][b] * g_dot[b][a] for a in range(4) for b in range(4))
    if tr != 0:
        raise ValueError(f"g_dot must be traceless; got trace {tr}")
    if frame is None:
        frame = [[Fraction(1 if c == j else 0) for c in range(4)] for j in range(4)]
    for j, e in enumerate(frame):
        for k, f in enumerate(frame):
            ip = sum(e[a] * t.g[a][b] * f[b] for a in range(4) for b in range(4))
            if ip != (1 if j == k else 0):
                raise ValueError("frame is not orthonormal for the triple metric")
    ivec = complex_structure_matrices(t)
    out = []
    for i in range(3):
        m = [[Fraction(0)] * 4 for _ in range(4)]
        for e in frame:
            ie = tuple(sum(ivec[i][a][b] * Fraction(e[b]) for b in range(4))
                       for a in range(4))
            u = tuple(sum(Fraction(ie[c]) * t.g[c][b] for c in range(4))
                      for b in range(4))  # (I_i e_j)-flat
            w = tuple(sum(Fraction(e[c]) * g_dot[c][b] for c in range(4))
                      for b in range(4))  # i_{e_j} g_dot
            # (1/2) sum_j u ^ w equals minus the form variation
            for a in range(4):
                for bidx in range(4):
                    m[a][bidx] -= Fraction(1, 2) * (u[a] * w[bidx] - u[bidx] * w[a])
        out.append(tuple(tuple(row) for row in m))
    return tuple(out)


def clifford_of_variation(t: HKTriple, g_dot: Mat4, k: int, spinor_model=None):
    """Clifford action of the k-th form variation on negative spinors,
    (1/2) sum_{i,j} g_dot(I_k e_i, e_j) c_i c_j, as an exact 2x2 matrix."""
    from .spin import SpinorModel, build_spinor_model

    model: SpinorModel = spinor_model or build_spinor_model()
    ivec = complex_structure_matrices(t)
    from .exact import QQi, madd, mscale, zeros

    out = zeros(2)
    for i in range(4):
        ike = tuple(ivec[k][a][i] for a in range(4))
        for j in range(4):
            coeff = sum(Fraction(ike[c]) * g_dot[c][j] for c in range(4))
            if coeff:
                out = madd(out, mscale(QQi(Fraction(coeff, 2)),
                                       model.cc_minus[i][j]))
    return out


def _inv4(m: Mat4) -> Mat4:
    n = 4
    a = [list(map(Fraction, row)) + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular metric")
        a[c], a[piv] = a[piv], a[c]
        d = a[c][c]
        a[c] = [x / d for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)
