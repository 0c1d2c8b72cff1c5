"""Bigraded differential forms on R^3 + R^4 with polynomial coefficients.

A form of degree n is a sparse map (I, J) -> Poly where I is a strictly
increasing tuple of base indices (subset of 0..2) and J of fibre indices
(subset of 3..6), with |I| + |J| = n.  The basis covector for index i in I
is dt_i; for a in J it is the fibre coframe element e^a.  Over a product
fibration e^a is just dx_a; for a nonflat horizontal distribution H the
adapted coframe is e^a = dx_a - sum_i H_i^a dt_i and bigrading is taken in
that coframe (see split_d).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .poly import HORIZONTAL, NVARS, VERTICAL, Poly, Scalar

Key = tuple  # (I, J)


def _merge_sign(a: tuple, b: tuple) -> int:
    """Sign of sorting the concatenation of two strictly increasing tuples."""
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


class BigradedForm:
    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms=None):
        self.degree = degree
        self.terms: dict[Key, Poly] = {}
        if terms:
            for (I, J), p in terms.items():
                self._accumulate(tuple(I), tuple(J), Poly.of(p))

    def _accumulate(self, I: tuple, J: tuple, p: Poly):
        if p.is_zero():
            return
        if list(I) != sorted(set(I)) or list(J) != sorted(set(J)):
            raise ValueError(f"index sets must be strictly increasing: {I}, {J}")
        if any(i not in HORIZONTAL for i in I) or any(a not in VERTICAL for a in J):
            raise ValueError(f"bad index split: {I}, {J}")
        if len(I) + len(J) != self.degree:
            raise ValueError(f"term ({I},{J}) does not have degree {self.degree}")
        key = (I, J)
        s = self.terms.get(key)
        total = p if s is None else s + p
        if total.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = total

    @staticmethod
    def zero(degree: int) -> "BigradedForm":
        return BigradedForm(degree)

    @staticmethod
    def monomial(I: Iterable[int], J: Iterable[int], coeff=1) -> "BigradedForm":
        I, J = tuple(I), tuple(J)
        return BigradedForm(len(I) + len(J), {(I, J): Poly.of(coeff)})

    @staticmethod
    def function(p) -> "BigradedForm":
        return BigradedForm(0, {((), ()): Poly.of(p)})

    @staticmethod
    def covector(index: int, coeff=1) -> "BigradedForm":
        if index in HORIZONTAL:
            return BigradedForm.monomial((index,), (), coeff)
        return BigradedForm.monomial((), (index,), coeff)

    def is_zero(self) -> bool:
        return not self.terms

    def bigrades(self) -> set[tuple[int, int]]:
        return {(len(I), len(J)) for I, J in self.terms}

    def component(self, p: int, q: int) -> "BigradedForm":
        out = BigradedForm(p + q)
        for (I, J), c in self.terms.items():
            if len(I) == p and len(J) == q:
                out._accumulate(I, J, c)
        return out

    def __add__(self, other: "BigradedForm") -> "BigradedForm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch in addition")
        out = BigradedForm(self.degree)
        for (I, J), c in self.terms.items():
            out._accumulate(I, J, c)
        for (I, J), c in other.terms.items():
            out._accumulate(I, J, c)
        return out

    def __neg__(self):
        out = BigradedForm(self.degree)
        for (I, J), c in self.terms.items():
            out._accumulate(I, J, -c)
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BigradedForm":
        out = BigradedForm(self.degree)
        cp = Poly.of(c)
        for (I, J), p in self.terms.items():
            out._accumulate(I, J, cp * p)
        return out

    def __eq__(self, other):
        return (isinstance(other, BigradedForm)
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"0 (degree {self.degree})"
        from .poly import VAR_NAMES

        bits = []
        for (I, J) in sorted(self.terms):
            basis = "".join(f"d{VAR_NAMES[i]}" for i in I) + \
                    "".join(f"e{VAR_NAMES[a]}" for a in J)
            bits.append(f"({self.terms[(I, J)]}) {basis}".strip())
        return " + ".join(bits)


def wedge(a: BigradedForm, b: BigradedForm) -> BigradedForm:
    """Graded-commutative wedge product; exact."""
    out = BigradedForm(a.degree + b.degree)
    for (I1, J1), p1 in a.terms.items():
        for (I2, J2), p2 in b.terms.items():
            if set(I1) & set(I2) or set(J1) & set(J2):
                continue
            sign = _merge_sign(I1, I2) * _merge_sign(J1, J2)
            if len(J1) % 2 and len(I2) % 2:
                sign = -sign
            I = tuple(sorted(I1 + I2))
            J = tuple(sorted(J1 + J2))
            prod = p1 * p2
            out._accumulate(I, J, -prod if sign < 0 else prod)
    return out


def wedge_all(forms: Sequence[BigradedForm]) -> BigradedForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


class HorizontalDistribution:
    """Lift coefficients H_i^a; the lift of d/dt_i is d/dt_i + sum_a H_i^a d/dx_a."""

    def __init__(self, coeffs=None):
        self.coeffs: dict[tuple[int, int], Poly] = {}
        if coeffs:
            for (i, a), p in coeffs.items():
                if i not in HORIZONTAL or a not in VERTICAL:
                    raise ValueError(f"bad lift index ({i},{a})")
                p = Poly.of(p)
                if not p.is_zero():
                    self.coeffs[(i, a)] = p

    @staticmethod
    def flat() -> "HorizontalDistribution":
        return HorizontalDistribution()

    def lift_coeff(self, i: int, a: int) -> Poly:
        return self.coeffs.get((i, a), Poly.const(0))

    def is_flat(self) -> bool:
        return not self.coeffs

    def lift_derivative(self, p: Poly, i: int) -> Poly:
        """Derivative of a function along the horizontal lift of d/dt_i."""
        out = p.diff(i)
        for a in VERTICAL:
            h = self.coeffs.get((i, a))
            if h is not None:
                out = out + h * p.diff(a)
        return out

    def curvature(self) -> dict[int, BigradedForm]:
        """Curvature as a map a -> (2,0)-form K^a; H is integrable iff all zero.

        K^a = sum_{j<i} ([lift_j, lift_i] x_a) dt_j dt_i.
        """
        out = {}
        for a in VERTICAL:
            k = BigradedForm(2)
            for j, i in combinations(HORIZONTAL, 2):
                c = (self.lift_derivative(self.lift_coeff(i, a), j)
                     - self.lift_derivative(self.lift_coeff(j, a), i))
                if not c.is_zero():
                    k = k + BigradedForm.monomial((j, i), (), c)
            out[a] = k
        return out


def exterior_d(a: BigradedForm) -> BigradedForm:
    """Coordinate exterior derivative (product fibration coframe)."""
    out = BigradedForm(a.degree + 1)
    for (I, J), p in a.terms.items():
        for v in range(NVARS):
            dp = p.diff(v)
            if dp.is_zero():
                continue
            dv = BigradedForm.covector(v, dp)
            piece = wedge(dv, BigradedForm.monomial(I, J))
            for key, c in piece.terms.items():
                out._accumulate(key[0], key[1], c)
    return out


def split_d(a: BigradedForm, H: HorizontalDistribution):
    """Split d = d_f + d_H + F_H in the coframe adapted to H.

    The input is interpreted in the adapted coframe {dt_i, e^a}.  The three
    outputs shift the bigrade of each input term by (0,+1), (+1,0), (+2,-1)
    respectively, and their sum is the exterior derivative of a (checked by
    converting to the coordinate coframe).
    """
    df = BigradedForm(a.degree + 1)
    dh = BigradedForm(a.degree + 1)
    fh = BigradedForm(a.degree + 1)
    curv = H.curvature() if not H.is_flat() else {}
    for (I, J), p in a.terms.items():
        base = BigradedForm.monomial(I, J)
        # coefficient derivatives
        for b in VERTICAL:
            dp = p.diff(b)
            if not dp.is_zero():
                piece = wedge(BigradedForm.monomial((), (b,), dp), base)
                for key, c in piece.terms.items():
                    df._accumulate(key[0], key[1], c)
        for i in HORIZONTAL:
            dp = H.lift_derivative(p, i)
            if not dp.is_zero():
                piece = wedge(BigradedForm.monomial((i,), (), dp), base)
                for key, c in piece.terms.items():
                    dh._accumulate(key[0], key[1], c)
        # derivatives of the coframe: d(e^a) has a (1,1) part (-> d_H) and a
        # (2,0) curvature part (-> F_H); dt_i is closed.
        if H.is_flat():
            continue
        for pos, e_a in enumerate(J):
            sign = -1 if (len(I) + pos) % 2 else 1
            rest = BigradedForm.monomial(I, J[:pos] + J[pos + 1:])
            # (1,1) part: sum_{i,b} (d_b H_i^a) dt_i ^ e^b
            for i in HORIZONTAL:
                for b in VERTICAL:
                    h = H.lift_coeff(i, e_a).diff(b)
                    if h.is_zero():
                        continue
                    repl = BigradedForm.monomial((i,), (b,), h * sign * p)
                    piece = wedge(repl, rest)
                    for key, c in piece.terms.items():
                        dh._accumulate(key[0], key[1], c)
            # (2,0) curvature part: e^a -> -K^a
            k = curv.get(e_a)
            if k is not None and not k.is_zero():
                piece = wedge(k.scale(-sign * p), rest)
                for key, c in piece.terms.items():
                    fh._accumulate(key[0], key[1], c)
    return df, dh, fh


def to_coordinate_frame(a: BigradedForm, H: HorizontalDistribution) -> BigradedForm:
    """Rewrite an adapted-coframe form in the coordinate coframe (e^a = dx_a - H_i^a dt_i)."""
    if H.is_flat():
        return a
    out = BigradedForm(a.degree)
    for (I, J), p in a.terms.items():
        factors = [BigradedForm.covector(i) for i in I]
        for e_a in J:
            f = BigradedForm.monomial((), (e_a,))
            for i in HORIZONTAL:
                h = H.lift_coeff(i, e_a)
                if not h.is_zero():
                    f = f - BigradedForm.monomial((i,), (), h)
            factors.append(f)
        piece = BigradedForm.function(p)
        for f in factors:
            piece = wedge(piece, f)
        out = out + piece
    return out


def from_coordinate_frame(a: BigradedForm, H: HorizontalDistribution) -> BigradedForm:
    """Inverse of to_coordinate_frame (dx_a = e^a + H_i^a dt_i)."""
    if H.is_flat():
        return a
    out = BigradedForm(a.degree)
    for (I, J), p in a.terms.items():
        factors = [BigradedForm.covector(i) for i in I]
        for e_a in J:
            f = BigradedForm.monomial((), (e_a,))
            for i in HORIZONTAL:
                h = H.lift_coeff(i, e_a)
                if not h.is_zero():
                    f = f + BigradedForm.monomial((i,), (), h)
            factors.append(f)
        piece = BigradedForm.function(p)
        for f in factors:
            piece = wedge(piece, f)
        out = out + piece
    return out


def eval_on_vectors(a: BigradedForm, vectors: Sequence[Sequence[Scalar]],
                    point: Sequence[Scalar] | None = None) -> Fraction:
    """Evaluate a degree-n form on n constant vectors at a point (default 0).

    Vectors are length-7 rationals in the coordinate ordering t1..t3,x1..x4.
    Only meaningful in a flat coframe (e^a = dx_a).
    """
    if len(vectors) != a.degree:
        raise ValueError("need as many vectors as the form degree")
    pt = point if point is not None else (0,) * NVARS
    total = Fraction(0)
    for (I, J), p in a.terms.items():
        idx = I + J
        c = p.eval(pt)
        if c == 0:
            continue
        total += c * _det([[Fraction(v[i]) for v in vectors] for i in idx])
    return total


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    rows = [row[:] for row in rows]
    sign = 1
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        det *= rows[c][c]
        for r in range(c + 1, n):
            f = rows[r][c] / rows[c][c]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return det * sign
