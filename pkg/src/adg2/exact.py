"""Exact arithmetic helpers: Gaussian rationals and small dense matrices.

Everything in the pointwise algebra modules (g2lin, hk, spin) runs over
Fraction or QQi entries, so "equals zero" always means exactly zero.
Matrices are plain tuples of tuples; the sizes involved are 2x2 .. 8x8 and
clarity beats speed here.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Union[int, Fraction]


class QQi:
    """A Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rat = 0, im: Rat = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _mk(cls, re: Fraction, im: Fraction) -> "QQi":
        out = object.__new__(cls)
        out.re = re
        out.im = im
        return out

    @staticmethod
    def of(value) -> "QQi":
        if isinstance(value, QQi):
            return value
        return QQi(value)

    def __add__(self, other):
        o = other if isinstance(other, QQi) else QQi(other)
        return QQi._mk(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi._mk(-self.re, -self.im)

    def __sub__(self, other):
        o = other if isinstance(other, QQi) else QQi(other)
        return QQi._mk(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QQi.of(other) - self

    def __mul__(self, other):
        o = other if isinstance(other, QQi) else QQi(other)
        return QQi._mk(self.re * o.re - self.im * o.im,
                       self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if isinstance(other, QQi) else QQi(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi._mk((self.re * o.re + self.im * o.im) / d,
                       (self.im * o.re - self.re * o.im) / d)

    def conj(self) -> "QQi":
        return QQi._mk(self.re, -self.im)

    def __eq__(self, other):
        o = QQi.of(other)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def to_complex(self) -> complex:
        return float(self.re) + 1j * float(self.im)


I_UNIT = QQi(0, 1)

Matrix = tuple  # tuple of tuples, entries QQi or Fraction


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(QQi.of(e) for e in row) for row in rows)


def fmat(rows: Iterable[Iterable]) -> Matrix:
    """Matrix with plain Fraction entries (real exact matrices)."""
    return tuple(tuple(Fraction(e) for e in row) for row in rows)


def zeros(n: int, m: int | None = None, field=QQi) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(field(0) for _ in range(m)) for _ in range(n))


def eye(n: int, field=QQi) -> Matrix:
    return tuple(tuple(field(1 if i == j else 0) for j in range(n)) for i in range(n))


def madd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def msub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mscale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def mmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum((a[i][s] * bt[j][s] for s in range(k)), a[i][0] * 0)
              for j in range(m))
        for i in range(n)
    )


def mchain(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = mmul(out, m)
    return out


def mtrace(a: Matrix):
    return sum((a[i][i] for i in range(1, len(a))), a[0][0])


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def dagger(a: Matrix) -> Matrix:
    return tuple(tuple(a[j][i].conj() for j in range(len(a))) for i in range(len(a[0])))


def kron(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(a[0])
    p, q = len(b), len(b[0])
    return tuple(
        tuple(a[i // p][j // q] * b[i % p][j % q] for j in range(m * q))
        for i in range(n * p)
    )


def is_zero_matrix(a: Matrix) -> bool:
    return all(not bool(QQi.of(x)) for row in a for x in row)


def mat_apply(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum((a[i][j] * v[j] for j in range(1, len(v))), a[i][0] * v[0])
                 for i in range(len(a)))


def kernel_basis(a: Matrix) -> list[tuple]:
    """Exact kernel basis of a QQi matrix via Gaussian elimination."""
    rows = [list(r) for r in mat(a)]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if bool(rows[i][c])), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(n_rows):
            if i != r and bool(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [QQi(0)] * n_cols
        v[fc] = QQi(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -rows[ri][fc]
        basis.append(tuple(v))
    return basis


def frac_sqrt(x: Fraction) -> Fraction:
    """Exact square root of a nonnegative rational; raises if not a perfect square."""
    if x < 0:
        raise ValueError("negative radicand")
    num, den = x.numerator, x.denominator
    rn = _isqrt_exact(num)
    rd = _isqrt_exact(den)
    return Fraction(rn, rd)


def _isqrt_exact(n: int) -> int:
    import math

    r = math.isqrt(n)
    if r * r != n:
        raise ValueError(f"{n} is not a perfect square")
    return r
