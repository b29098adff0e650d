"""Igusa-Clebsch invariants of binary sextics by transvectants.

The computation runs over any commutative Q-algebra given through a tiny
ring protocol, so the same code serves exact field coefficients and the
formal quadratic extension used by the one-parameter curve family.

The quadruple (I2, I4, I6, I10) follows the classical normalization in
which I10 is the sextic discriminant lc^10 * prod (x_i - x_j)^2; the
conversion constants from the transvectant invariants A, B, C, D were
calibrated exactly against the root-difference definitions (see
scripts/derive_invariant_tables.py).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, comb

from .errors import SingularCurve
from .quadfield import QuadFrac, QuadField


class FracRing:
    """Ring protocol over QuadFrac elements of a fixed field."""

    def __init__(self, field: QuadField):
        self.field = field
        self.zero = QuadFrac.of(field, 0)
        self.one = QuadFrac.of(field, 1)

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def smul(self, n: int, x):
        return x * n

    def sdiv(self, x, n: int):
        return QuadFrac.make(x.num, x.den * n)

    def is_zero(self, x):
        return x.is_zero()


class SqrtExtRing:
    """base[s]/(s^2 - rel): elements are pairs (u, v) meaning u + v*s."""

    def __init__(self, base, rel):
        self.base = base
        self.rel = rel
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)

    def add(self, x, y):
        return (self.base.add(x[0], y[0]), self.base.add(x[1], y[1]))

    def mul(self, x, y):
        b = self.base
        vv = b.mul(x[1], y[1])
        return (b.add(b.mul(x[0], y[0]), b.mul(vv, self.rel)),
                b.add(b.mul(x[0], y[1]), b.mul(x[1], y[0])))

    def neg(self, x):
        return (self.base.neg(x[0]), self.base.neg(x[1]))

    def smul(self, n: int, x):
        return (self.base.smul(n, x[0]), self.base.smul(n, x[1]))

    def sdiv(self, x, n: int):
        return (self.base.sdiv(x[0], n), self.base.sdiv(x[1], n))

    def is_zero(self, x):
        return self.base.is_zero(x[0]) and self.base.is_zero(x[1])


# Binary forms of degree n are lists c[0..n], c[i] the coefficient of
# x^(n-i) z^i.

def _dx(R, f):
    n = len(f) - 1
    return [R.smul(n - i, f[i]) for i in range(n)]


def _dz(R, f):
    n = len(f) - 1
    return [R.smul(i + 1, f[i + 1]) for i in range(n)]


def _partial(R, f, kx, kz):
    for _ in range(kx):
        f = _dx(R, f)
    for _ in range(kz):
        f = _dz(R, f)
    return f


def _fmul(R, f, g):
    out = [R.zero] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if R.is_zero(fi):
            continue
        for k, gk in enumerate(g):
            out[i + k] = R.add(out[i + k], R.mul(fi, gk))
    return out


def transvectant(R, f, g, k: int):
    m, n = len(f) - 1, len(g) - 1
    acc = [R.zero] * (m + n - 2 * k + 1)
    for i in range(k + 1):
        term = _fmul(R, _partial(R, f, k - i, i), _partial(R, g, i, k - i))
        c = comb(k, i) * (-1 if i % 2 else 1)
        for idx in range(len(acc)):
            acc[idx] = R.add(acc[idx], R.smul(c, term[idx]))
    num = factorial(m - k) * factorial(n - k)
    den = factorial(m) * factorial(n)
    from math import gcd
    g_ = gcd(num, den)
    num, den = num // g_, den // g_
    return [R.sdiv(R.smul(num, c), den) for c in acc]


def invariant_quadruple(R, sextic):
    """(I2, I4, I6, I10) of a degree-6 binary form over the ring R."""
    if len(sextic) != 7:
        raise ValueError("need 7 descending coefficients")
    f = list(sextic)
    i4 = transvectant(R, f, f, 4)
    delta = transvectant(R, i4, i4, 2)
    y1 = transvectant(R, f, i4, 4)
    y2 = transvectant(R, i4, y1, 2)
    y3 = transvectant(R, i4, y2, 2)
    A = transvectant(R, f, f, 6)[0]
    B = transvectant(R, i4, i4, 4)[0]
    C = transvectant(R, i4, delta, 4)[0]
    D = transvectant(R, y3, y1, 2)[0]

    def lin(terms):
        out = R.zero
        for cst, val in terms:
            out = R.add(out, R.smul(cst, val))
        return out

    A2 = R.mul(A, A)
    A3 = R.mul(A2, A)
    I2 = R.smul(-120, A)
    I4 = lin([(-720, A2), (6750, B)])
    I6 = lin([(8640, A3), (-108000, R.mul(A, B)), (202500, C)])
    I10 = lin([(-62208, R.mul(A3, A2)),
               (972000, R.mul(A3, B)),
               (1620000, R.mul(A2, C)),
               (-3037500, R.mul(A, R.mul(B, B))),
               (-6075000, R.mul(B, C)),
               (-4556250, D)])
    return I2, I4, I6, I10


@dataclass(frozen=True)
class IgusaClebsch:
    I2: QuadFrac
    I4: QuadFrac
    I6: QuadFrac
    I10: QuadFrac

    def tuple(self):
        return (self.I2, self.I4, self.I6, self.I10)

    def absolute(self) -> tuple[QuadFrac, QuadFrac, QuadFrac]:
        """Weight-0 ratios; falls back to I2-free ratios when I2 = 0."""
        I2, I4, I6, I10 = self.tuple()
        if not I2.is_zero():
            return (I2 * I2 * I2 * I2 * I2 / I10,
                    I2 * I2 * I2 * I4 / I10,
                    I2 * I2 * I6 / I10)
        return (I4 * I4 * I4 * I4 * I4 / (I10 * I10),
                I4 * I6 / I10,
                I6 * I6 * I6 * I6 * I6 / (I10 * I10 * I10))

    def same_point(self, other: "IgusaClebsch") -> bool:
        """Equality in weighted projective space (geometric isomorphism class)."""
        mine, theirs = self.tuple(), other.tuple()
        weights = (2, 4, 6, 10)
        for i in range(4):
            for k in range(i + 1, 4):
                wi, wk = weights[i], weights[k]
                lhs = _pow(mine[i], wk) * _pow(theirs[k], wi)
                rhs = _pow(theirs[i], wk) * _pow(mine[k], wi)
                if lhs != rhs:
                    return False
        return True


def _pow(x: QuadFrac, n: int) -> QuadFrac:
    out = QuadFrac.of(x.field, 1)
    for _ in range(n):
        out = out * x
    return out


def igusa_clebsch(curve) -> IgusaClebsch:
    """Invariants of y^2 = f(x); degree-5 f is the sextic with a root at infinity."""
    R = FracRing(curve.field)
    I2, I4, I6, I10 = invariant_quadruple(R, list(curve.coeffs))
    if I10.is_zero():
        raise SingularCurve("vanishing discriminant")
    return IgusaClebsch(I2, I4, I6, I10)


def discriminant(curve) -> QuadFrac:
    """The binary-sextic discriminant (equals I10 in this normalization)."""
    R = FracRing(curve.field)
    return invariant_quadruple(R, list(curve.coeffs))[3]
