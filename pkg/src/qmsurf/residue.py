"""Residue fields of prime ideals and small finite-field arithmetic.

Fields follow a tiny protocol (zero/one/add/mul/... plus element
enumeration) so that polynomial code and group-theory enumerations can run
over F_p, F_{p^2} or towers without caring about the representation:
F_p elements are ints, quadratic extensions use pairs.

F_{p^2} is F_p[t]/(t^2 - r) for the least non-residue r when p is odd and
F_2[t]/(t^2 + t + 1) for p = 2; a generic quadratic extension with modulus
t^2 = r + s*t covers both and composes into towers such as F_{p^4}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DenominatorNotInvertible
from .numutil import least_nonresidue
from .quadfield import PrimeIdeal, QuadElement, QuadFrac


class PrimeField:
    """F_p with int elements in [0, p)."""

    def __init__(self, p: int):
        self.p = p
        self.q = p
        self.zero = 0
        self.one = 1

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def neg(self, x):
        return -x % self.p

    def mul(self, x, y):
        return x * y % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverting 0")
        return pow(x, -1, self.p)

    def is_zero(self, x):
        return x % self.p == 0

    def from_int(self, n: int):
        return n % self.p

    def elements(self):
        return range(self.p)

    def encode(self, x) -> int:
        return x

    def __repr__(self):
        return f"GF({self.p})"


class Ext2Field:
    """Quadratic extension base[t]/(t^2 - s*t - r), elements (u, v) = u + v*t."""

    def __init__(self, base, r, s):
        self.base = base
        self.r = r
        self.s = s
        self.q = base.q ** 2
        self.p = base.p
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)
        self.gen = (base.zero, base.one)

    def add(self, x, y):
        return (self.base.add(x[0], y[0]), self.base.add(x[1], y[1]))

    def sub(self, x, y):
        return (self.base.sub(x[0], y[0]), self.base.sub(x[1], y[1]))

    def neg(self, x):
        return (self.base.neg(x[0]), self.base.neg(x[1]))

    def mul(self, x, y):
        b = self.base
        vv = b.mul(x[1], y[1])
        re = b.add(b.mul(x[0], y[0]), b.mul(vv, self.r))
        im = b.add(b.add(b.mul(x[0], y[1]), b.mul(x[1], y[0])),
                   b.mul(vv, self.s))
        return (re, im)

    def conj(self, x):
        # the other root of the modulus is s - t
        return (self.base.add(x[0], self.base.mul(x[1], self.s)),
                self.base.neg(x[1]))

    def rel_norm(self, x):
        return self.mul(x, self.conj(x))[0]

    def inv(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverting 0")
        c = self.conj(x)
        n_inv = self.base.inv(self.rel_norm(x))
        return (self.base.mul(c[0], n_inv), self.base.mul(c[1], n_inv))

    def is_zero(self, x):
        return self.base.is_zero(x[0]) and self.base.is_zero(x[1])

    def from_int(self, n: int):
        return (self.base.from_int(n), self.base.zero)

    def from_base(self, x):
        return (x, self.base.zero)

    def elements(self):
        for u in self.base.elements():
            for v in self.base.elements():
                yield (u, v)

    def encode(self, x) -> int:
        return self.base.encode(x[0]) * self.base.q + self.base.encode(x[1])

    def __repr__(self):
        return f"GF({self.q})[{self.base!r}]"


def field_pow(F, x, n: int):
    out = F.one
    while n:
        if n & 1:
            out = F.mul(out, x)
        x = F.mul(x, x)
        n >>= 1
    return out


def quadratic_field(p: int) -> Ext2Field:
    """F_{p^2} with the canonical modulus used throughout the package."""
    if p == 2:
        return Ext2Field(PrimeField(2), 1, 1)
    return Ext2Field(PrimeField(p), least_nonresidue(p), 0)


def nonsquare_in(F) -> object:
    """First non-square of F in enumeration order (F of odd characteristic)."""
    sq = {F.encode(F.mul(x, x)) for x in F.elements()}
    for x in F.elements():
        if F.encode(x) not in sq:
            return x
    raise ValueError(f"every element of {F!r} is a square")


def squares_table(F) -> set[int]:
    return {F.encode(F.mul(x, x)) for x in F.elements()}


@dataclass(frozen=True)
class ResidueField:
    """Residue field O_K/P together with the reduction data for w."""

    prime: PrimeIdeal
    impl: object          # PrimeField or Ext2Field
    omega_image: object   # image of w in impl

    @property
    def p(self) -> int:
        return self.prime.p

    @property
    def f(self) -> int:
        return self.prime.f

    @property
    def q(self) -> int:
        return self.impl.q

    def reduce(self, x):
        """Reduce a QuadElement or QuadFrac; denominators must be units."""
        F = self.impl
        if isinstance(x, QuadFrac):
            if x.den % self.p == 0:
                raise DenominatorNotInvertible(
                    f"denominator {x.den} not invertible mod {self.prime}")
            return F.mul(self.reduce(x.num), F.inv(F.from_int(x.den)))
        if not isinstance(x, QuadElement):
            raise TypeError(f"cannot reduce {type(x).__name__}")
        return F.add(F.from_int(x.a),
                     F.mul(F.from_int(x.b), self.omega_image))


from functools import lru_cache


@lru_cache(maxsize=None)
def residue_field(P: PrimeIdeal) -> ResidueField:
    """Build O_K/P; the split reduction root is selected by the generator."""
    K = P.field
    if P.f == 1:
        F = PrimeField(P.p)
        # gen = u + v*w lies in P, so w maps to -u/v (v is a unit mod p)
        u, v = P.gen.a, P.gen.b
        w = (-u * pow(v, -1, P.p)) % P.p
        return ResidueField(P, F, w)
    F = quadratic_field(P.p)
    # w satisfies x^2 - tr*x + nm; solve in F_{p^2} and pick the least root
    tr, nm = K.omega().trace(), K.omega().norm()
    roots = [x for x in F.elements()
             if F.is_zero(F.add(F.sub(F.mul(x, x),
                                      F.mul(F.from_int(tr), x)),
                                F.from_int(nm)))]
    roots.sort(key=F.encode)
    assert roots, f"omega has no root in F_{P.p}^2"
    return ResidueField(P, F, roots[0])
