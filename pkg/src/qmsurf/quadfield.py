"""Exact arithmetic in the five class-number-one imaginary quadratic fields.

A field K = Q(sqrt(-d)) for d in {1, 2, 3, 7, 11} is represented by its
integral basis {1, w} where w = sqrt(-d) when -d = 2, 3 (mod 4) and
w = (1 + sqrt(-d))/2 when -d = 1 (mod 4).  Elements are pairs (a, b)
meaning a + b*w; fractions carry a single positive integer denominator in
lowest terms.  Every ideal is principal (class number 1), so prime ideals
are stored by a canonically normalized generator.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import UnknownField
from .numutil import factorint, legendre

_WHITELIST = (1, 2, 3, 7, 11)


@dataclass(frozen=True)
class QuadField:
    d: int
    disc: int
    half_basis: bool     # True when w = (1 + sqrt(-d))/2
    label: str

    # w^2 = wsq_c + wsq_w * w
    @property
    def wsq(self) -> tuple[int, int]:
        if self.half_basis:
            return (-(1 + self.d) // 4, 1)
        return (-self.d, 0)

    def one(self) -> "QuadElement":
        return QuadElement(1, 0, self)

    def zero(self) -> "QuadElement":
        return QuadElement(0, 0, self)

    def omega(self) -> "QuadElement":
        return QuadElement(0, 1, self)

    def sqrt_minus_d(self) -> "QuadElement":
        """The element sqrt(-d) in the (1, w) basis."""
        if self.half_basis:
            return QuadElement(-1, 2, self)
        return QuadElement(0, 1, self)

    def element(self, a: int, b: int = 0) -> "QuadElement":
        return QuadElement(a, b, self)

    def units(self) -> tuple["QuadElement", ...]:
        """All roots of unity: order 4 for d=1, order 6 for d=3, else {+-1}."""
        if self.d == 1:
            return tuple(QuadElement(a, b, self)
                         for a, b in [(1, 0), (0, 1), (-1, 0), (0, -1)])
        if self.d == 3:
            return tuple(QuadElement(a, b, self)
                         for a, b in [(1, 0), (0, 1), (-1, 1),
                                      (-1, 0), (0, -1), (1, -1)])
        return (QuadElement(1, 0, self), QuadElement(-1, 0, self))

    def __repr__(self):
        return f"QuadField(d={self.d})"


def _make_field(d: int) -> QuadField:
    if -d % 4 == 1:
        return QuadField(d, -d, True, f"2.0.{d}.1")
    return QuadField(d, -4 * d, False, f"2.0.{4 * d}.1")


FIELDS: dict[int, QuadField] = {d: _make_field(d) for d in _WHITELIST}
FIELDS_BY_LABEL: dict[str, QuadField] = {K.label: K for K in FIELDS.values()}


def field_by_label(label: str) -> QuadField:
    try:
        return FIELDS_BY_LABEL[label]
    except KeyError:
        raise UnknownField(f"unsupported field label {label!r}; "
                           f"known: {sorted(FIELDS_BY_LABEL)}") from None


@dataclass(frozen=True)
class QuadElement:
    a: int
    b: int
    field: QuadField

    def __add__(self, other: "QuadElement") -> "QuadElement":
        return QuadElement(self.a + other.a, self.b + other.b, self.field)

    def __sub__(self, other: "QuadElement") -> "QuadElement":
        return QuadElement(self.a - other.a, self.b - other.b, self.field)

    def __neg__(self) -> "QuadElement":
        return QuadElement(-self.a, -self.b, self.field)

    def __mul__(self, other) -> "QuadElement":
        if isinstance(other, int):
            return QuadElement(self.a * other, self.b * other, self.field)
        c, s = self.field.wsq
        bb = self.b * other.b
        return QuadElement(self.a * other.a + c * bb,
                           self.a * other.b + self.b * other.a + s * bb,
                           self.field)

    __rmul__ = __mul__

    def conj(self) -> "QuadElement":
        if self.field.half_basis:
            return QuadElement(self.a + self.b, -self.b, self.field)
        return QuadElement(self.a, -self.b, self.field)

    def norm(self) -> int:
        if self.field.half_basis:
            return (self.a * self.a + self.a * self.b
                    + self.b * self.b * (1 + self.field.d) // 4)
        return self.a * self.a + self.field.d * self.b * self.b

    def trace(self) -> int:
        return 2 * self.a + (self.b if self.field.half_basis else 0)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def divides(self, other: "QuadElement") -> bool:
        return exact_div(other, self) is not None

    def __str__(self):
        return format_element(self)


def exact_div(x: QuadElement, y: QuadElement) -> QuadElement | None:
    """x / y when it is integral, else None."""
    n = y.norm()
    if n == 0:
        raise ZeroDivisionError("division by zero element")
    t = x * y.conj()
    if t.a % n or t.b % n:
        return None
    return QuadElement(t.a // n, t.b // n, x.field)


def gcd_reduce(a: int, b: int, den: int) -> tuple[int, int, int]:
    g = math.gcd(math.gcd(abs(a), abs(b)), den)
    return a // g, b // g, den // g


@dataclass(frozen=True)
class QuadFrac:
    """A field element num/den with den > 0 and the triple in lowest terms."""
    num: QuadElement
    den: int

    @staticmethod
    def make(num: QuadElement, den: int = 1) -> "QuadFrac":
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        a, b, den = gcd_reduce(num.a, num.b, den)
        return QuadFrac(QuadElement(a, b, num.field), den)

    @staticmethod
    def of(field: QuadField, a: int, b: int = 0, den: int = 1) -> "QuadFrac":
        return QuadFrac.make(QuadElement(a, b, field), den)

    @property
    def field(self) -> QuadField:
        return self.num.field

    def __add__(self, other: "QuadFrac") -> "QuadFrac":
        return QuadFrac.make(self.num * other.den + other.num * self.den,
                             self.den * other.den)

    def __sub__(self, other: "QuadFrac") -> "QuadFrac":
        return QuadFrac.make(self.num * other.den - other.num * self.den,
                             self.den * other.den)

    def __neg__(self) -> "QuadFrac":
        return QuadFrac(-self.num, self.den)

    def __mul__(self, other) -> "QuadFrac":
        if isinstance(other, int):
            return QuadFrac.make(self.num * other, self.den)
        return QuadFrac.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> "QuadFrac":
        n = self.num.norm()
        if n == 0:
            raise ZeroDivisionError("inverting zero")
        return QuadFrac.make(self.num.conj() * self.den, n)

    def __truediv__(self, other: "QuadFrac") -> "QuadFrac":
        return self * other.inv()

    def conj(self) -> "QuadFrac":
        return QuadFrac(self.num.conj(), self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.den == 1

    def as_element(self) -> QuadElement:
        if self.den != 1:
            raise ValueError(f"{self} is not integral")
        return self.num

    def __str__(self):
        body = format_element(self.num)
        if self.den == 1:
            return body
        return f"({body})/{self.den}"


# -- canonical generators and prime ideals ---------------------------------

def _gen_key(x: QuadElement) -> tuple[int, int, int, int]:
    return (abs(x.b), 0 if x.b >= 0 else 1, abs(x.a), 0 if x.a >= 0 else 1)


def normalize_generator(x: QuadElement) -> QuadElement:
    """Canonical unit multiple: minimize (|b|, b<0, |a|, a<0)."""
    return min((u * x for u in x.field.units()), key=_gen_key)


@dataclass(frozen=True)
class PrimeIdeal:
    field: QuadField
    p: int
    f: int
    e: int
    gen: QuadElement      # canonically normalized
    index: int            # 1-based position among primes over p

    def norm(self) -> int:
        return self.p ** self.f

    @property
    def is_split(self) -> bool:
        return self.f == 1 and self.e == 1

    @property
    def is_ramified(self) -> bool:
        return self.e == 2

    def conjugate(self) -> "PrimeIdeal":
        """The other prime over p (self when p is not split)."""
        if not self.is_split:
            return self
        pair = split_prime(self.field, self.p)
        return pair[1] if self == pair[0] else pair[0]

    def sort_key(self) -> tuple:
        return (self.norm(), _gen_key(self.gen))

    def label(self) -> str:
        if self.f == 2 or self.e == 2:
            return f"p{self.p}"
        return f"p{self.p},{self.index}"

    def __str__(self):
        return f"{self.label()}=({format_element(self.gen)})"


def _norm_equation(field: QuadField, n: int) -> QuadElement | None:
    """Some integral element of norm n, by bounded search; None if none."""
    d = field.d
    if field.half_basis:
        # norm = a^2 + ab + b^2 (1+d)/4 = (a + b/2)^2 + d (b/2)^2
        bmax = math.isqrt(4 * n // d)
        for b in range(-bmax, bmax + 1):
            rem = 4 * n - d * b * b
            if rem < 0:
                continue
            r = math.isqrt(rem)
            if r * r != rem:
                continue
            for sign in ((r,) if r == 0 else (r, -r)):
                if (sign - b) % 2 == 0:
                    return QuadElement((sign - b) // 2, b, field)
        return None
    bmax = math.isqrt(n // d)
    for b in range(-bmax, bmax + 1):
        rem = n - d * b * b
        r = math.isqrt(rem)
        if r * r == rem:
            return QuadElement(r, b, field)
    return None


@lru_cache(maxsize=None)
def _split_prime_cached(d: int, p: int) -> tuple[PrimeIdeal, ...]:
    field = FIELDS[d]
    disc = field.disc
    if disc % p == 0:
        g = _norm_equation(field, p)
        assert g is not None, f"ramified prime {p} has no norm-{p} element"
        return (PrimeIdeal(field, p, 1, 2, normalize_generator(g), 1),)
    if p == 2:
        split = disc % 8 == 1
    else:
        split = legendre(disc, p) == 1
    if not split:
        return (PrimeIdeal(field, p, 2, 1, QuadElement(p, 0, field), 1),)
    g = _norm_equation(field, p)
    assert g is not None, f"split prime {p} has no norm-{p} element"
    g1 = normalize_generator(g)
    g2 = normalize_generator(g.conj())
    assert g1 != g2, f"conjugate generators collide for p={p}"
    first, second = sorted((g1, g2), key=_gen_key)
    return (PrimeIdeal(field, p, 1, 1, first, 1),
            PrimeIdeal(field, p, 1, 1, second, 2))


def split_prime(field: QuadField, p: int) -> list[PrimeIdeal]:
    """The primes of O_K above the rational prime p, canonically ordered."""
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    return list(_split_prime_cached(field.d, p))


def primes_up_to_norm(field: QuadField, bound: int) -> list[PrimeIdeal]:
    """All prime ideals of norm <= bound, sorted by (norm, generator key)."""
    from .numutil import primes_below
    out: list[PrimeIdeal] = []
    for p in primes_below(bound + 1):
        for P in split_prime(field, p):
            if P.norm() <= bound:
                out.append(P)
    out.sort(key=PrimeIdeal.sort_key)
    return out


def valuation(x, P: PrimeIdeal) -> int:
    """P-adic valuation of a QuadElement or QuadFrac (x must be nonzero)."""
    if isinstance(x, QuadFrac):
        vden = 0
        den = x.den
        while den % P.p == 0:
            den //= P.p
            vden += 1
        return valuation(x.num, P) - P.e * vden
    if x.is_zero():
        raise ValueError("valuation of zero")
    v = 0
    while True:
        q = exact_div(x, P.gen)
        if q is None:
            return v
        x = q
        v += 1


def element_from_pair(field: QuadField, pair) -> QuadElement:
    a, b = int(pair[0]), int(pair[1])
    return QuadElement(a, b, field)


def prime_from_generator(field: QuadField, gen: QuadElement) -> PrimeIdeal:
    """The prime ideal generated by gen; errors when (gen) is not prime."""
    n = gen.norm()
    if n <= 1:
        raise ValueError(f"({gen}) is not a prime ideal (norm {n})")
    fact = factorint(n)
    if len(fact) != 1:
        raise ValueError(f"({gen}) has composite norm {n}")
    (p, k), = fact.items()
    for P in split_prime(field, p):
        if P.norm() == n and normalize_generator(gen) == P.gen:
            return P
    raise ValueError(f"({gen}) of norm {n} does not generate a prime ideal")


# -- literals ----------------------------------------------------------------

_TERM_RE = re.compile(r"""^\s*([+-]?)\s*(?:(\d+)\s*\*?\s*(w)?|(w))\s*""",
                      re.VERBOSE)


def parse_element(text: str, field: QuadField) -> QuadFrac:
    """Parse "a+b*w" style literals; also accepts "(a+b*w)/den"."""
    s = text.strip().replace(" ", "")
    den = 1
    m = re.fullmatch(r"\((?P<body>[^)]*)\)(?:/(?P<den>\d+))?", s)
    if m:
        s = m.group("body")
        den = int(m.group("den")) if m.group("den") else 1
    a = b = 0
    pos = 0
    if not s:
        raise ValueError("empty element literal")
    while pos < len(s):
        m = _TERM_RE.match(s[pos:])
        if not m:
            raise ValueError(f"cannot parse element literal {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        digits, star_w, bare_w = m.group(2), m.group(3), m.group(4)
        if bare_w or star_w:
            b += sign * (int(digits) if digits else 1)
        else:
            a += sign * int(digits)
        pos += m.end()
    return QuadFrac.of(field, a, b, den)


def format_element(x: QuadElement) -> str:
    if x.b == 0:
        return str(x.a)
    wpart = "w" if abs(x.b) == 1 else f"{abs(x.b)}*w"
    if x.b < 0:
        wpart = "-" + wpart
    elif x.a != 0:
        wpart = "+" + wpart
    if x.a == 0:
        return wpart
    return f"{x.a}{wpart}"
