"""Ray class groups of the class-number-one fields and their characters.

With trivial class group, Cl(O, m) = (O/m)^x / im(O^x).  The residue ring
is enumerated through a triangular basis of the ideal lattice, the global
units are quotiented out by passing to canonical coset representatives,
and the abelian structure is found by a p-group basis algorithm whose
result is certified by re-enumerating the group from the basis.  Discrete
logarithms are table lookups after that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .errors import BudgetExceeded, PrimeDividesModulus
from .numutil import factorint
from .quadfield import PrimeIdeal, QuadElement, QuadField
from .residue import residue_field

NORM_BUDGET = 10 ** 6


@dataclass(frozen=True)
class Modulus:
    field: QuadField
    parts: tuple[tuple[PrimeIdeal, int], ...]

    def __post_init__(self):
        seen = {P for P, _ in self.parts}
        if len(seen) != len(self.parts):
            raise ValueError("repeated primes in modulus")
        if any(e < 1 for _, e in self.parts):
            raise ValueError("exponents must be >= 1")

    def norm(self) -> int:
        n = 1
        for P, e in self.parts:
            n *= P.norm() ** e
        return n

    def generator(self) -> QuadElement:
        g = self.field.one()
        for P, e in self.parts:
            for _ in range(e):
                g = g * P.gen
        return g

    def euler_phi(self) -> int:
        phi = 1
        for P, e in self.parts:
            q = P.norm()
            phi *= (q - 1) * q ** (e - 1)
        return phi

    def divides(self, x: QuadElement) -> bool:
        """True when some prime of the modulus divides x."""
        return any(residue_field(P).impl.is_zero(residue_field(P).reduce(x))
                   for P, _ in self.parts)

    def __str__(self):
        return " * ".join(f"({P.gen})^{e}" if e > 1 else f"({P.gen})"
                          for P, e in self.parts)


def modulus(field: QuadField, parts) -> Modulus:
    canon = tuple(sorted(((P, int(e)) for P, e in parts),
                         key=lambda t: t[0].sort_key()))
    return Modulus(field, canon)


class _ResidueRing:
    """O_K/(g) with canonical representatives on a triangular lattice basis."""

    def __init__(self, field: QuadField, g: QuadElement):
        self.field = field
        wg = field.omega() * g
        ga, gb = g.a, g.b
        ha, hb = wg.a, wg.b
        det = ga * hb - gb * ha
        assert abs(det) == g.norm()
        c = math.gcd(gb, hb)
        if c == 0:
            # g rational: lattice is g Z x g Z
            self.C = abs(ga)
            self.wvec = (0, self.C)
            self.A = abs(ga)
        else:
            x, y = _bezout(gb, hb)
            self.wvec = (x * ga + y * ha, c)
            self.C = c
            self.A = abs(det) // c
        assert _in_lattice(self.A, 0, ga, gb, ha, hb), "triangular basis failed"
        self._wa = self.wvec[0]

    def reduce(self, x: QuadElement) -> tuple[int, int]:
        a, b = x.a, x.b
        k = b // self.C
        a -= k * self._wa
        b -= k * self.C
        return (a % self.A, b)

    def elements(self):
        for a in range(self.A):
            for b in range(self.C):
                yield (a, b)

    def elt(self, pair) -> QuadElement:
        return QuadElement(pair[0], pair[1], self.field)


def _bezout(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qu = old_r // r
        old_r, r = r, old_r - qu * r
        old_s, s = s, old_s - qu * s
        old_t, t = t, old_t - qu * t
    g = old_r if old_r > 0 else -old_r
    sgn = 1 if old_r > 0 else -1
    return sgn * old_s, sgn * old_t


def _in_lattice(x, y, ga, gb, ha, hb) -> bool:
    det = ga * hb - gb * ha
    # solve (x, y) = alpha (ga, gb) + beta (ha, hb) over Q
    alpha_num = x * hb - y * ha
    beta_num = ga * y - gb * x
    return alpha_num % det == 0 and beta_num % det == 0


@dataclass(frozen=True)
class Character:
    order: int
    values: tuple[int, ...]       # on the invariant-factor basis

    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.values)


class RayClassGroup:
    """Cl(O_K, m) with invariant factors, basis cosets and a dlog table."""

    def __init__(self, mod: Modulus, budget: int = NORM_BUDGET):
        if mod.norm() > budget:
            raise BudgetExceeded(f"modulus norm {mod.norm()} over budget {budget}")
        self.modulus = mod
        K = mod.field
        self.ring = _ResidueRing(K, mod.generator()) if mod.parts else None
        if self.ring is None:
            self.invariants = ()
            self.basis = ()
            self._dlog = {(): ()}
            self._unit_reps = set()
            return
        ring = self.ring
        res_fields = [residue_field(P) for P, _ in mod.parts]

        def coprime(pair) -> bool:
            x = ring.elt(pair)
            return all(not R.impl.is_zero(R.reduce(x)) for R in res_fields)

        units = sorted({ring.reduce(u) for u in K.units()})
        self._unit_reps = set(units)

        def coset_rep(pair):
            x = ring.elt(pair)
            return min((ring.reduce(self._unit_elt(u) * x) for u in units))

        residues = [pair for pair in ring.elements() if coprime(pair)]
        assert len(residues) == mod.euler_phi(), "unit count != phi(m)"
        cosets = sorted({coset_rep(pair) for pair in residues})
        self._elements = cosets
        self._mul_rep = lambda x, y: coset_rep(ring.reduce(ring.elt(x) * ring.elt(y)))
        self._coset_rep = coset_rep
        self.identity = coset_rep(ring.reduce(K.one()))

        lifted = _abelian_structure(cosets, self._mul_rep, self.identity)
        self.invariants, self.basis, self._dlog = lifted
        assert len(self._dlog) == len(cosets), "structure certification failed"

    def _unit_elt(self, pair):
        return self.ring.elt(pair)

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariants:
            n *= d
        return n

    def dlog_element(self, x: QuadElement) -> tuple[int, ...]:
        if self.ring is None:
            return ()
        if self.modulus.divides(x):
            raise PrimeDividesModulus(f"{x} is not coprime to {self.modulus}")
        return self._dlog[self._coset_rep(self.ring.reduce(x))]

    def dlog_prime(self, P: PrimeIdeal) -> tuple[int, ...]:
        return self.dlog_element(P.gen)

    def character_basis(self, n: int) -> list[Character]:
        """A basis of Hom(Cl, Z/n) for prime n: one character per n-divisible factor."""
        out = []
        for i, d in enumerate(self.invariants):
            if d % n == 0:
                values = tuple(1 if k == i else 0
                               for k in range(len(self.invariants)))
                out.append(Character(n, values))
        return out

    def all_characters(self, n: int) -> list[Character]:
        ranges = [range(n) if d % n == 0 else range(1)
                  for d in self.invariants]
        return [Character(n, tuple(vals)) for vals in product(*ranges)]

    def evaluate(self, chi: Character, P: PrimeIdeal) -> int:
        return self.evaluate_element(chi, P.gen)

    def evaluate_element(self, chi: Character, x: QuadElement) -> int:
        v = self.dlog_element(x)
        total = 0
        for ci, vi, d in zip(chi.values, v, self.invariants):
            if ci:
                # the basis character sends coordinate vi mod d to vi mod n
                total += ci * vi
        return total % chi.order


def ray_class_group(field: QuadField, mod: Modulus,
                    budget: int = NORM_BUDGET) -> RayClassGroup:
    return RayClassGroup(mod, budget=budget)


# -- generic finite abelian structure ------------------------------------------

def _abelian_structure(elements, mul, identity):
    """Invariant factors (ascending), basis elements, full dlog table."""
    n = len(elements)
    if n == 1:
        return (), (), {identity: ()}

    def power(x, e):
        out, base = identity, x
        while e:
            if e & 1:
                out = mul(out, base)
            base = mul(base, base)
            e >>= 1
        return out

    per_prime: dict[int, tuple[list, list]] = {}
    for p, ep in factorint(n).items():
        cof = n // p ** ep
        sylow = sorted({power(x, cof) for x in elements})
        basis, orders = _p_group_basis(p, sylow, mul, identity, power)
        per_prime[p] = (basis, orders)

    rank = max(len(orders) for _, orders in per_prime.values())
    inv, basis = [], []
    for i in range(rank):
        d, b = 1, identity
        for p, (pb, po) in per_prime.items():
            if i < len(po):
                d *= po[i]
                b = mul(b, pb[i])
        inv.append(d)
        basis.append(b)
    # descending by construction; expose ascending
    inv.reverse()
    basis.reverse()

    dlog = {}
    for exps in product(*[range(d) for d in inv]):
        el = identity
        for b, e in zip(basis, exps):
            el = mul(el, power(b, e))
        assert el not in dlog, "basis enumeration collided"
        dlog[el] = exps
    return tuple(inv), tuple(basis), dlog


def _p_group_basis(p, elements, mul, identity, power):
    """Basis of an abelian p-group given as a closed element list."""
    basis: list = []
    orders: list[int] = []
    gen_sub = {identity: ()}
    while len(gen_sub) < len(elements):
        best = None
        for g in elements:
            if g in gen_sub:
                continue
            k, h = 1, g
            while h not in gen_sub:
                h = mul(h, g)
                k += 1
            if best is None or k > best[0]:
                best = (k, g, h)
        k, g, h = best
        v = gen_sub[h]
        adjusted = g
        for bi, vi, oi in zip(basis, v, orders):
            assert vi % k == 0, "p-group basis correction failed"
            w = (vi // k) % oi
            adjusted = mul(adjusted, power(bi, (oi - w) % oi))
        basis.append(adjusted)
        orders.append(k)
        gen_sub = {}
        for exps in product(*[range(o) for o in orders]):
            el = identity
            for b, e in zip(basis, exps):
                el = mul(el, power(b, e))
            gen_sub[el] = exps
        assert len(gen_sub) == math.prod(orders), "basis not independent"
    return basis, orders
