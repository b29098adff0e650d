"""Rational points on the discriminant-6 and -10 conics and the attached
one-parameter family of genus-2 curves.

The conics are X^2 + 3Y^2 + Z^2 = 0 (D = 6) and X^2 + 2Y^2 + Z^2 = 0
(D = 10).  A K-point exists iff K splits the quaternion algebra B_D.  From
a point (a : b : c) on the D = 6 conic the parameter j = (4b/3a)^2 selects
a member C_j of the family

    y^2 = (-4+3s) x^6 + 6t x^5 + 3t(28+9s) x^4 - 4t^2 x^3
          + 3t^2(28-9s) x^2 + 6t^3 x - t^3(4+3s),

with t = -2(27j+16) and s a formal square root of -6j.  Its Igusa-Clebsch
invariants land in K and are, as functions of j (frozen from
scripts/derive_invariant_tables.py):

    I2  = 2^14 3^4          (j+1)   (27j+16)^3
    I4  = 2^24 3^8          j       (27j+16)^6
    I6  = 2^36 3^11         j(5j+4) (27j+16)^9
    I10 = 2^57 3^15         j^3     (27j+16)^15

so that I4^2 * I10 / (I2^5 ... ) collapse to the degree-1 relation
(I2^3 I4 / I10)^2 / (I2^5 / I10) = 7776 (j+1)/j used to invert the family.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import GenusTwoCurve
from .errors import (BasePointInvalid, DegenerateJ, DegeneratePoint,
                     FieldDoesNotSplit, NotInFamily)
from .hilbert import splits_quaternion
from .igusa import FracRing, IgusaClebsch, SqrtExtRing, igusa_clebsch, invariant_quadruple
from .quadfield import (PrimeIdeal, QuadElement, QuadFrac, QuadField,
                        exact_div, valuation, _gen_key)

CONIC_DIAG = {6: (1, 3, 1), 10: (1, 2, 1)}


@dataclass(frozen=True)
class ConicPoint:
    D: int
    coords: tuple[QuadElement, QuadElement, QuadElement]
    field: QuadField

    def __str__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class JInvariant:
    value: QuadFrac
    field: QuadField


def conic_form(P: ConicPoint) -> QuadElement:
    dx, dy, dz = CONIC_DIAG[P.D]
    x, y, z = P.coords
    return x * x * dx + y * y * dy + z * z * dz


def conic_contains(P: ConicPoint) -> bool:
    if all(c.is_zero() for c in P.coords):
        raise ValueError("projective point cannot be (0:0:0)")
    return conic_form(P).is_zero()


_BASE_POINTS = {
    # (d, D) -> coordinates in the a+b*w basis
    (1, 6): ((1, 0), (0, 0), (0, 1)),        # (1 : 0 : i)
    (3, 6): ((-1, 2), (1, 0), (0, 0)),       # (sqrt(-3) : 1 : 0)
    (3, 10): ((-1, 2), (1, 0), (1, 0)),      # (sqrt(-3) : 1 : 1)
    (2, 10): ((0, 0), (1, 0), (0, 1)),       # (0 : 1 : sqrt(-2))
}


def base_point(field: QuadField, D: int) -> ConicPoint:
    if not splits_quaternion(field, D):
        raise FieldDoesNotSplit(
            f"{field.label} does not split the discriminant-{D} algebra")
    coords = _BASE_POINTS[(field.d, D)]
    P = ConicPoint(D, tuple(QuadElement(a, b, field) for a, b in coords),
                   field)
    assert conic_contains(P)
    return P


# -- integral gcd and projective normalization ------------------------------

def _nearest_quotient(x: QuadElement, y: QuadElement) -> QuadElement:
    t = x * y.conj()
    n = y.norm()
    qa = (2 * t.a + n) // (2 * n)
    qb = (2 * t.b + n) // (2 * n)
    best, best_norm = None, None
    for da in (0, -1, 1):
        for db in (0, -1, 1):
            q = QuadElement(qa + da, qb + db, x.field)
            r = x - q * y
            if best_norm is None or r.norm() < best_norm:
                best, best_norm = q, r.norm()
    assert best_norm < n, "field is norm-Euclidean; rounding failed"
    return best


def elt_gcd(x: QuadElement, y: QuadElement) -> QuadElement:
    while not y.is_zero():
        q = _nearest_quotient(x, y)
        x, y = y, x - q * y
    return x


def normalize_projective(coords, field: QuadField):
    """Primitive integral representative with a canonical unit choice."""
    nonzero = [c for c in coords if not c.is_zero()]
    if not nonzero:
        raise ValueError("zero vector")
    g = nonzero[0]
    for c in nonzero[1:]:
        g = elt_gcd(g, c)
    coords = tuple(exact_div(c, g) if not c.is_zero() else c for c in coords)
    best = min((tuple(u * c for c in coords) for u in field.units()),
               key=lambda t: tuple(_gen_key(c) for c in t))
    return best


def parametrize_conic(D: int, field: QuadField, base: ConicPoint,
                      height_bound: int):
    """Sweep lines of bounded slope height through the base point.

    Yields distinct projective points on the conic in a deterministic
    order; every point is verified against the conic form.
    """
    if base.D != D or not conic_contains(base):
        raise BasePointInvalid(f"{base} is not on the D={D} conic")
    diag = CONIC_DIAG[D]
    b = base.coords

    def bilinear(u, v):
        return sum((u[k] * v[k] * diag[k] for k in range(3)),
                   field.zero())

    # two standard directions completing the base point to a basis
    std = [tuple(field.element(1 if i == k else 0) for k in range(3))
           for i in range(3)]
    indep = []
    for e in std:
        trial = indep + [e]
        if _rank3(b, trial, field) == len(trial) + 1:
            indep.append(e)
        if len(indep) == 2:
            break
    e1, e2 = indep

    seen = set()
    qb = conic_form(base)
    assert qb.is_zero()
    for height in range(0, height_bound + 1):
        for ua, ub, va, vb in _height_shell(height):
            u = QuadElement(ua, ub, field)
            v = QuadElement(va, vb, field)
            direction = tuple(u * e1[k] + v * e2[k] for k in range(3))
            qd = sum((direction[k] * direction[k] * diag[k]
                     for k in range(3)), field.zero())
            beta = bilinear(b, direction)
            if qd.is_zero():
                cand = direction if not beta.is_zero() else None
            else:
                cand = tuple(qd * b[k] - 2 * beta * direction[k]
                             for k in range(3))
            if cand is None or all(c.is_zero() for c in cand):
                continue
            norm = normalize_projective(cand, field)
            if norm in seen:
                continue
            seen.add(norm)
            point = ConicPoint(D, norm, field)
            assert conic_contains(point)
            yield point


def _height_shell(h: int):
    rng = range(-h, h + 1)
    for ua in rng:
        for ub in rng:
            for va in rng:
                for vb in rng:
                    if max(abs(ua), abs(ub), abs(va), abs(vb)) == h:
                        yield ua, ub, va, vb


def _rank3(b, others, field) -> int:
    rows = [b] + list(others)
    # Gaussian elimination over the fraction field
    mat = [[QuadFrac.make(c) for c in row] for row in rows]
    rank, col = 0, 0
    while rank < len(mat) and col < 3:
        piv = next((r for r in range(rank, len(mat))
                    if not mat[r][col].is_zero()), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(len(mat)):
            if r != rank and not mat[r][col].is_zero():
                factor = mat[r][col] / mat[rank][col]
                mat[r] = [mat[r][k] - factor * mat[rank][k] for k in range(3)]
        rank += 1
        col += 1
    return rank


# -- the j-line ----------------------------------------------------------------

def j_from_point(P: ConicPoint) -> JInvariant:
    """j = (4Y / 3X)^2 for a point on the D = 6 conic."""
    x, y = P.coords[0], P.coords[1]
    if x.is_zero():
        raise DegeneratePoint("conic point with X = 0 has no j")
    r = QuadFrac.make(y * 4) / QuadFrac.make(x * 3)
    return JInvariant(r * r, P.field)


def abstract_point_residual(j: QuadFrac) -> QuadFrac:
    """X^2 + 3 Y^2 + Z^2 at (4 : 3 sqrt(j) : sqrt(-27j-16)), via the squares."""
    K = j.field
    x2 = QuadFrac.of(K, 16)
    y2_times_3 = QuadFrac.of(K, 27) * j
    z2 = QuadFrac.of(K, -16) - QuadFrac.of(K, 27) * j
    return x2 + y2_times_3 + z2


# -- the family ------------------------------------------------------------------

_F2 = 2 ** 14 * 3 ** 4
_F4 = 2 ** 24 * 3 ** 8
_F6 = 2 ** 36 * 3 ** 11
_F10 = 2 ** 57 * 3 ** 15


@dataclass(frozen=True)
class FamilyCurve:
    """A family member over K(s), s^2 = -6j; coefficients are u + v*s pairs."""
    field: QuadField
    j: QuadFrac
    coeffs: tuple[tuple[QuadFrac, QuadFrac], ...]


def _check_j(j: QuadFrac) -> None:
    K = j.field
    if j.is_zero() or j == QuadFrac.of(K, -16, 0, 27):
        raise DegenerateJ(f"family collapses at j = {j}")


def family_curve(j: QuadFrac) -> FamilyCurve:
    _check_j(j)
    K = j.field
    one = QuadFrac.of(K, 1)
    t = -2 * (27 * j + 16 * one)
    t2, t3 = t * t, t * t * t
    z = QuadFrac.of(K, 0)
    coeffs = (
        (-4 * one, 3 * one),
        (6 * t, z),
        (84 * t, 27 * t),
        (-4 * t2, z),
        (84 * t2, -27 * t2),
        (6 * t3, z),
        (-4 * t3, -3 * t3),
    )
    return FamilyCurve(K, j, coeffs)


def family_invariants(j: QuadFrac) -> IgusaClebsch:
    """Invariants of C_j computed in K[s]/(s^2 + 6j); they land in K."""
    fc = family_curve(j)
    K = j.field
    base = FracRing(K)
    ring = SqrtExtRing(base, -6 * j)
    quad = invariant_quadruple(ring, list(fc.coeffs))
    out = []
    for u, v in quad:
        assert v.is_zero(), "family invariant escaped the base field"
        out.append(u)
    return IgusaClebsch(*out)


def family_invariants_closed(j: QuadFrac) -> IgusaClebsch:
    """Same values through the frozen closed forms (fast path)."""
    K = j.field
    one = QuadFrac.of(K, 1)
    w = 27 * j + 16 * one
    w3 = w * w * w
    return IgusaClebsch(
        _F2 * (j + one) * w3,
        _F4 * j * w3 * w3,
        _F6 * j * (5 * j + 4 * one) * w3 * w3 * w3,
        _F10 * j * j * j * w3 * w3 * w3 * w3 * w3,
    )


def family_discriminant(j: QuadFrac) -> QuadFrac:
    _check_j(j)
    return family_invariants_closed(j).I10


def find_j_from_curve(C: GenusTwoCurve) -> JInvariant:
    """Recover j with C_j geometrically isomorphic to C, or NotInFamily.

    The weight-0 ratios of the family satisfy
    (I2^3 I4 / I10)^2 / (I2^5 / I10) = 7776 (j+1)/j, which inverts to a
    single candidate; I2 = 0 happens only at j = -1.  The candidate is
    always verified by invariant equality.
    """
    ic = igusa_clebsch(C)
    K = C.field
    one = QuadFrac.of(K, 1)
    if ic.I2.is_zero():
        candidate = -one
    else:
        rho1 = ic.I2 * ic.I2 * ic.I2 * ic.I2 * ic.I2 / ic.I10
        rho2 = ic.I2 * ic.I2 * ic.I2 * ic.I4 / ic.I10
        ratio = rho2 * rho2 / rho1            # 7776 (j+1)/j
        denom = ratio - 7776 * one
        if denom.is_zero():
            raise NotInFamily("invariant ratios on the excluded fiber")
        candidate = (7776 * one) / denom
    if candidate.is_zero() or candidate == QuadFrac.of(K, -16, 0, 27):
        raise NotInFamily(f"candidate parameter {candidate} is degenerate")
    if not ic.same_point(family_invariants_closed(candidate)):
        raise NotInFamily(f"candidate j = {candidate} fails verification")
    return JInvariant(candidate, K)


# -- the reduction filter -------------------------------------------------------

def potentially_good_at(j: QuadFrac, P: PrimeIdeal) -> bool | None:
    """True/False via the valuation of j; None (undetermined) at primes over 6."""
    if P.p in (2, 3):
        return None
    return valuation(j, P) == 0


def j_bad_support(j: QuadFrac) -> list[PrimeIdeal]:
    """Primes away from 6 where the family member cannot have good reduction."""
    from .numutil import factorint
    from .quadfield import split_prime
    rational = set(factorint(j.num.norm())) | set(factorint(j.den))
    out = []
    for p in sorted(rational):
        if p in (2, 3):
            continue
        for P in split_prime(j.field, p):
            if valuation(j, P) != 0:
                out.append(P)
    out.sort(key=PrimeIdeal.sort_key)
    return out
