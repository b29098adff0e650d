"""Hilbert symbols over Q and quaternion-algebra splitting tests.

A rational quaternion algebra (a, b / Q) is ramified exactly at the places
where the Hilbert symbol (a, b)_v is -1.  For an imaginary quadratic K the
algebra splits after base change to K iff no finite ramified place splits
in K (a quadratic completion kills the local obstruction, the identity
completion does not; the infinite place is complex).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .numutil import factorint, legendre
from .quadfield import QuadField, split_prime

INF = math.inf


def _int_pair(a, b) -> tuple[int, int]:
    # square classes are what matters, so n/d ~ n*d
    fa, fb = Fraction(a), Fraction(b)
    if fa == 0 or fb == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    return fa.numerator * fa.denominator, fb.numerator * fb.denominator


def hilbert_symbol(a, b, place) -> int:
    """(a, b)_place in {+1, -1}; place is a rational prime or math.inf."""
    a, b = _int_pair(a, b)
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    alpha, u = 0, a
    while u % p == 0:
        u //= p
        alpha += 1
    beta, v = 0, b
    while v % p == 0:
        v //= p
        beta += 1
    if p == 2:
        eps = ((u - 1) // 2) * ((v - 1) // 2)
        omega_u = (u * u - 1) // 8
        omega_v = (v * v - 1) // 8
        exp = eps + alpha * omega_v + beta * omega_u
        return -1 if exp % 2 else 1
    sign = 1
    if alpha * beta % 2 and (p - 1) // 2 % 2:
        sign = -sign
    if beta % 2 and legendre(u, p) == -1:
        sign = -sign
    if alpha % 2 and legendre(v, p) == -1:
        sign = -sign
    return sign


def ramified_places(a, b) -> set:
    """All places (primes or INF) where (a, b / Q) is ramified."""
    a, b = _int_pair(a, b)
    candidates = {2, INF}
    candidates.update(factorint(a))
    candidates.update(factorint(b))
    return {v for v in candidates if hilbert_symbol(a, b, v) == -1}


# presentations with ramification set exactly the divisors of D
QUATERNION_PRESENTATION = {6: (-6, 2), 10: (-10, 2)}


def splits_quaternion(K: QuadField, D: int) -> bool:
    """Whether B_D tensored with K is a matrix algebra."""
    a, b = QUATERNION_PRESENTATION[D]
    ram = ramified_places(a, b)
    assert len(ram) % 2 == 0, "odd ramification set"
    for v in ram:
        if v == INF:
            continue    # K is imaginary, the complex place splits everything
        primes = split_prime(K, int(v))
        if len(primes) == 2:
            return False
    return True


def hilbert_solvable_oracle(a: int, b: int, p) -> int:
    """Brute-force check of a x^2 + b y^2 = z^2 solvability over Z_p.

    Independent of hilbert_symbol: a primitive solution modulo p^N with
    N = 2 v_p(4ab) + 2 exists iff the conic has a Q_p-point.  Returns +-1.
    """
    if p == INF:
        return -1 if a < 0 and b < 0 else 1
    vp = 0
    c = abs(4 * a * b)
    while c % p == 0:
        c //= p
        vp += 1
    mod = p ** (2 * vp + 2)
    unit_root: list[int | None] = [None] * mod
    any_root = bytearray(mod)
    for z in range(mod):
        t = z * z % mod
        any_root[t] = 1
        if z % p and unit_root[t] is None:
            unit_root[t] = z
    for x in range(mod):
        for y in range(mod):
            t = (a * x * x + b * y * y) % mod
            if not any_root[t]:
                continue
            if x % p or y % p or unit_root[t] is not None:
                return 1
    return -1
