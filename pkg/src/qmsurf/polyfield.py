"""Dense univariate polynomials over a field given through the residue
protocol (zero/one/add/mul/inv/is_zero).  Coefficients ascending."""

from __future__ import annotations


def trim(F, f):
    while f and F.is_zero(f[-1]):
        f.pop()
    return f


def add(F, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else F.zero
        b = g[i] if i < len(g) else F.zero
        out.append(F.add(a, b))
    return trim(F, out)


def sub(F, f, g):
    return add(F, f, [F.neg(c) for c in g])


def mul(F, f, g):
    if not f or not g:
        return []
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for k, b in enumerate(g):
            out[i + k] = F.add(out[i + k], F.mul(a, b))
    return trim(F, out)


def divmod_(F, f, g):
    f = list(f)
    g = trim(F, list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(g[-1])
    q = [F.zero] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and trim(F, f):
        if F.is_zero(f[-1]):
            f.pop()
            continue
        shift = len(f) - len(g)
        c = F.mul(f[-1], inv_lead)
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = F.add(f[shift + i], F.neg(F.mul(c, b)))
        f = trim(F, f)
    return trim(F, q), trim(F, f)


def monic(F, f):
    if not f:
        return f
    inv = F.inv(f[-1])
    return [F.mul(c, inv) for c in f]


def gcd(F, f, g):
    f, g = trim(F, list(f)), trim(F, list(g))
    while g:
        f, g = g, divmod_(F, f, g)[1]
    return monic(F, f)


def powmod(F, base, e: int, modulus):
    result = [F.one]
    base = divmod_(F, base, modulus)[1]
    while e:
        if e & 1:
            result = divmod_(F, mul(F, result, base), modulus)[1]
        base = divmod_(F, mul(F, base, base), modulus)[1]
        e >>= 1
    return result


def distinct_degree_degrees(F, f) -> list[int]:
    """Degrees (with multiplicity) of the irreducible factors of squarefree f."""
    f = monic(F, trim(F, list(f)))
    if len(f) <= 1:
        raise ValueError("constant polynomial")
    q = F.q
    degrees = []
    x = [F.zero, F.one]
    h = x
    d = 0
    while len(f) - 1 > 0:
        d += 1
        if 2 * d > len(f) - 1:
            degrees.append(len(f) - 1)
            break
        h = powmod(F, h, q, f)
        g = gcd(F, sub(F, h, x), f)
        if len(g) > 1:
            count = (len(g) - 1) // d
            degrees.extend([d] * count)
            f = monic(F, divmod_(F, f, g)[0])
            h = divmod_(F, h, f)[1] if len(f) > 1 else h
    return sorted(degrees)
