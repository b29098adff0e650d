"""One-time symbolic derivations frozen into src/qmsurf/igusa.py and shimura.py.

Produces, with exact rational arithmetic:

  1. the conversion constants from the Clebsch transvectant invariants
     (A, B, C, D) to the classical Igusa-Clebsch quadruple (I2, I4, I6, I10),
     calibrated against the root-difference definitions evaluated on sextics
     with rational roots;
  2. the invariants of the discriminant-6 family curve as polynomials in the
     parameter j, together with the weight-0 ratio tables used to recover j
     from a curve;
  3. the factored family discriminant (I10), which settles which primes can
     enter the bad-reduction support of a family member.

Requires sympy; run from the repository root:

    python scripts/derive_invariant_tables.py
"""

import itertools
from fractions import Fraction

import sympy as sp

x, z, j, s = sp.symbols("x z j s")


def transvectant(f, g, m, n, k):
    """k-th transvectant of binary forms f (degree m) and g (degree n)."""
    pre = sp.Rational(sp.factorial(m - k) * sp.factorial(n - k),
                      sp.factorial(m) * sp.factorial(n))
    total = 0
    for i in range(k + 1):
        total += ((-1) ** i * sp.binomial(k, i)
                  * sp.diff(f, x, k - i, z, i)
                  * sp.diff(g, x, i, z, k - i))
    return sp.expand(pre * total)


def clebsch_ABCD(coeffs):
    """A, B, C, D for the sextic with the given descending coefficients."""
    f = sum(c * x ** (6 - i) * z ** i for i, c in enumerate(coeffs))
    i4 = transvectant(f, f, 6, 6, 4)          # quartic covariant
    delta = transvectant(i4, i4, 4, 4, 2)
    y1 = transvectant(f, i4, 6, 4, 4)
    y2 = transvectant(i4, y1, 4, 2, 2)
    y3 = transvectant(i4, y2, 4, 2, 2)
    A = transvectant(f, f, 6, 6, 6)
    B = transvectant(i4, i4, 4, 4, 4)
    C = transvectant(i4, delta, 4, 4, 4)
    D = transvectant(y3, y1, 2, 2, 2)
    return [sp.expand(v) for v in (A, B, C, D)]


def root_invariants(a0, roots):
    """Classical root-difference Igusa-Clebsch invariants, exact."""
    rs = [Fraction(r) for r in roots]
    a0 = Fraction(a0)
    idx = list(range(6))

    def d2(i, k):
        return (rs[i] - rs[k]) ** 2

    # I2: sum over the 15 perfect matchings of six points
    I2 = Fraction(0)
    for m1 in range(1, 6):
        rest1 = [i for i in idx if i not in (0, m1)]
        for m2 in rest1[1:]:
            rest2 = [i for i in rest1 if i not in (rest1[0], m2)]
            I2 += d2(0, m1) * d2(rest1[0], m2) * d2(rest2[0], rest2[1])
    I2 *= a0 ** 2

    def tri(t):
        (a, b, c) = t
        return ((rs[a] - rs[b]) * (rs[b] - rs[c]) * (rs[c] - rs[a])) ** 2

    # I4: 10 splits into two unordered triples
    I4 = Fraction(0)
    splits = []
    for t1 in itertools.combinations(idx, 3):
        if 0 in t1:
            t2 = tuple(i for i in idx if i not in t1)
            splits.append((t1, t2))
    for t1, t2 in splits:
        I4 += tri(t1) * tri(t2)
    I4 *= a0 ** 4

    # I6: splits with a bijection between the triples
    I6 = Fraction(0)
    for t1, t2 in splits:
        for perm in itertools.permutations(t2):
            cross = Fraction(1)
            for a, b in zip(t1, perm):
                cross *= d2(a, b)
            I6 += tri(t1) * tri(t2) * cross
    I6 *= a0 ** 6

    I10 = a0 ** 10
    for a, b in itertools.combinations(idx, 2):
        I10 *= d2(a, b)
    return [I2, I4, I6, I10]


def calibrate():
    """Solve for the ABCD -> Igusa-Clebsch conversion constants."""
    import random

    random.seed(7)
    samples = []
    while len(samples) < 9:
        roots = random.sample(range(-9, 10), 6)
        a0 = random.choice([1, 2, 3, -1, 5])
        coeffs = sp.Poly(a0 * sp.prod([x - r for r in roots]), x).all_coeffs()
        ABCD = [sp.Rational(v) for v in clebsch_ABCD(coeffs)]
        I = root_invariants(a0, roots)
        samples.append((ABCD, I))

    def solve_lin(monomials, target_index):
        rows, rhs = [], []
        for ABCD, I in samples:
            A, B, C, D = [Fraction(v.p, v.q) for v in ABCD]
            rows.append([m(A, B, C, D) for m in monomials])
            rhs.append(I[target_index])
        M = sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in r] for r in rows])
        b = sp.Matrix([sp.Rational(c.numerator, c.denominator) for c in rhs])
        sol = M.solve_least_squares(b) if M.rows > M.cols else M.solve(b)
        resid = M * sol - b
        assert all(v == 0 for v in resid), "calibration inconsistent"
        return list(sol)

    c2 = solve_lin([lambda A, B, C, D: A], 0)
    c4 = solve_lin([lambda A, B, C, D: A * A, lambda A, B, C, D: B], 1)
    c6 = solve_lin([lambda A, B, C, D: A ** 3, lambda A, B, C, D: A * B,
                    lambda A, B, C, D: C], 2)
    c10 = solve_lin([lambda A, B, C, D: A ** 5, lambda A, B, C, D: A ** 3 * B,
                     lambda A, B, C, D: A * A * C, lambda A, B, C, D: A * B * B,
                     lambda A, B, C, D: B * C, lambda A, B, C, D: D], 3)
    print("I2  =", c2, "* [A]")
    print("I4  =", c4, "* [A^2, B]")
    print("I6  =", c6, "* [A^3, AB, C]")
    print("I10 =", c10, "* [A^5, A^3B, A^2C, AB^2, BC, D]")
    return c2, c4, c6, c10


def family_tables(c2, c4, c6, c10):
    t = -2 * (27 * j + 16)
    coeffs = [(-4 + 3 * s), 6 * t, 3 * t * (28 + 9 * s), -4 * t ** 2,
              3 * t ** 2 * (28 - 9 * s), 6 * t ** 3, -t ** 3 * (4 + 3 * s)]
    A, B, C, D = clebsch_ABCD(coeffs)

    def reduce_s(e):
        p = sp.Poly(sp.expand(e), s)
        q = sp.rem(p, sp.Poly(s ** 2 + 6 * j, s))
        return sp.expand(q.as_expr())

    A, B, C, D = [reduce_s(v) for v in (A, B, C, D)]
    I2 = sp.expand(c2[0] * A)
    I4 = sp.expand(c4[0] * A ** 2 + c4[1] * B)
    I6 = sp.expand(c6[0] * A ** 3 + c6[1] * A * B + c6[2] * C)
    I10 = sp.expand(c10[0] * A ** 5 + c10[1] * A ** 3 * B + c10[2] * A * A * C
                    + c10[3] * A * B * B + c10[4] * B * C + c10[5] * D)
    I2, I4, I6, I10 = [reduce_s(v) for v in (I2, I4, I6, I10)]
    for name, v in [("I2", I2), ("I4", I4), ("I6", I6), ("I10", I10)]:
        assert s not in sp.expand(v).free_symbols, f"{name} not in Q(j)"
        print(f"{name}(C_j) =", sp.factor(v))

    for name, num, den in [("r1", I2 ** 5, I10),
                           ("r2", I2 ** 3 * I4, I10),
                           ("r3", I2 ** 2 * I6, I10)]:
        r = sp.cancel(sp.together(num / den))
        n, d = sp.fraction(r)
        print(f"{name}(j): num =", sp.expand(n))
        print(f"{name}(j): den =", sp.expand(d))


if __name__ == "__main__":
    consts = calibrate()
    family_tables(*consts)
