"""Acceptance suite: one test per criterion, each printing a pass/fail line
and enforcing its stated time budget.

Criterion 3 is implemented exactly as stated and marked as an expected
failure: the family discriminant is 2^57 3^15 j^3 (27j+16)^15, so primes
dividing 27j+16 enter the discriminant support of every integral model
while nu_P(j) = 0 there (take j = 1: the primes over 43 divide 27+16).
A companion test checks the statement that is actually true at this level:
nu_P(j) = 0 at P away from 6 iff the weight-0 invariant ratios of C_j are
P-integral.  See notes in the repository history for the analysis.
"""

import random
import time
from contextlib import contextmanager

import pytest

from qmsurf.cli import bundled_newform, main
from qmsurf.counting import (bad_prime_support, genuineness_test,
                             odd_trace_density, trace_table)
from qmsurf.curves import EXAMPLES, curve
from qmsurf.galois import verify_ses
from qmsurf.hilbert import (INF, hilbert_symbol, ramified_places,
                            splits_quaternion)
from qmsurf.igusa import igusa_clebsch
from qmsurf.livne import (LivneConfig, identify_cubic_character,
                          find_completing_cubic, livne_verify, spanning_check)
from qmsurf.newform import parse_newform_file, serialize_newform
from qmsurf.numutil import factorint
from qmsurf.quadfield import (FIELDS, QuadFrac, parse_element,
                              prime_from_generator, split_prime, valuation)
from qmsurf.rayclass import modulus, ray_class_group
from qmsurf.shimura import (abstract_point_residual, family_discriminant,
                            family_invariants_closed)

K1, K3 = FIELDS[1], FIELDS[3]


@contextmanager
def criterion(num: int, budget_s: float, description: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        print(f"criterion {num:02d} FAIL ({elapsed:.2f}s): {description}")
        raise
    elapsed = time.perf_counter() - start
    print(f"criterion {num:02d} PASS ({elapsed:.2f}s): {description}")
    assert elapsed < budget_s, f"criterion {num} exceeded {budget_s}s budget"


@pytest.fixture(scope="module")
def tables():
    return {key: trace_table(ex.curve, bound=3000, square_check_bound=0)
            for key, ex in EXAMPLES.items()}


@pytest.fixture(scope="module")
def forms():
    return {key: bundled_newform(ex.newform_label)
            for key, ex in EXAMPLES.items()}


@pytest.fixture(scope="module")
def paper_group():
    p2 = split_prime(K3, 2)[0]
    p13 = prime_from_generator(K3, parse_element("3+w", K3).as_element())
    p19 = prime_from_generator(K3, parse_element("-5+2*w", K3).as_element())
    return ray_class_group(K3, modulus(K3, [(p2, 3), (p13, 1), (p19, 1)]))


@pytest.fixture(scope="module")
def span_set():
    p7a, p7b = split_prime(K3, 7)
    p13 = prime_from_generator(K3, parse_element("3+w", K3).as_element())
    p19 = prime_from_generator(K3, parse_element("-5+2*w", K3).as_element())
    return [p7a, p7b, p13.conjugate(), p19.conjugate(), split_prime(K3, 5)[0]]


def test_criterion_01_conic_point_identity():
    with criterion(1, 1.0, "P_j lies on the conic for 100 random j, exactly"):
        rng = random.Random(101)
        for _ in range(100):
            K = FIELDS[rng.choice((1, 2, 3, 7, 11))]
            j = QuadFrac.of(K, rng.randint(-999, 999), rng.randint(-999, 999),
                            rng.randint(1, 99))
            assert abstract_point_residual(j).is_zero()


def test_criterion_02_splitting_criterion():
    with criterion(2, 1.0, "splits_quaternion == (neither 2 nor 3 splits) "
                           "== Hilbert-symbol computation, all five fields"):
        ram = ramified_places(-6, 2)
        assert ram == {2, 3}
        for d in (1, 2, 3, 7, 11):
            K = FIELDS[d]
            literal = all(len(split_prime(K, p)) == 1 for p in (2, 3))
            by_symbols = all(len(split_prime(K, int(v))) == 1
                             for v in ram if v != INF)
            assert splits_quaternion(K, 6) == literal == by_symbols


def _random_admissible_j(rng):
    while True:
        j = QuadFrac.of(K3, rng.randint(-60, 60), rng.randint(-60, 60),
                        rng.randint(1, 20))
        if j.is_zero() or j == QuadFrac.of(K3, -16, 0, 27):
            continue
        if family_discriminant(j).is_zero():
            continue
        return j


def _support_primes(*elements):
    rational = set()
    for x in elements:
        rational |= set(factorint(x.num.norm()))
        rational |= set(factorint(x.den))
    out = []
    for p in sorted(rational - {2, 3}):
        out.extend(split_prime(K3, p))
    return out


@pytest.mark.xfail(strict=True,
                   reason="spec defect: the family discriminant carries "
                          "(27j+16)^15, whose primes have nu_P(j) = 0; "
                          "see the module docstring and decisions ledger")
def test_criterion_03_reduction_support_as_stated():
    with criterion(3, 30.0, "disc support of C_j forces nu_P(j) != 0 "
                            "(as stated; known-defective)"):
        rng = random.Random(303)
        one = QuadFrac.of(K3, 1)
        for _ in range(20):
            j = _random_admissible_j(rng)
            t_part = 27 * j + 16 * one
            disc = family_discriminant(j)
            for P in _support_primes(disc):
                if valuation(disc, P) != 0:
                    assert valuation(j, P) != 0, \
                        f"P over {P.p} divides disc but nu_P(j) = 0"


def test_criterion_03_companion_reduction_proposition():
    with criterion(3, 30.0, "companion (true form): nu_P(j) = 0 away from 6 "
                            "iff the weight-0 ratios of C_j are P-integral"):
        rng = random.Random(304)
        one = QuadFrac.of(K3, 1)
        for _ in range(20):
            j = _random_admissible_j(rng)
            ic = family_invariants_closed(j)
            ratios = ic.absolute()
            for P in _support_primes(j, 27 * j + 16 * one):
                integral = all(r.is_zero() or valuation(r, P) >= 0
                               for r in ratios)
                assert integral == (valuation(j, P) == 0), (str(j), P.p)


def test_criterion_04_qm_euler_shape():
    with criterion(4, 300.0, "degree-4 Euler factor is (1 - a t + q t^2)^2 "
                             "at every good prime of norm <= 500, all curves"):
        for key, ex in EXAMPLES.items():
            T = trace_table(ex.curve, bound=500, square_check_bound=500)
            assert T.records, key
            for rec in T.records:
                assert rec.n2 is not None
                assert rec.n2 == rec.q ** 2 + 1 - 2 * (rec.a ** 2 - 2 * rec.q)
                assert rec.a * rec.a <= 4 * rec.q
                assert rec.lpoly == (1, -2 * rec.a, rec.a ** 2 + 2 * rec.q,
                                     -2 * rec.a * rec.q, rec.q ** 2)


def test_criterion_05_conductor_support():
    with criterion(5, 60.0, "bad-prime support contains the conductor "
                            "support of each curve"):
        for key, ex in EXAMPLES.items():
            support = bad_prime_support(ex.curve)
            rational = {P.p for P in support}
            assert set(ex.conductor_support) <= rational, key
        # the split conductor primes are single specific conjugates
        c1_support = {(P.p, (P.gen.a, P.gen.b))
                      for P in bad_prime_support(EXAMPLES["c1"].curve)}
        assert (5, (2, 1)) in c1_support and (37, (-6, 1)) in c1_support


def test_criterion_06_ray_class_group(paper_group):
    with criterion(6, 30.0, "Cl(O, p2^3 p13 p19) has invariants "
                            "(2, 2, 12, 36)"):
        assert paper_group.invariants == (2, 2, 12, 36)


def test_criterion_07_spanning_set(paper_group, span_set):
    with criterion(7, 5.0, "quadratic characters span F_2^4 on "
                           "{p7_1, p7_2, p13', p19', p5}"):
        rep = spanning_check(paper_group, paper_group.character_basis(2),
                             span_set)
        assert rep.ok and rep.rank == 4


def test_criterion_08_residual_c3_pipeline(tables, paper_group, span_set):
    with criterion(8, 60.0, "c2: odd traces on S, even trace at the "
                            "separating prime over 37, cubic character "
                            "identified and completed"):
        T = tables["c2"]
        for P in span_set:
            assert T.record_at(P).a % 2 == 1
        evens = [P for P in split_prime(K3, 37)
                 if T.record_at(P) and T.record_at(P).a % 2 == 0]
        assert len(evens) == 1
        sep = evens[0]
        parity = {rec.prime: rec.a % 2 for rec in T.records}
        probes = sorted((P for P in parity
                         if not paper_group.modulus.divides(P.gen)),
                        key=lambda P: P.sort_key())
        match = identify_cubic_character(paper_group,
                                         lambda P: parity[P] == 0, probes)
        assert paper_group.evaluate(match.psi, sep) == 0
        chi1 = find_completing_cubic(paper_group, match.psi, sep)
        assert chi1 is not None
        assert paper_group.evaluate(chi1, sep) != 0


def test_criterion_09_exhaustive_trace_agreement(tables, forms):
    with criterion(9, 600.0, "a_P(curve) = a_P(form) at every good prime of "
                             "norm <= 3000 plus the inert twist prime, "
                             "all four pairs"):
        for key, ex in EXAMPLES.items():
            twist = split_prime(ex.curve.field, ex.twist_prime_p)[0]
            assert twist.f == 2
            rep = livne_verify(tables[key], forms[key],
                               LivneConfig(bound=3000, twist_prime=twist))
            assert rep.verdict == "verified-up-to-semisimplification", key
            assert rep.compared >= 400, key


def test_criterion_10_genuineness(tables):
    with criterion(10, 60.0, "every curve has a conjugate pair with "
                             "a_P^2 != a_Pbar^2"):
        for key, T in tables.items():
            verdict = genuineness_test(T)
            assert verdict.verdict == "genuine-witnessed", key
            P, Q, a1, a2 = verdict.witness
            assert a1 * a1 != a2 * a2


def test_criterion_11_group_theory():
    with criterion(11, 5.0, "|(O/l)^x| = (l^2-1) l^2 with elementary-abelian "
                            "kernel and cyclic quotient, l in {2, 3, 5}"):
        for ell in (2, 3, 5):
            rep = verify_ses(ell)
            assert rep.group_order == (ell ** 2 - 1) * ell ** 2
            assert rep.kernel_order == ell ** 2
            assert rep.kernel_is_elementary_abelian
            assert rep.quotient_is_cyclic
            assert rep.quotient_order == ell ** 2 - 1


def test_criterion_12_property_suites(paper_group, forms):
    with criterion(12, 60.0, "reciprocity, covariance weights, character "
                             "unit-independence, round-trips, parallel "
                             "determinism"):
        rng = random.Random(112)
        done = 0
        while done < 100:
            a, b = rng.randint(-99, 99), rng.randint(-99, 99)
            if a == 0 or b == 0:
                continue
            places = {2, INF} | set(factorint(a)) | set(factorint(b))
            prod = 1
            for v in places:
                prod *= hilbert_symbol(a, b, v)
            assert prod == 1
            done += 1

        rows = [(1, 0, 1), (0, 2, 1), (3, -1, 1), (1, 1, 2), (0, 0, 1),
                (2, 0, 1), (-1, 1, 1)]
        base = igusa_clebsch(curve(K1, rows))
        u = 5
        scaled = igusa_clebsch(curve(K1, [(a * u * u, b * u * u, den)
                                          for a, b, den in rows]))
        for val, ref, w in zip(scaled.tuple(), base.tuple(), (2, 4, 6, 10)):
            assert val == ref * (u ** (2 * w))

        chi = paper_group.character_basis(2)[0]
        P = split_prime(K3, 7)[0]
        for unit in K3.units():
            assert paper_group.evaluate_element(chi, unit * P.gen) \
                == paper_group.evaluate(chi, P)

        for key, form in forms.items():
            assert parse_newform_file(serialize_newform(form)) == form

        C = EXAMPLES["c2"].curve
        serial = trace_table(C, bound=200, square_check_bound=50, jobs=1)
        parallel = trace_table(C, bound=200, square_check_bound=50, jobs=2)
        assert serial.to_dict() == parallel.to_dict()


def test_criterion_13_odd_trace_density(tables):
    with criterion(13, 120.0, "odd-trace density for c2 within 2/3 +- 0.1 "
                              "over good primes of norm <= 3000"):
        rho = odd_trace_density(tables["c2"])
        assert abs(rho - 2 / 3) <= 0.1, rho


def test_paper_suite_cli_end_to_end(capsys):
    """The paper-suite command reproduces 4/4 verifications (exit 0)."""
    code = main(["paper-suite", "--square-check-norm", "0"])
    captured = capsys.readouterr()
    assert code == 0
    import json
    doc = json.loads(captured.out)
    assert doc["verified"] == 4 and doc["total"] == 4
    for key, entry in doc["curves"].items():
        assert entry["trace_agreement_ok"] and entry["genuine_ok"]
        assert entry["residual_ok"] and entry["conductor_support_ok"]
