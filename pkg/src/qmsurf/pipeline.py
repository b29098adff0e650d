"""End-to-end verification pipeline: trace table, genuineness, residual
C3 certification, exhaustive trace comparison with twist elimination.

The residual stage needs a modulus capturing every quadratic and cubic
character that could cut the relevant extensions: primes over 2 enter with
exponent 2e + 1 (conductor-exponent bound for quadratic characters of a
2-adic completion), odd primes of bad reduction with exponent 1 (tame).
"""

from __future__ import annotations

from dataclasses import dataclass

from .counting import (TraceTable, bad_prime_support, genuineness_test,
                       trace_table)
from .curves import GenusTwoCurve
from .errors import Inconsistent, InputError, ProbeFailure
from .livne import (LivneConfig, LivneReport, ResidualReport,
                    find_completing_cubic, identify_cubic_character,
                    livne_verify, residual_isomorphism_check)
from .newform import NewformRecord
from .quadfield import PrimeIdeal, QuadField, split_prime
from .rayclass import Modulus, RayClassGroup, modulus, ray_class_group


def default_modulus(curve: GenusTwoCurve, boost_3adic: bool = False) -> Modulus:
    """Primes over 2 with exponent 2e+1, odd bad-support primes with 1.

    Quadratic characters are wild only over 2 (conductor exponent up to
    2e+1); cubic characters are wild over 3 (exponent up to 2e), so when
    the residual cubic field may ramify at a bad prime over 3 the modulus
    needs the boosted 3-adic exponent.
    """
    K = curve.field
    parts = [(P, 2 * P.e + 1) for P in split_prime(K, 2)]
    for P in bad_prime_support(curve):
        if P.p == 2:
            continue
        if P.p == 3 and boost_3adic:
            parts.append((P, 2 * P.e))
        else:
            parts.append((P, 1))
    return modulus(K, parts)


def modulus_candidates(curve: GenusTwoCurve) -> list[Modulus]:
    first = default_modulus(curve)
    boosted = default_modulus(curve, boost_3adic=True)
    return [first] if boosted == first else [first, boosted]


def parity_maps(table: TraceTable, form: NewformRecord):
    curve_par, form_par = {}, {}
    for rec in table.records:
        curve_par[rec.prime] = rec.a % 2
        v = form.eigenvalue(rec.prime)
        if v is not None:
            form_par[rec.prime] = v % 2
    return curve_par, form_par


def find_spanning_set(G: RayClassGroup, curve_par: dict, form_par: dict,
                      max_size: int = 12) -> list[PrimeIdeal]:
    """Greedy quadratic spanning set among primes with odd traces both sides."""
    basis = G.character_basis(2)
    chosen: list[PrimeIdeal] = []
    rows: list[tuple[int, ...]] = []
    from .livne import _rank_mod
    rank = 0
    for P in sorted(curve_par, key=PrimeIdeal.sort_key):
        if curve_par[P] != 1 or form_par.get(P) != 1:
            continue
        if G.modulus.divides(P.gen):
            continue
        vec = tuple(G.evaluate(chi, P) for chi in basis)
        trial = rows + [vec]
        r = _rank_mod(trial, 2)
        if r > rank:
            rows, rank = trial, r
            chosen.append(P)
        if rank == len(basis) or len(chosen) >= max_size:
            break
    if rank < len(basis):
        raise ProbeFailure("quadratic-spanning",
                           f"odd-trace primes span only rank {rank} of "
                           f"{len(basis)}")
    return chosen


def find_separating_prime(G: RayClassGroup, curve_par: dict,
                          form_par: dict) -> PrimeIdeal | None:
    """A prime where the curve's cubic character vanishes but some
    independent cubic character does not, with even traces on both sides.

    None when the cubic dual is at most 1-dimensional (nothing to separate
    from: all nonzero cubic characters cut the same field).
    """
    if len(G.character_basis(3)) <= 1:
        return None
    probes = [P for P in sorted(curve_par, key=PrimeIdeal.sort_key)
              if not G.modulus.divides(P.gen)]
    match = identify_cubic_character(
        G, lambda P: curve_par[P] % 2 == 0, probes)
    for P in probes:
        if curve_par[P] % 2 or form_par.get(P, 1) % 2:
            continue
        if G.evaluate(match.psi, P) != 0:
            continue
        if find_completing_cubic(G, match.psi, P) is not None:
            return P
    raise ProbeFailure("cubic-separation", "no separating prime found")


@dataclass(frozen=True)
class VerifyOutcome:
    table: TraceTable
    genuineness: object
    residual: ResidualReport
    livne: LivneReport

    def to_dict(self) -> dict:
        return {
            "genuineness": self.genuineness.to_dict(),
            "residual": self.residual.to_dict(),
            "trace_comparison": self.livne.to_dict(),
            "verdict": self.livne.verdict,
        }


def default_twist_prime(K: QuadField, override: PrimeIdeal | None = None):
    if override is not None:
        return override
    if K.d == 3:
        P = split_prime(K, 5)[0]
        assert P.f == 2
        return P
    raise InputError(f"no default twist prime for {K.label}; pass one "
                     "explicitly (an inert prime with agreeing traces)")


def full_verify(curve: GenusTwoCurve, form: NewformRecord,
                bound: int = 3000, square_check_bound: int = 500,
                jobs: int = 1, twist_prime: PrimeIdeal | None = None,
                ray_modulus: Modulus | None = None) -> VerifyOutcome:
    """Run every stage; raises VerificationError subtypes on failure."""
    if form.field != curve.field:
        raise InputError(
            f"curve over {curve.field.label} against form over "
            f"{form.field.label}")
    table = trace_table(curve, bound=bound,
                        square_check_bound=square_check_bound, jobs=jobs)
    genuineness = genuineness_test(table)
    candidates = ([ray_modulus] if ray_modulus is not None
                  else modulus_candidates(curve))
    curve_par, form_par = parity_maps(table, form)
    residual = None
    for i, mod in enumerate(candidates):
        G = ray_class_group(curve.field, mod)
        S = find_spanning_set(G, curve_par, form_par)
        try:
            sep = find_separating_prime(G, curve_par, form_par)
            residual = residual_isomorphism_check(curve_par, form_par, G, S, sep)
            break
        except (ProbeFailure, Inconsistent):
            # the cubic character may be wildly ramified over 3; retry with
            # the boosted modulus before giving up
            if i + 1 == len(candidates):
                raise
    twist = default_twist_prime(curve.field, twist_prime)
    config = LivneConfig(bound=bound, twist_prime=twist)
    livne = livne_verify(table, form, config)
    return VerifyOutcome(table, genuineness, residual, livne)
