"""Character spanning sets, deciding sets, and the trace-comparison proof
that two 2-adic representations agree up to semisimplification.

The pipeline: quadratic characters of a ray class group evaluated on a
spanning set rule out quadratic subextensions (all traces there are odd);
a cubic character is pinned down from parity data and separated from the
rest of the cubic dual at one prime; finally traces are compared at every
good prime up to a bound that dominates the deciding-set norms, plus a
designated inert prime that forces a possible twisting character to be
trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .counting import TraceTable
from .errors import (Inconsistent, InputError, MissingEigenvalue,
                     ProbeFailure, TraceMismatch)
from .quadfield import PrimeIdeal
from .rayclass import Character, RayClassGroup


# -- linear algebra over Z/n (n prime) ---------------------------------------

def _rank_mod(rows: list[tuple[int, ...]], n: int) -> int:
    mat = [list(r) for r in rows]
    rank, col = 0, 0
    width = len(mat[0]) if mat else 0
    while rank < len(mat) and col < width:
        piv = next((r for r in range(rank, len(mat)) if mat[r][col] % n), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, n)
        mat[rank] = [v * inv % n for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] % n:
                c = mat[r][col]
                mat[r] = [(a - c * b) % n for a, b in zip(mat[r], mat[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class SpanningReport:
    ok: bool
    rank: int
    dimension: int
    matrix: tuple[tuple[int, ...], ...]


def spanning_check(G: RayClassGroup, basis: list[Character],
                   S: list[PrimeIdeal]) -> SpanningReport:
    """Do the evaluation vectors of S span the full character dual space?"""
    rows = tuple(tuple(G.evaluate(chi, P) for chi in basis) for P in S)
    n = basis[0].order if basis else 2
    rank = _rank_mod(list(rows), n)
    return SpanningReport(rank == len(basis), rank, len(basis), rows)


@dataclass(frozen=True)
class DecidingSet:
    primes: tuple[PrimeIdeal, ...]
    certificate: dict               # nonzero vector -> witnessing prime

    def to_dict(self) -> dict:
        return {
            "primes": [[P.gen.a, P.gen.b] for P in self.primes],
            "certificate": {str(list(vec)): [P.gen.a, P.gen.b]
                            for vec, P in sorted(self.certificate.items())},
        }


def deciding_cover_check(G: RayClassGroup, basis: list[Character],
                         T: list[PrimeIdeal]):
    """Is every nonzero dual vector realized by some prime of T?"""
    from itertools import product as iproduct
    n = basis[0].order if basis else 2
    needed = {vec for vec in iproduct(range(n), repeat=len(basis))
              if any(vec)}
    cert: dict = {}
    for P in T:
        vec = tuple(G.evaluate(chi, P) for chi in basis)
        if vec in needed and vec not in cert:
            cert[vec] = P
    missing = sorted(needed - set(cert))
    return (not missing, cert, missing)


def find_deciding_set(G: RayClassGroup, basis: list[Character],
                      prime_stream, budget: int = 10000) -> DecidingSet:
    """Greedy cover of the nonzero dual vectors by primes from the stream."""
    from itertools import product as iproduct
    from .errors import BudgetExceeded
    n = basis[0].order if basis else 2
    needed = {vec for vec in iproduct(range(n), repeat=len(basis))
              if any(vec)}
    chosen: list[PrimeIdeal] = []
    cert: dict = {}
    if not needed:
        return DecidingSet((), {})
    examined = 0
    for P in prime_stream:
        examined += 1
        if examined > budget:
            raise BudgetExceeded(
                f"no full cover after {budget} primes; missing {len(needed)}")
        if G.modulus.divides(P.gen):
            continue
        vec = tuple(G.evaluate(chi, P) for chi in basis)
        if vec in needed:
            needed.remove(vec)
            cert[vec] = P
            chosen.append(P)
            if not needed:
                return DecidingSet(tuple(chosen), cert)
    raise BudgetExceeded(f"prime stream exhausted; missing {len(needed)} vectors")


# -- the cubic character of the residual field --------------------------------

@dataclass(frozen=True)
class CubicMatch:
    psi: Character
    psi_inverse: Character
    probes: tuple[PrimeIdeal, ...]


def identify_cubic_character(G: RayClassGroup, oracle,
                             probes: list[PrimeIdeal]) -> CubicMatch:
    """The order-3 character whose kernel matches a splitting oracle.

    oracle(P) is True when Frobenius at P acts trivially in the cubic
    residual quotient (even trace for ell = 2).  The probe set must
    separate Hom(Cl, Z/3); the matching character is unique up to inverse.
    """
    basis = G.character_basis(3)
    if not basis:
        raise Inconsistent("group has no cubic characters")
    span = spanning_check(G, basis, probes)
    if not span.ok:
        raise Inconsistent(
            f"probe set separates only rank {span.rank} of {span.dimension}")
    matches = []
    for chi in G.all_characters(3):
        if chi.is_trivial():
            continue
        if all((G.evaluate(chi, P) == 0) == bool(oracle(P)) for P in probes):
            matches.append(chi)
    if not matches:
        raise Inconsistent("no order-3 character matches the oracle")
    matches.sort(key=lambda c: c.values)
    psi = matches[0]
    inv = Character(3, tuple((2 * v) % 3 for v in psi.values))
    assert set(matches) <= {psi, inv}, "oracle matched independent characters"
    return CubicMatch(psi, inv, tuple(probes))


def find_completing_cubic(G: RayClassGroup, psi: Character,
                          sep_prime: PrimeIdeal) -> Character | None:
    """A cubic character independent of psi and nonzero at the prime."""
    span = {psi.values, tuple((2 * v) % 3 for v in psi.values),
            tuple(0 for _ in psi.values)}
    for chi in G.all_characters(3):
        if chi.values in span:
            continue
        if G.evaluate(chi, sep_prime) != 0:
            return chi
    return None


# -- residual isomorphism --------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    verdict: str
    spanning: SpanningReport
    psi: Character
    chi_completion: Character | None
    separating_prime: PrimeIdeal | None

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "spanning_rank": self.spanning.rank,
            "spanning_matrix": [list(r) for r in self.spanning.matrix],
            "psi": list(self.psi.values),
        }
        if self.separating_prime is not None:
            out["chi_completion"] = list(self.chi_completion.values)
            out["separating_prime"] = [self.separating_prime.gen.a,
                                       self.separating_prime.gen.b]
        else:
            out["separation"] = "vacuous (cubic dual has dimension <= 1)"
        return out


def residual_isomorphism_check(curve_parities: dict, newform_parities: dict,
                               G: RayClassGroup, S_span: list[PrimeIdeal],
                               separating_prime: PrimeIdeal | None) -> ResidualReport:
    """Certify that both mod-2 representations are the same C3 quotient.

    curve_parities / newform_parities map primes to a_P mod 2 and must
    cover S_span and the separating prime.  When the cubic character dual
    is 1-dimensional every nonzero cubic character cuts the same field and
    separating_prime may be None (the step is vacuous).
    """
    qbasis = G.character_basis(2)
    span = spanning_check(G, qbasis, S_span)
    if not span.ok:
        raise ProbeFailure("quadratic-spanning",
                           f"rank {span.rank} < {span.dimension}")
    for P in S_span:
        if newform_parities[P] % 2 != 1:
            raise ProbeFailure("form-trace-parity", f"even form trace at {P}")
    for P in S_span:
        if curve_parities[P] % 2 != 1:
            raise ProbeFailure("curve-trace-parity", f"even curve trace at {P}")

    probes = [P for P in curve_parities
              if not G.modulus.divides(P.gen)]
    probes.sort(key=PrimeIdeal.sort_key)
    try:
        match = identify_cubic_character(
            G, lambda P: curve_parities[P] % 2 == 0, probes)
    except Inconsistent as exc:
        raise ProbeFailure("cubic-identification", str(exc)) from exc

    if separating_prime is None:
        if len(G.character_basis(3)) > 1:
            raise ProbeFailure("cubic-separation",
                               "separating prime required: the cubic dual "
                               "has dimension > 1")
        return ResidualReport("isomorphic-C3", span, match.psi, None, None)

    if G.evaluate(match.psi, separating_prime) != 0:
        raise ProbeFailure("cubic-separation",
                           f"psi does not vanish at {separating_prime}")
    chi1 = find_completing_cubic(G, match.psi, separating_prime)
    if chi1 is None:
        raise ProbeFailure("cubic-completion",
                           f"no independent cubic character is nonzero "
                           f"at {separating_prime}")
    sep_curve = curve_parities.get(separating_prime)
    sep_form = newform_parities.get(separating_prime)
    if sep_curve is None or sep_form is None:
        raise ProbeFailure("separating-parity",
                           "separating prime missing from parity data")
    if sep_curve % 2 != sep_form % 2 or sep_curve % 2 != 0:
        raise ProbeFailure("separating-parity",
                           f"traces at {separating_prime} do not both vanish "
                           f"mod 2 (curve {sep_curve}, form {sep_form})")
    return ResidualReport("isomorphic-C3", span, match.psi, chi1,
                          separating_prime)


# -- exhaustive trace comparison ---------------------------------------------------

@dataclass(frozen=True)
class LivneConfig:
    bound: int = 3000
    largest_deciding_norm: int = 2917
    twist_prime: PrimeIdeal | None = None


@dataclass(frozen=True)
class LivneReport:
    verdict: str
    compared: int
    bound: int
    skipped: tuple[tuple[PrimeIdeal, str], ...]
    twist_prime: PrimeIdeal
    twist_trace: int
    comparisons: tuple = dc_field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "compared": self.compared,
            "bound": self.bound,
            "skipped": [{"gen": [P.gen.a, P.gen.b], "reason": r}
                        for P, r in self.skipped],
            "twist_prime": [self.twist_prime.gen.a, self.twist_prime.gen.b],
            "twist_trace": self.twist_trace,
        }


def livne_verify(curve_table: TraceTable, form, config: LivneConfig) -> LivneReport:
    """Compare a_P(curve) with a_P(form) at every good prime of norm <= bound.

    The bound must dominate the largest deciding norm; the twist prime must
    be inert with good reduction and agreeing traces.  Raises TraceMismatch
    on the first disagreement in canonical prime order.
    """
    if config.bound <= 0 or config.bound < config.largest_deciding_norm:
        raise InputError(
            f"comparison bound {config.bound} does not dominate the largest "
            f"deciding norm {config.largest_deciding_norm}")
    if config.twist_prime is None:
        raise InputError("a designated inert twist prime is required")
    twist = config.twist_prime
    if twist.f != 2:
        raise InputError(f"twist prime {twist} is not inert")

    comparisons = []
    twist_trace = None
    for rec in curve_table.records:
        if rec.q > config.bound:
            continue
        a_form = form.eigenvalue(rec.prime)
        if a_form is None:
            raise MissingEigenvalue(
                f"form {form.label} lacks a_P at ({rec.prime.gen})")
        if a_form != rec.a:
            raise TraceMismatch(rec.prime.gen, rec.a, a_form)
        comparisons.append((rec.prime, rec.a))
        if rec.prime == twist:
            twist_trace = rec.a
    if twist_trace is None:
        raise ProbeFailure("twist-prime",
                           f"designated inert prime {twist} was not among "
                           f"the compared good primes")
    skipped = tuple((P, reason) for P, reason in curve_table.bad
                    if P.norm() <= config.bound)
    return LivneReport("verified-up-to-semisimplification",
                       len(comparisons), config.bound, skipped,
                       twist, twist_trace, tuple(comparisons))
