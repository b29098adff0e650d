"""Command-line interface.

Exit codes: 0 success, 1 a mathematical verification ran and failed,
2 bad input or configuration.  All payloads are canonical JSON (sorted
keys, fixed separators) so identical inputs give byte-identical output;
timestamps appear only in the append-only results store.
"""

from __future__ import annotations

import argparse
import datetime
from dataclasses import dataclass
import importlib.resources
import json
import sys

from .counting import bad_prime_support, genuineness_test, trace_table
from .curves import EXAMPLES, load_curve
from .errors import (FieldDoesNotSplit, FixtureMissing, InputError,
                     QmsurfError, VerificationError)
from .galois import sextic_cycle_type, verify_ses, verify_local_model
from .hilbert import splits_quaternion
from .livne import LivneConfig, livne_verify
from .newform import fetch_newform, parse_newform_file, serialize_newform
from .pipeline import default_twist_prime, full_verify
from .quadfield import (PrimeIdeal, field_by_label, parse_element,
                        prime_from_generator, primes_up_to_norm, split_prime)
from .rayclass import modulus, ray_class_group
from .shimura import (base_point, family_curve, family_invariants_closed,
                      find_j_from_curve, j_bad_support, j_from_point,
                      parametrize_conic)


@dataclass(frozen=True)
class RunConfig:
    """Validated bundle of the knobs shared by the analysis commands."""
    field: str | None = None
    trace_bound: int = 3000
    square_check_bound: int = 500
    height: int = 10
    jobs: int = 1
    out: str | None = None
    offline: bool = False
    twist_prime: str | None = None

    def __post_init__(self):
        if self.trace_bound < 0 or self.square_check_bound < 0 or self.height < 0:
            raise InputError("bounds must be non-negative")
        if self.jobs < 1:
            raise InputError("jobs must be >= 1")


def _config(args, **overrides) -> RunConfig:
    return RunConfig(
        field=getattr(args, "field", None),
        trace_bound=getattr(args, "max_norm", 3000),
        square_check_bound=getattr(args, "square_check_norm", 500),
        height=getattr(args, "height", 10),
        jobs=getattr(args, "jobs", 1),
        out=getattr(args, "out", None),
        offline=getattr(args, "offline", False),
        twist_prime=getattr(args, "twist_prime", None),
        **overrides,
    )


def _emit(doc, args) -> None:
    text = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


class ResultsStore:
    """Append-only JSON-lines store; the only place timestamps go."""

    def __init__(self, path: str):
        self.path = path

    def append(self, record: dict) -> None:
        record = dict(record)
        record["timestamp"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat()
        with open(self.path, "a") as fh:
            fh.write(json.dumps(record, sort_keys=True,
                                separators=(",", ":")) + "\n")


def _frac_triple(x) -> list[int]:
    return [x.num.a, x.num.b, x.den]


def _parse_twist(args, field) -> PrimeIdeal | None:
    if getattr(args, "twist_prime", None):
        gen = parse_element(args.twist_prime, field).as_element()
        return prime_from_generator(field, gen)
    return None


def _parse_modulus(spec: str, field):
    parts = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "^" in chunk:
            lit, exp = chunk.rsplit("^", 1)
            e = int(exp)
        else:
            lit, e = chunk, 1
        gen = parse_element(lit, field).as_element()
        parts.append((prime_from_generator(field, gen), e))
    return modulus(field, parts)


def bundled_newform(label: str):
    res = importlib.resources.files("qmsurf").joinpath(
        f"data/newforms/{label}.json")
    if not res.is_file():
        raise FixtureMissing(f"bundled newform fixture {label} is missing")
    return parse_newform_file(res.read_text())


# -- commands ------------------------------------------------------------------

def cmd_conic_points(args) -> int:
    K = field_by_label(args.field)
    base = base_point(K, args.disc)
    pts = []
    for P in parametrize_conic(args.disc, K, base, args.height):
        entry = {"coords": [[c.a, c.b] for c in P.coords]}
        if not P.coords[0].is_zero() and args.disc == 6:
            j = j_from_point(P)
            entry["j"] = _frac_triple(j.value)
        pts.append(entry)
    _emit({"field": K.label, "disc": args.disc, "height": args.height,
           "count": len(pts), "points": pts}, args)
    return 0


def cmd_family_curve(args) -> int:
    K = field_by_label(args.field)
    j = parse_element(args.j, K)
    fc = family_curve(j)
    inv = family_invariants_closed(j)
    _emit({
        "field": K.label,
        "j": _frac_triple(j),
        "relation": "s^2 = -6*j",
        "coeffs_s": [[_frac_triple(u), _frac_triple(v)] for u, v in fc.coeffs],
        "invariants": {"I2": _frac_triple(inv.I2), "I4": _frac_triple(inv.I4),
                       "I6": _frac_triple(inv.I6), "I10": _frac_triple(inv.I10)},
    }, args)
    return 0


def cmd_family_match(args) -> int:
    C = load_curve(args.curve)
    j = find_j_from_curve(C)
    support = j_bad_support(j.value)
    _emit({"field": C.field.label, "j": _frac_triple(j.value),
           "j_support": [[P.gen.a, P.gen.b] for P in support]}, args)
    return 0


def cmd_analyze(args) -> int:
    cfg = _config(args)
    C = load_curve(args.curve)
    T = trace_table(C, bound=cfg.trace_bound,
                    square_check_bound=cfg.square_check_bound, jobs=cfg.jobs)
    _emit(T.to_dict(), args)
    return 0


def cmd_genuine(args) -> int:
    cfg = _config(args, square_check_bound=0)
    C = load_curve(args.curve)
    T = trace_table(C, bound=cfg.trace_bound, square_check_bound=0,
                    jobs=cfg.jobs)
    verdict = genuineness_test(T)
    _emit(verdict.to_dict(), args)
    return 0


def cmd_cycle_types(args) -> int:
    C = load_curve(args.curve)
    hist: dict[str, int] = {}
    samples = []
    for P in primes_up_to_norm(C.field, args.max_norm):
        try:
            sample = sextic_cycle_type(C, P)
        except QmsurfError:
            continue
        key = ",".join(str(d) for d in sample.degrees)
        hist[key] = hist.get(key, 0) + 1
        samples.append({"gen": [P.gen.a, P.gen.b], "degrees": list(sample.degrees)})
    _emit({"curve": C.digest(), "max_norm": args.max_norm,
           "histogram": hist, "samples": samples}, args)
    return 0


def cmd_group_theory(args) -> int:
    rep = verify_ses(args.ell)
    doc = {
        "ell": rep.ell,
        "group_order": rep.group_order,
        "kernel_order": rep.kernel_order,
        "kernel_exponent": rep.kernel_exponent,
        "kernel_is_elementary_abelian": rep.kernel_is_elementary_abelian,
        "quotient_order": rep.quotient_order,
        "quotient_is_cyclic": rep.quotient_is_cyclic,
    }
    if args.precision:
        doc["local_model"] = verify_local_model(args.ell, args.precision)
    _emit(doc, args)
    return 0


def cmd_rcg(args) -> int:
    K = field_by_label(args.field)
    mod = _parse_modulus(args.modulus, K)
    G = ray_class_group(K, mod)
    _emit({"field": K.label, "modulus": str(mod), "norm": mod.norm(),
           "invariants": list(G.invariants),
           "quadratic_dim": len(G.character_basis(2)),
           "cubic_dim": len(G.character_basis(3))}, args)
    return 0


def cmd_newform_fetch(args) -> int:
    record = fetch_newform(args.label, endpoint=args.endpoint,
                           cache_dir=args.cache, offline=args.offline)
    sys.stdout.write(serialize_newform(record) + "\n")
    return 0


def cmd_livne_verify(args) -> int:
    cfg = _config(args, square_check_bound=0)
    C = load_curve(args.curve)
    form = parse_newform_file(args.newform)
    T = trace_table(C, bound=cfg.trace_bound, square_check_bound=0,
                    jobs=cfg.jobs)
    twist = _parse_twist(args, C.field) or default_twist_prime(C.field)
    report = livne_verify(T, form, LivneConfig(bound=cfg.trace_bound,
                                               twist_prime=twist))
    _emit(report.to_dict(), args)
    return 0


def cmd_verify(args) -> int:
    cfg = _config(args)
    C = load_curve(args.curve)
    form = parse_newform_file(args.newform)
    twist = _parse_twist(args, C.field)
    outcome = full_verify(C, form, bound=cfg.trace_bound,
                          square_check_bound=cfg.square_check_bound,
                          jobs=cfg.jobs, twist_prime=twist)
    doc = outcome.to_dict()
    _emit(doc, args)
    if args.store:
        ResultsStore(args.store).append({
            "curve": C.digest(),
            "field": C.field.label,
            "disc_support": [[P.gen.a, P.gen.b] for P in bad_prime_support(C)],
            "genuineness": outcome.genuineness.verdict,
            "verification": outcome.livne.verdict,
        })
    return 0


def cmd_paper_suite(args) -> int:
    cfg = _config(args)
    lines = []
    all_ok = True
    details = {}
    for key in sorted(EXAMPLES):
        ex = EXAMPLES[key]
        C = ex.curve
        form = bundled_newform(ex.newform_label)
        support = {P.p for P in bad_prime_support(C)}
        support_ok = set(ex.conductor_support) <= support
        twist = split_prime(C.field, ex.twist_prime_p)[0]
        try:
            outcome = full_verify(C, form, bound=cfg.trace_bound,
                                  square_check_bound=cfg.square_check_bound,
                                  jobs=cfg.jobs, twist_prime=twist)
            genuine_ok = outcome.genuineness.verdict == "genuine-witnessed"
            residual_ok = outcome.residual.verdict == "isomorphic-C3"
            traces_ok = outcome.livne.verdict == "verified-up-to-semisimplification"
            detail = outcome.to_dict()
        except VerificationError as exc:
            genuine_ok = residual_ok = traces_ok = False
            detail = {"error": str(exc)}
        ok = support_ok and genuine_ok and residual_ok and traces_ok
        all_ok &= ok
        details[key] = {"newform": ex.newform_label,
                        "conductor_support_ok": support_ok,
                        "genuine_ok": genuine_ok,
                        "residual_ok": residual_ok,
                        "trace_agreement_ok": traces_ok,
                        "detail": detail}
        lines.append(f"{key} vs {ex.newform_label}: "
                     f"support={'pass' if support_ok else 'FAIL'} "
                     f"genuine={'pass' if genuine_ok else 'FAIL'} "
                     f"residual={'pass' if residual_ok else 'FAIL'} "
                     f"traces={'pass' if traces_ok else 'FAIL'}")
    for line in lines:
        sys.stderr.write(line + "\n")
    verified = sum(1 for d in details.values()
                   if all(d[k] for k in ("conductor_support_ok", "genuine_ok",
                                         "residual_ok", "trace_agreement_ok")))
    _emit({"verified": verified, "total": len(details), "curves": details},
          args)
    return 0 if all_ok else 1


def cmd_search(args) -> int:
    K = field_by_label(args.field)
    if not splits_quaternion(K, args.disc):
        raise FieldDoesNotSplit(
            f"{K.label} does not split the discriminant-{args.disc} algebra")
    allowed = set()
    if args.allow:
        allowed = {int(tok) for tok in args.allow.split(",") if tok.strip()}
    base = base_point(K, args.disc)
    store = ResultsStore(args.store) if args.store else None
    seen_j = set()
    found = []
    for P in parametrize_conic(args.disc, K, base, args.height):
        if P.coords[0].is_zero():
            continue
        j = j_from_point(P).value
        if j in seen_j:
            continue
        seen_j.add(j)
        if j.is_zero() or j == parse_element("(-16)/27", K):
            continue
        support = j_bad_support(j)
        if any(Q.p not in allowed for Q in support):
            continue
        inv = family_invariants_closed(j)
        entry = {
            "point": [[c.a, c.b] for c in P.coords],
            "j": _frac_triple(j),
            "j_support": [[Q.gen.a, Q.gen.b] for Q in support],
            "invariants": {"I2": _frac_triple(inv.I2),
                           "I4": _frac_triple(inv.I4),
                           "I6": _frac_triple(inv.I6),
                           "I10": _frac_triple(inv.I10)},
        }
        found.append(entry)
        if store:
            store.append({"field": K.label, "j": entry["j"],
                          "j_support": entry["j_support"],
                          "genuineness": None, "verification": None})
    _emit({"field": K.label, "disc": args.disc, "height": args.height,
           "allowed": sorted(allowed), "count": len(found),
           "candidates": found}, args)
    return 0


# -- wiring -----------------------------------------------------------------------

def _common(p):
    p.add_argument("--out", help="write the JSON payload here instead of stdout")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--offline", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qmsurf",
        description="Genus-2 curves with quaternionic multiplication over "
                    "imaginary quadratic fields: search, point counting, and "
                    "trace-comparison verification against Bianchi newform "
                    "eigenvalue tables.")
    sub = ap.add_subparsers(dest="command", required=True)

    conic = sub.add_parser("conic", help="conic point machinery")
    conic_sub = conic.add_subparsers(dest="subcommand", required=True)
    cp = conic_sub.add_parser("points", help="sweep rational points")
    cp.add_argument("--field", required=True)
    cp.add_argument("--disc", type=int, choices=(6, 10), default=6)
    cp.add_argument("--height", type=int, default=10)
    _common(cp)
    cp.set_defaults(func=cmd_conic_points)

    family = sub.add_parser("family", help="the genus-2 family")
    fam_sub = family.add_subparsers(dest="subcommand", required=True)
    fc = fam_sub.add_parser("curve", help="emit the family member at j")
    fc.add_argument("--field", required=True)
    fc.add_argument("--j", required=True, help='element literal, e.g. "(1+2*w)/3"')
    _common(fc)
    fc.set_defaults(func=cmd_family_curve)
    fm = fam_sub.add_parser("match", help="recover j from a curve file")
    fm.add_argument("--curve", required=True)
    _common(fm)
    fm.set_defaults(func=cmd_family_match)

    an = sub.add_parser("analyze", help="trace table by point counting")
    an.add_argument("--curve", required=True)
    an.add_argument("--max-norm", type=int, default=3000)
    an.add_argument("--square-check-norm", type=int, default=500)
    _common(an)
    an.set_defaults(func=cmd_analyze)

    ge = sub.add_parser("genuine", help="twist-robust conjugate-pair test")
    ge.add_argument("--curve", required=True)
    ge.add_argument("--max-norm", type=int, default=500)
    _common(ge)
    ge.set_defaults(func=cmd_genuine)

    cy = sub.add_parser("cycle-types", help="factorization patterns of the sextic")
    cy.add_argument("--curve", required=True)
    cy.add_argument("--max-norm", type=int, default=500)
    _common(cy)
    cy.set_defaults(func=cmd_cycle_types)

    gt = sub.add_parser("group-theory", help="mod-ell structure reports")
    gt.add_argument("--ell", type=int, required=True)
    gt.add_argument("--precision", type=int, default=0)
    _common(gt)
    gt.set_defaults(func=cmd_group_theory)

    rc = sub.add_parser("rcg", help="ray class group of a modulus")
    rc.add_argument("--field", required=True)
    rc.add_argument("--modulus", required=True,
                    help='comma list of gen^e literals, e.g. "2^3,3+w,-5+2*w"')
    _common(rc)
    rc.set_defaults(func=cmd_rcg)

    nf = sub.add_parser("newform", help="eigenvalue table ingestion")
    nf_sub = nf.add_subparsers(dest="subcommand", required=True)
    nff = nf_sub.add_parser("fetch", help="fetch by label (cache-first)")
    nff.add_argument("--label", required=True)
    nff.add_argument("--endpoint")
    nff.add_argument("--cache", default="cache")
    _common(nff)
    nff.set_defaults(func=cmd_newform_fetch)

    lv = sub.add_parser("livne", help="trace comparison")
    lv_sub = lv.add_subparsers(dest="subcommand", required=True)
    lvv = lv_sub.add_parser("verify", help="exhaustive trace agreement")
    lvv.add_argument("--curve", required=True)
    lvv.add_argument("--newform", required=True)
    lvv.add_argument("--max-norm", type=int, default=3000)
    lvv.add_argument("--twist-prime", help="generator literal of an inert prime")
    _common(lvv)
    lvv.set_defaults(func=cmd_livne_verify)

    ve = sub.add_parser("verify", help="full pipeline: counts, genuineness, "
                                       "residual, trace comparison")
    ve.add_argument("--curve", required=True)
    ve.add_argument("--newform", required=True)
    ve.add_argument("--max-norm", type=int, default=3000)
    ve.add_argument("--square-check-norm", type=int, default=500)
    ve.add_argument("--twist-prime")
    ve.add_argument("--store", help="append a verdict record to this JSONL store")
    _common(ve)
    ve.set_defaults(func=cmd_verify)

    ps = sub.add_parser("paper-suite", help="run the bundled example curves "
                                            "through the full pipeline")
    ps.add_argument("--max-norm", type=int, default=3000)
    ps.add_argument("--square-check-norm", type=int, default=500)
    _common(ps)
    ps.set_defaults(func=cmd_paper_suite)

    se = sub.add_parser("search", help="sweep conic points and filter j by "
                                       "reduction support")
    se.add_argument("--field", required=True)
    se.add_argument("--disc", type=int, choices=(6, 10), default=6)
    se.add_argument("--height", type=int, default=10)
    se.add_argument("--allow", default="",
                    help="comma list of rational primes allowed in the support")
    se.add_argument("--store", help="append candidate records to this JSONL store")
    _common(se)
    se.set_defaults(func=cmd_search)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return 1
    except (InputError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except QmsurfError as exc:
        # a mathematical determination came out negative (e.g. NotInFamily)
        sys.stderr.write(f"failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
