"""Genus-2 curves y^2 = f(x) over an imaginary quadratic field.

A curve stores the seven descending coefficients of f (degree 6, or 5 when
the leading one vanishes) as exact fractions.  The integral model clears
denominators by y -> y/m, f -> m^2 f for the least positive integer m, and
primes dividing m are treated as unusable for counting.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import SchemaError
from .quadfield import (FIELDS, QuadElement, QuadFrac, QuadField,
                        field_by_label)


def _clearing_factor(dens: list[int]) -> int:
    """Least m > 0 with den | m^2 for every denominator."""
    from .numutil import factorint
    need: dict[int, int] = {}
    for den in dens:
        for p, e in factorint(den).items():
            need[p] = max(need.get(p, 0), (e + 1) // 2)
    m = 1
    for p, e in need.items():
        m *= p ** e
    return m


@dataclass(frozen=True)
class GenusTwoCurve:
    field: QuadField
    coeffs: tuple[QuadFrac, ...]     # degree-descending, length 7

    def __post_init__(self):
        if len(self.coeffs) != 7:
            raise ValueError("expected 7 descending sextic coefficients")

    @property
    def degree(self) -> int:
        return 5 if self.coeffs[0].is_zero() else 6

    @lru_cache(maxsize=None)
    def integral_model(self) -> tuple[tuple[QuadElement, ...], int]:
        m = _clearing_factor([c.den for c in self.coeffs])
        mm = m * m
        cleared = tuple((c * mm).as_element() for c in self.coeffs)
        return cleared, m

    def to_dict(self) -> dict:
        return {
            "field": self.field.label,
            "coeffs": [[c.num.a, c.num.b, c.den] for c in self.coeffs],
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def curve_from_dict(doc: dict) -> GenusTwoCurve:
    try:
        field = field_by_label(doc["field"])
        raw = doc["coeffs"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"curve document missing field/coeffs: {exc}") from exc
    if not isinstance(raw, list) or len(raw) != 7:
        raise SchemaError("coeffs must be a list of 7 [a, b, den] triples")
    coeffs = []
    for triple in raw:
        if not (isinstance(triple, list) and len(triple) == 3):
            raise SchemaError(f"bad coefficient entry {triple!r}")
        a, b, den = (int(v) for v in triple)
        if den <= 0:
            raise SchemaError(f"coefficient denominator must be positive: {triple!r}")
        coeffs.append(QuadFrac.of(field, a, b, den))
    return GenusTwoCurve(field, tuple(coeffs))


def load_curve(path) -> GenusTwoCurve:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read curve file {path}: {exc}") from exc
    return curve_from_dict(doc)


def curve(field: QuadField, rows: list[tuple[int, int, int]]) -> GenusTwoCurve:
    return GenusTwoCurve(field, tuple(QuadFrac.of(field, *r) for r in rows))


# -- bundled example curves ----------------------------------------------
#
# Four genus-2 curves whose Jacobians carry quaternionic multiplication,
# each paired with the LMFDB label of the Bianchi newform its L-function
# matches, the rational primes expected under its conductor, and the inert
# prime used for the final twist-elimination step of the verification.

@dataclass(frozen=True)
class ExampleCurve:
    key: str
    curve: GenusTwoCurve
    newform_label: str
    quaternion_disc: int
    conductor_support: tuple[int, ...]
    conductor_norm: int
    twist_prime_p: int           # rational prime, inert in the field


def _k(d):
    return FIELDS[d]


EXAMPLES: dict[str, ExampleCurve] = {
    "c1": ExampleCurve(
        "c1",
        curve(_k(1), [(1, 0, 1), (0, 4, 1), (-6, -2, 1), (7, -1, 1),
                      (-9, 8, 1), (0, -10, 1), (3, 4, 1)]),
        "2.0.4.1-34225.3-a", 6, (5, 37), 34225, 11),
    "c2": ExampleCurve(
        "c2",
        curve(_k(3), [(1, 0, 1), (-8, -4, 1), (20, 20, 1), (-24, -16, 1),
                      (20, -8, 1), (4, -32, 1), (20, -8, 1)]),
        "2.0.3.1-61009.1-a", 10, (13, 19), 61009, 5),
    "c3": ExampleCurve(
        "c3",
        curve(_k(3), [(-179, 208, 1), (0, 0, 1), (-72, 1056, 1),
                      (544, 1000, 1), (3744, -2076, 1), (1500, -2316, 1),
                      (-1188, -1224, 1)]),
        "2.0.3.1-67081.3-a", 10, (7, 37), 67081, 5),
    "c4": ExampleCurve(
        "c4",
        curve(_k(3), [(1, 0, 1), (2, -4, 1), (-5, 4, 1), (56, -4, 3),
                      (23, -40, 1), (-22, -16, 1), (-15, 8, 1)]),
        "2.0.3.1-123201.1-b", 6, (3, 13), 123201, 5),
}
