"""Bianchi newform eigenvalue tables: data model, file schema, and an
optional remote fetch with an on-disk cache.

The exchange format keys eigenvalues by explicit prime generators in the
a + b*w integral basis, never by a labeling convention:

    {"label": "2.0.3.1-61009.1-a", "field": "2.0.3.1", "level_norm": 61009,
     "level": [[genA, genB, exp], ...], "ap": [[genA, genB, value], ...],
     "flags": {"genuine": true}}

Generators are re-normalized on parse, so any unit multiple of a prime's
generator selects the same entry.
"""

from __future__ import annotations

import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass, field as dc_field

from .errors import (ConversionError, DuplicatePrime, FieldMismatch,
                     HeckeBoundViolation, NetworkError, NotFound, SchemaError,
                     UnknownField)
from .quadfield import (PrimeIdeal, QuadElement, QuadField,
                        field_by_label, prime_from_generator)

DEFAULT_ENDPOINT_ENV = "QMSURF_NEWFORM_ENDPOINT"


@dataclass(frozen=True)
class NewformRecord:
    label: str
    field: QuadField
    level_norm: int
    level: tuple[tuple[PrimeIdeal, int], ...]
    ap: dict                    # (a, b) normalized generator pair -> int
    flags: dict = dc_field(default_factory=dict)

    def eigenvalue(self, P: PrimeIdeal) -> int | None:
        if P.field != self.field:
            raise FieldMismatch(
                f"prime of {P.field.label} against form over {self.field.label}")
        return self.ap.get((P.gen.a, P.gen.b))

    def level_primes(self) -> list[PrimeIdeal]:
        return [P for P, _ in self.level]

    def to_dict(self) -> dict:
        level = sorted(self.level, key=lambda t: t[0].sort_key())
        ap = sorted(self.ap.items())
        doc = {
            "label": self.label,
            "field": self.field.label,
            "level_norm": self.level_norm,
            "level": [[P.gen.a, P.gen.b, e] for P, e in level],
            "ap": [[a, b, v] for (a, b), v in ap],
        }
        if self.flags:
            doc["flags"] = dict(sorted(self.flags.items()))
        return doc


def parse_newform(doc: dict) -> NewformRecord:
    if not isinstance(doc, dict):
        raise SchemaError("newform document must be a JSON object")
    try:
        label = str(doc["label"])
        field = field_by_label(str(doc["field"]))
        level_norm = int(doc["level_norm"])
        level_raw = doc["level"]
        ap_raw = doc["ap"]
    except UnknownField:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed newform document: {exc}") from exc
    flags = doc.get("flags", {})
    if not isinstance(flags, dict):
        raise SchemaError("flags must be an object")

    level = []
    check_norm = 1
    for entry in level_raw:
        P, extra = _prime_entry(field, entry, "level")
        if extra < 1:
            raise SchemaError(f"level exponent must be >= 1: {entry!r}")
        level.append((P, extra))
        check_norm *= P.norm() ** extra
    if check_norm != level_norm:
        raise SchemaError(
            f"level norm {level_norm} != product of level primes {check_norm}")
    level_set = {P for P, _ in level}

    ap: dict = {}
    for entry in ap_raw:
        P, value = _prime_entry(field, entry, "ap")
        key = (P.gen.a, P.gen.b)
        if key in ap:
            raise DuplicatePrime(f"duplicate eigenvalue for ({P.gen})")
        if P not in level_set and value * value > 4 * P.norm():
            raise HeckeBoundViolation(
                f"|a_P| = {abs(value)} exceeds 2 sqrt({P.norm()}) at ({P.gen})")
        ap[key] = value
    return NewformRecord(label, field, level_norm, tuple(level), ap, dict(flags))


def _prime_entry(field: QuadField, entry, kind: str):
    if not (isinstance(entry, list) and len(entry) == 3):
        raise SchemaError(f"bad {kind} entry {entry!r}: want [a, b, n]")
    a, b, n = (int(v) for v in entry)
    try:
        P = prime_from_generator(field, QuadElement(a, b, field))
    except ValueError as exc:
        raise SchemaError(f"{kind} entry {entry!r}: {exc}") from exc
    return P, n


def parse_newform_file(source) -> NewformRecord:
    """Parse a path, bytes, or str containing a newform document."""
    if isinstance(source, (bytes, str)) and not _looks_like_path(source):
        text = source.decode() if isinstance(source, bytes) else source
    else:
        try:
            with open(source, "rb") as fh:
                text = fh.read().decode()
        except OSError as exc:
            raise SchemaError(f"cannot read newform file {source}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return parse_newform(doc)


def _looks_like_path(source) -> bool:
    if isinstance(source, bytes):
        return False
    stripped = source.lstrip()
    return not stripped.startswith("{")


def serialize_newform(record: NewformRecord) -> str:
    return json.dumps(record.to_dict(), sort_keys=True, separators=(",", ":"))


# -- remote fetch -----------------------------------------------------------------

def _cache_path(cache_dir: str, label: str) -> str:
    field_label = label.split("-")[0]
    return os.path.join(cache_dir, field_label, f"{label}.json")


def fetch_newform(label: str, endpoint: str | None = None,
                  cache_dir: str = "cache", offline: bool = False,
                  timeout: float = 30.0) -> NewformRecord:
    """Fetch by label with an on-disk cache; offline mode reads cache only.

    The endpoint (or the QMSURF_NEWFORM_ENDPOINT environment variable) must
    serve documents in the schema above at <endpoint>/<field>/<label>.json.
    """
    path = _cache_path(cache_dir, label)
    if os.path.exists(path):
        return parse_newform_file(path)
    if offline:
        raise NotFound(f"{label} not in cache {cache_dir} and offline mode is on")
    endpoint = endpoint or os.environ.get(DEFAULT_ENDPOINT_ENV)
    if not endpoint:
        raise NetworkError("no endpoint configured; set "
                           f"{DEFAULT_ENDPOINT_ENV} or pass --endpoint")
    url = f"{endpoint.rstrip('/')}/{label.split('-')[0]}/{label}.json"
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = resp.read()
    except urllib.error.HTTPError as exc:
        if exc.code == 404:
            raise NotFound(f"{label} not found at {endpoint}") from exc
        raise NetworkError(f"HTTP {exc.code} fetching {url}") from exc
    except (urllib.error.URLError, OSError) as exc:
        raise NetworkError(f"cannot reach {url}: {exc}") from exc
    try:
        record = parse_newform_file(payload)
    except SchemaError as exc:
        raise ConversionError(f"payload for {label} is not a valid "
                              f"newform document: {exc}") from exc
    if record.label != label:
        raise ConversionError(
            f"endpoint returned label {record.label!r}, wanted {label!r}")
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(serialize_newform(record))
    os.replace(tmp, path)
    return record
