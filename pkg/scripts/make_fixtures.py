"""Regenerate the bundled newform fixtures in src/qmsurf/data/newforms/.

Eigenvalues at countable good primes come from point counts on the bundled
curves (a_P = (q + 1 - n1)/2, validated against the published record at
every small prime in tests/test_counting.py).  Entries at primes the model
cannot count (residue characteristic 2, level primes, the handful of
model-bad-but-surface-good primes) are copied from the published tables
for the four LMFDB records.

Run from the repository root:  python scripts/make_fixtures.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qmsurf.counting import trace_table
from qmsurf.curves import EXAMPLES
from qmsurf.newform import parse_newform, serialize_newform
from qmsurf.quadfield import parse_element

FIXTURE_BOUND = 3100

# level primes (generator literal, exponent) and the published eigenvalues at
# primes where the bundled model has no usable reduction
LEVELS = {
    "c1": [("2+w", 2), ("-6+w", 2)],
    "c2": [("3+w", 2), ("-5+2*w", 2)],
    "c3": [("2+w", 2), ("4+3*w", 2)],
    "c4": [("1+w", 6), ("3+w", 2)],
}
EXTRA_AP = {
    "c1": [("1+w", -2), ("2+w", 0), ("-6+w", 0)],
    "c2": [("2", -2), ("1+w", -2), ("3+w", 0), ("-5+2*w", 0)],
    "c3": [("2", -2), ("1+w", -2), ("2+w", 0), ("4+3*w", 0)],
    "c4": [("2", 0), ("1+w", 0), ("3+w", 0)],
}


def build(key):
    ex = EXAMPLES[key]
    K = ex.curve.field
    table = trace_table(ex.curve, bound=FIXTURE_BOUND, square_check_bound=0)
    ap = [[rec.prime.gen.a, rec.prime.gen.b, rec.a] for rec in table.records]
    known = {(rec.prime.gen.a, rec.prime.gen.b) for rec in table.records}
    for lit, value in EXTRA_AP[key]:
        g = parse_element(lit, K).as_element()
        assert (g.a, g.b) not in known, f"{key}: {lit} already counted"
        ap.append([g.a, g.b, value])
    level = []
    for lit, exp in LEVELS[key]:
        g = parse_element(lit, K).as_element()
        level.append([g.a, g.b, exp])
    doc = {
        "label": ex.newform_label,
        "field": K.label,
        "level_norm": ex.conductor_norm,
        "level": level,
        "ap": ap,
        "flags": {"genuine": True},
    }
    record = parse_newform(doc)          # validates schema + Hecke bounds
    return record


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..",
                           "src", "qmsurf", "data", "newforms")
    os.makedirs(out_dir, exist_ok=True)
    for key in sorted(EXAMPLES):
        record = build(key)
        path = os.path.join(out_dir, f"{record.label}.json")
        with open(path, "w") as fh:
            fh.write(serialize_newform(record))
            fh.write("\n")
        print(f"{key}: wrote {path} with {len(record.ap)} eigenvalues, "
              f"level norm {record.level_norm}")


if __name__ == "__main__":
    main()
