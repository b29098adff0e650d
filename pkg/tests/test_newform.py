import json

import pytest

from qmsurf.cli import bundled_newform
from qmsurf.curves import EXAMPLES
from qmsurf.errors import (DuplicatePrime, FieldMismatch,
                           HeckeBoundViolation, NetworkError, NotFound,
                           SchemaError, UnknownField)
from qmsurf.newform import (fetch_newform, parse_newform, parse_newform_file,
                            serialize_newform)
from qmsurf.quadfield import FIELDS, prime_from_generator, split_prime

K3 = FIELDS[3]

MINIMAL = {
    "label": "2.0.3.1-test-a",
    "field": "2.0.3.1",
    "level_norm": 13,
    "level": [[3, 1, 1]],
    "ap": [[2, 0, -2], [-5, 2, 3], [2, 1, -1]],
}


def test_minimal_document():
    rec = parse_newform(MINIMAL)
    assert len(rec.ap) == 3
    assert rec.level_norm == 13
    P7 = prime_from_generator(K3, K3.element(2, 1))
    assert rec.eigenvalue(P7) == -1
    assert rec.eigenvalue(split_prime(K3, 11)[0]) is None


def test_hecke_bound_violation():
    doc = dict(MINIMAL)
    doc["ap"] = [[3, 1, 100]]        # norm-13 prime but a = 100 > 2 sqrt(13)
    doc["level"] = []
    doc["level_norm"] = 1
    with pytest.raises(HeckeBoundViolation):
        parse_newform(doc)


def test_level_primes_exempt_from_hecke_bound():
    doc = dict(MINIMAL)
    doc["level"] = [[3, 1, 1]]
    doc["level_norm"] = 13
    doc["ap"] = [[3, 1, 9]]          # 9 > 2 sqrt(13) but (3+w) divides the level
    rec = parse_newform(doc)
    assert rec.eigenvalue(prime_from_generator(K3, K3.element(3, 1))) == 9


def test_schema_errors():
    with pytest.raises(SchemaError):
        parse_newform({"label": "x"})
    with pytest.raises(UnknownField):
        parse_newform(dict(MINIMAL, field="2.0.5.1"))
    with pytest.raises(SchemaError):
        parse_newform(dict(MINIMAL, level_norm=14))    # wrong product
    with pytest.raises(SchemaError):
        parse_newform(dict(MINIMAL, ap=[[6, 0, 1]]))   # composite generator
    with pytest.raises(DuplicatePrime):
        # the same prime through two unit-multiple generators: w*(2+w) = -1+3w
        parse_newform(dict(MINIMAL, ap=[[2, 1, -1], [-1, 3, -1]]))


def test_unit_multiple_generators_normalize():
    g = K3.element(2, 1)
    unit = K3.units()[1]
    scaled = unit * g
    doc = dict(MINIMAL, ap=[[scaled.a, scaled.b, -1]])
    rec = parse_newform(doc)
    assert rec.eigenvalue(prime_from_generator(K3, g)) == -1


def test_conjugates_are_independent():
    form = bundled_newform(EXAMPLES["c2"].newform_label)
    pair = split_prime(K3, 31)
    values = {form.eigenvalue(P) for P in pair}
    assert values == {-1, 9}          # no symmetrization for a genuine form


def test_field_mismatch():
    form = bundled_newform(EXAMPLES["c2"].newform_label)
    with pytest.raises(FieldMismatch):
        form.eigenvalue(split_prime(FIELDS[1], 13)[0])


def test_bundled_fixture_level_data():
    form = bundled_newform("2.0.3.1-61009.1-a")
    assert form.level_norm == 61009 == (13 * 19) ** 2
    assert form.flags.get("genuine") is True
    assert {P.p for P in form.level_primes()} == {13, 19}


def test_parse_serialize_round_trip():
    for ex in EXAMPLES.values():
        rec = bundled_newform(ex.newform_label)
        again = parse_newform_file(serialize_newform(rec))
        assert again == rec
        assert serialize_newform(again) == serialize_newform(rec)


def test_fetch_cache_and_offline(tmp_path):
    rec = parse_newform(MINIMAL)
    cache = tmp_path / "cache"
    path = cache / "2.0.3.1" / "2.0.3.1-test-a.json"
    path.parent.mkdir(parents=True)
    path.write_text(serialize_newform(rec))
    got = fetch_newform("2.0.3.1-test-a", cache_dir=str(cache), offline=True)
    assert got == rec
    with pytest.raises(NotFound):
        fetch_newform("2.0.3.1-other-a", cache_dir=str(cache), offline=True)
    with pytest.raises(NetworkError):
        # online but no endpoint configured
        fetch_newform("2.0.3.1-other-a", cache_dir=str(cache), offline=False)


def test_parse_file_inputs(tmp_path):
    text = json.dumps(MINIMAL)
    assert parse_newform_file(text).label == MINIMAL["label"]
    assert parse_newform_file(text.encode()).label == MINIMAL["label"]
    p = tmp_path / "form.json"
    p.write_text(text)
    assert parse_newform_file(str(p)).label == MINIMAL["label"]
    with pytest.raises(SchemaError):
        parse_newform_file(str(tmp_path / "missing.json"))
