import json

import pytest

from qmsurf.cli import main
from qmsurf.curves import EXAMPLES


@pytest.fixture()
def c2_file(tmp_path):
    p = tmp_path / "c2.json"
    p.write_text(json.dumps(EXAMPLES["c2"].curve.to_dict()))
    return str(p)


@pytest.fixture()
def c4_file(tmp_path):
    p = tmp_path / "c4.json"
    p.write_text(json.dumps(EXAMPLES["c4"].curve.to_dict()))
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_group_theory_and_rcg(capsys):
    code, out = run(capsys, ["group-theory", "--ell", "2", "--precision", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["group_order"] == 12 and doc["local_model"]["ok"]

    code, out = run(capsys, ["rcg", "--field", "2.0.3.1",
                             "--modulus", "2^3,3+w,-5+2*w"])
    assert code == 0
    assert json.loads(out)["invariants"] == [2, 2, 12, 36]


def test_conic_points_deterministic(capsys):
    argv = ["conic", "points", "--field", "2.0.4.1", "--height", "2"]
    code1, out1 = run(capsys, argv)
    code2, out2 = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["count"] == len(doc["points"]) > 0


def test_family_commands(capsys, tmp_path):
    code, out = run(capsys, ["family", "curve", "--field", "2.0.3.1",
                             "--j", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["relation"] == "s^2 = -6*j"
    assert len(doc["coeffs_s"]) == 7

    c1 = tmp_path / "c1.json"
    c1.write_text(json.dumps(EXAMPLES["c1"].curve.to_dict()))
    code, out = run(capsys, ["family", "match", "--curve", str(c1)])
    assert code == 0
    assert json.loads(out)["j"] == [228, 704, 1369]


def test_family_match_rejects_non_member(capsys, c2_file):
    code, _ = run(capsys, ["family", "match", "--curve", c2_file])
    assert code == 1          # NotInFamily: a negative mathematical result


def test_analyze_schema_and_jobs_determinism(capsys, c2_file):
    argv = ["analyze", "--curve", c2_file, "--max-norm", "200",
            "--square-check-norm", "50"]
    code, out1 = run(capsys, argv)
    assert code == 0
    doc = json.loads(out1)
    assert set(doc) == {"curve", "field", "bound", "square_check_bound",
                        "version", "records", "bad"}
    assert all(rec["good"] for rec in doc["records"])
    assert any("n2" in rec for rec in doc["records"])
    bad_reasons = {entry["reason"] for entry in doc["bad"]}
    assert "residue characteristic 2" in bad_reasons

    code, out2 = run(capsys, argv[:-2] + ["--jobs", "2",
                                          "--square-check-norm", "50"])
    assert code == 0 and out2 == out1


def test_genuine_and_cycle_types(capsys, c2_file):
    code, out = run(capsys, ["genuine", "--curve", c2_file,
                             "--max-norm", "200"])
    assert code == 0
    assert json.loads(out)["verdict"] == "genuine-witnessed"

    code, out = run(capsys, ["cycle-types", "--curve", c2_file,
                             "--max-norm", "100"])
    assert code == 0
    hist = json.loads(out)["histogram"]
    assert set(hist) <= {"1,1,1,1,1,1", "1,1,2,2", "3,3"}


def test_livne_verify_exit_codes(capsys, tmp_path, c2_file):
    import importlib.resources
    fixtures = importlib.resources.files("qmsurf").joinpath("data/newforms")
    right = tmp_path / "right.json"
    right.write_text(fixtures.joinpath("2.0.3.1-61009.1-a.json").read_text())
    wrong = tmp_path / "wrong.json"
    wrong.write_text(fixtures.joinpath("2.0.3.1-67081.3-a.json").read_text())

    code, out = run(capsys, ["livne", "verify", "--curve", c2_file,
                             "--newform", str(right)])
    assert code == 0
    assert json.loads(out)["verdict"] == "verified-up-to-semisimplification"

    code, _ = run(capsys, ["livne", "verify", "--curve", c2_file,
                           "--newform", str(wrong)])
    assert code == 1

    code, _ = run(capsys, ["livne", "verify", "--curve", c2_file,
                           "--newform", str(right), "--max-norm", "100"])
    assert code == 2          # bound below the largest deciding norm


def test_verify_pipeline_exit_codes(capsys, tmp_path, c4_file):
    import importlib.resources
    fixtures = importlib.resources.files("qmsurf").joinpath("data/newforms")
    right = tmp_path / "form.json"
    right.write_text(fixtures.joinpath("2.0.3.1-123201.1-b.json").read_text())
    store = tmp_path / "results.jsonl"
    code, out = run(capsys, ["verify", "--curve", c4_file, "--newform",
                             str(right), "--square-check-norm", "0",
                             "--store", str(store)])
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "verified-up-to-semisimplification"
    assert doc["genuineness"]["verdict"] == "genuine-witnessed"
    assert doc["residual"]["verdict"] == "isomorphic-C3"
    lines = store.read_text().splitlines()
    assert len(lines) == 1
    entry = json.loads(lines[0])
    assert entry["verification"] == "verified-up-to-semisimplification"
    assert "timestamp" in entry


def test_malformed_curve_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(capsys, ["analyze", "--curve", str(bad)])
    assert code == 2
    missing = tmp_path / "nope.json"
    code, _ = run(capsys, ["genuine", "--curve", str(missing)])
    assert code == 2
    short = tmp_path / "short.json"
    short.write_text(json.dumps({"field": "2.0.3.1", "coeffs": [[1, 0, 1]]}))
    code, _ = run(capsys, ["analyze", "--curve", str(short)])
    assert code == 2


def test_search_exit_codes_and_filter(capsys):
    code, _ = run(capsys, ["search", "--field", "2.0.7.1", "--height", "2"])
    assert code == 2          # the field does not split the algebra

    code, out = run(capsys, ["search", "--field", "2.0.4.1", "--height", "2",
                             "--allow", "5,37,13"])
    assert code == 0
    doc = json.loads(out)
    for cand in doc["candidates"]:
        support_norms = {a * a + b * b for a, b in cand["j_support"]}
        assert support_norms <= {5, 37, 13, 25, 1369, 169}

    code, out = run(capsys, ["search", "--field", "2.0.4.1", "--height", "2"])
    assert code == 0
    for cand in json.loads(out)["candidates"]:
        assert cand["j_support"] == []     # only 6-unit j pass an empty filter


def test_newform_fetch_offline(capsys, tmp_path, monkeypatch):
    import importlib.resources
    fixtures = importlib.resources.files("qmsurf").joinpath("data/newforms")
    cache = tmp_path / "cache" / "2.0.3.1"
    cache.mkdir(parents=True)
    (cache / "2.0.3.1-61009.1-a.json").write_text(
        fixtures.joinpath("2.0.3.1-61009.1-a.json").read_text())
    code, out = run(capsys, ["newform", "fetch", "--label",
                             "2.0.3.1-61009.1-a", "--offline",
                             "--cache", str(tmp_path / "cache")])
    assert code == 0
    assert json.loads(out)["level_norm"] == 61009

    code, _ = run(capsys, ["newform", "fetch", "--label", "2.0.3.1-1.1-a",
                           "--offline", "--cache", str(tmp_path / "cache")])
    assert code == 2


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out = run(capsys, ["group-theory", "--ell", "3",
                             "--out", str(target)])
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["group_order"] == 72
