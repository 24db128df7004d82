import json
import shutil
import subprocess
import sys

import pytest

from desingular.cli import main
from desingular.parsing import dumps, parse_matrix


@pytest.fixture
def files(tmp_path, data_dir):
    for name in ("example1", "rank_example", "blocked"):
        shutil.copy(data_dir / f"{name}.json", tmp_path / f"{name}.json")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def M(*rows):
    return parse_matrix([list(r) for r in rows])


def test_dispersion(files, capsys):
    assert run(capsys, "dispersion", files / "example1.json", "--pole", "z-2") == (0, "3\n", "")


def test_pole_is_normalized(files, capsys):
    code, out, _ = run(capsys, "dispersion", files / "example1.json", "--pole", "2*z-4")
    assert (code, out) == (0, "3\n")


def test_desingularize_writes_certificate(files, capsys):
    cert = files / "cert.json"
    code, out, err = run(
        capsys, "desingularize", files / "example1.json", "--pole", "z-2", "--algorithm", "A", "--out", cert
    )
    assert code == 0 and err == ""
    assert "fully-desingularized" in out
    doc = json.loads(cert.read_text())
    assert parse_matrix(doc["transformation"]) == M(("z^3-3*z^2+2*z", "1/2"), ("0", "1"))
    assert parse_matrix(doc["transformed"]) == M(("1", "0"), ("-2*z^3+2*z", "2"))
    assert [f["kind"] for f in doc["trail"]] == ["S", "D", "D", "D"]
    assert run(capsys, "verify", files / "example1.json", cert) == (0, "ok\n", "")


def test_desingularize_to_stdout(files, capsys):
    code, out, _ = run(capsys, "desingularize", files / "example1.json", "--algorithm", "B")
    assert code == 0
    doc = json.loads(out)
    assert parse_matrix(doc["transformation"]) == M(("1/2*z^3-3/2*z^2+z", "1/2"), ("0", "1"))
    assert doc["report"]["status"] == "fully-desingularized"


def test_json_report_is_stable(files, capsys):
    code, out, _ = run(
        capsys, "desingularize", files / "example1.json", "--out", files / "c.json", "--json"
    )
    assert code == 0
    assert dumps(json.loads(out)) == out
    assert json.loads(out)["achieved"] == [
        {"modulus": "z - 2", "old_order": -1, "new_order": 0, "old_rank": 1, "new_rank": 2}
    ]


def test_tampered_certificate(files, capsys):
    cert = files / "cert.json"
    run(capsys, "desingularize", files / "example1.json", "--pole", "z-2", "--out", cert)
    doc = json.loads(cert.read_text())
    doc["transformation"][0][1] = "1/3"
    tampered = files / "tampered.json"
    tampered.write_text(json.dumps(doc))
    code, out, err = run(capsys, "verify", files / "example1.json", tampered)
    assert code == 1
    assert out == "fail: gauge-mismatch\n"
    assert err.startswith("gauge-mismatch:")


def test_false_claim_in_report(files, capsys):
    cert = files / "cert.json"
    run(capsys, "desingularize", files / "example1.json", "--out", cert)
    doc = json.loads(cert.read_text())
    doc["report"]["achieved"][0]["new_order"] = 3
    cert.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", files / "example1.json", cert)
    assert (code, out) == (1, "fail: order-claim\n")


def test_blocked_pole_exits_one(files, capsys):
    code, out, err = run(capsys, "desingularize", files / "blocked.json", "--pole", "z")
    assert code == 1
    doc = json.loads(out)
    assert doc["report"]["status"] == "not-desingularizable"
    assert doc["report"]["blocking"] == "z + 1"
    assert "blocked at z + 1" in err


def test_rank_reduce(files, capsys):
    cert = files / "rank.json"
    code, out, _ = run(capsys, "rank-reduce", files / "rank_example.json", "--pole", "z", "--out", cert)
    assert code == 0
    assert "leading rank 2 -> 1" in out
    doc = json.loads(cert.read_text())
    assert parse_matrix(doc["transformed"]) == M(("z^2", "0", "0"), ("0", "1", "0"), ("0", "0", "1/z"))
    assert doc["report"]["status"] == "rank-reduced"
    assert run(capsys, "verify", files / "rank_example.json", cert)[0] == 0


def test_rank_reduce_bound(files, capsys, monkeypatch):
    code, _, err = run(capsys, "rank-reduce", files / "rank_example.json", "--pole", "z", "--max-k", "0")
    assert code == 2 and "max-k" in err
    monkeypatch.setenv("DESING_MAX_K", "1")
    # the rank example needs k = 1 only, so the tight bound still succeeds
    assert run(capsys, "rank-reduce", files / "rank_example.json", "--pole", "z")[0] == 0


def test_adjoint(files, capsys):
    code, out, _ = run(capsys, "adjoint", files / "example1.json")
    assert code == 0
    doc = json.loads(out)
    assert doc["direction"] == "backward"
    assert parse_matrix(doc["matrix"]) == M(("3*(z-2)/(2*z)", "(3-z)/(2*z)"), ("1", "0"))


def test_analyze_text(files, capsys):
    code, out, _ = run(capsys, "analyze", files / "blocked.json")
    assert code == 0
    assert "r-poles: 2" in out
    assert "z + 1 (root -1): multiplicity 1, minimal yes, dispersion 0" in out
    assert "not-removable" in out


def test_analyze_json(files, capsys):
    code, out, _ = run(capsys, "analyze", files / "example1.json", "--json")
    assert code == 0
    assert dumps(json.loads(out)) == out
    doc = json.loads(out)
    (pole,) = doc["r_poles"]
    assert (pole["factor"], pole["roots"], pole["dispersion"]) == ("z - 2", ["2"], 3)
    assert pole["classification"] == "apparent-class"
    assert [p["factor"] for p in doc["l_poles"]] == ["z"]


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["dispersion", "example1.json"],
        ["desingularize", "example1.json", "--algorithm", "C"],
        ["dispersion", "missing.json", "--pole", "z"],
        ["dispersion", "example1.json", "--pole", "z^^2"],
        ["dispersion", "example1.json", "--pole", "7"],
    ],
)
def test_usage_errors(files, capsys, monkeypatch, argv):
    monkeypatch.chdir(files)
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_parse_error_reports_position(files, capsys):
    bad = files / "bad.json"
    bad.write_text(json.dumps({"matrix": [["z +* 1"]]}))
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2
    assert "position 4" in err


@pytest.mark.parametrize("name", ["example1", "rank_example", "blocked"])
@pytest.mark.parametrize("algorithm", ["A", "B"])
@pytest.mark.parametrize("side", ["r", "l"])
def test_every_emitted_certificate_verifies(files, capsys, name, algorithm, side):
    cert = files / f"{name}-{algorithm}-{side}.json"
    code, _, _ = run(
        capsys, "desingularize", files / f"{name}.json", "--algorithm", algorithm, "--side", side, "--out", cert
    )
    assert code in (0, 1)
    assert run(capsys, "verify", files / f"{name}.json", cert)[:2] == (0, "ok\n")


def test_module_entry_point(files):
    result = subprocess.run(
        [sys.executable, "-m", "desingular", "dispersion", str(files / "example1.json"), "--pole", "z-2"],
        capture_output=True,
        text=True,
    )
    assert (result.returncode, result.stdout) == (0, "3\n")
