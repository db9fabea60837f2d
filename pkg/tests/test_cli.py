import json
import subprocess
import sys
from pathlib import Path

import pytest

from repvar import __version__
from repvar.cli import main

HERE = Path(__file__).resolve().parent
FIX = HERE / "data"
QA = HERE.parent / "src" / "repvar" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_validate_butterfly(capsys):
    code, r = report(capsys, "validate", QA / "butterfly.qa")
    assert code == 0 and r["result"]["valid"]
    assert r["version"] == __version__
    assert len(r["inputs"]["file"]["sha256"]) == 64


def test_validate_malformed_has_location(capsys):
    code, r = report(capsys, "validate", FIX / "malformed.qa")
    assert code == 2
    assert r["error"]["message"].startswith("line 4")
    assert r["inputs"]["file"]["sha256"]


def test_validate_relation_violation(capsys):
    code, r = report(capsys, "validate", FIX / "lambda3_nongeneric.rep.json")
    assert code == 3
    assert r["result"]["violated_relations"] == ["b b a"]


@pytest.mark.parametrize("name,expected", [
    ("lambda3.qa", {"triangular": False, "connected": True, "dim": 6}),
    ("butterfly.qa", {"string": True, "triangular": True}),
    ("a2.qa", {"dim": 3}),
])
def test_analyze(capsys, name, expected):
    code, r = report(capsys, "analyze", QA / name)
    assert code == 0
    assert {k: r["result"][k] for k in expected} == expected


def test_lambda_decompose(capsys):
    code, r = report(capsys, "lambda", "decompose", "--n", 5, "--d1", 2, "--d2", 7, "--type", "5,2", "--seed", 7)
    assert code == 0
    res = r["result"]
    assert [s["label"] for s in res["summands"]] == ["(2,J2+J5)"]
    assert res["orbit_dim"] == res["stratum_dim"]
    code, r = report(capsys, "lambda", "decompose", "--n", 5, "--d1", 1, "--d2", 5, "--type", 5)
    assert [s["kind"] for s in r["result"]["summands"]] == ["D1m"]
    code, r = report(capsys, "lambda", "decompose", "--n", 5, "--d1", 3, "--d2", 0)
    assert [s["kind"] for s in r["result"]["summands"]] == ["S1"] * 3


def test_lambda_decompose_bad_type(capsys):
    code, _ = run(capsys, "lambda", "decompose", "--n", 3, "--d1", 1, "--d2", 4, "--type", "4")
    assert code == 3


def test_lambda_sweep_small(capsys):
    code, r = report(capsys, "lambda", "sweep", "--n", 4, "--max-total", 4, "--seeds", 2)
    assert code == 0
    res = r["result"]
    assert res["all_dense"] and res["all_seed_independent"] and res["all_dims_sum_ok"]
    assert res["strata"] == len(res["table"])


def test_lambda_table(capsys):
    code, r = report(capsys, "lambda", "table", "--n", 4)
    assert code == 0 and r["result"]["all_local"]


def test_mf_check(capsys):
    code, r = report(capsys, "mf-check", QA / "butterfly.qa")
    assert code == 0 and r["result"]["is_mf"] is True
    code, r = report(capsys, "mf-check", QA / "kronecker.qa")
    assert code == 0 and r["result"]["is_mf"] is False


def test_mf_check_non_string(capsys):
    code, _ = run(capsys, "mf-check", QA / "lambda3.qa")
    assert code == 3


def test_bands_export(capsys, tmp_path):
    code, r = report(capsys, "bands", QA / "butterfly.qa", "--max-len", 12, "--export", tmp_path)
    assert code == 0 and r["result"]["count"] == 1
    exported = tmp_path / r["result"]["bands"][0]["exported"]
    code, v = report(capsys, "validate", exported)
    assert code == 0 and v["result"]["dims"] == [1, 1, 2, 1, 1]


def test_stability_canonical(capsys):
    code, r = report(capsys, "stability", FIX / "kronecker_band.rep.json", "--canonical")
    assert code == 0
    assert r["result"]["status"] == "stable" and r["result"]["theta"] == [1, -1]


def test_stability_prime_disagreement_escalates(capsys):
    code, r = report(capsys, "stability", FIX / "a2_mod101.rep.json", "--theta", "1,-1")
    assert code == 5
    assert r["result"]["primes_agree"] is False and r["warnings"]


def test_hom_ext(capsys):
    s1 = FIX / "a2_s1.rep.json"
    code, r = report(capsys, "hom", s1, s1)
    assert code == 0 and r["result"]["dim_hom"] == 1
    code, r = report(capsys, "ext", s1, s1)
    assert r["result"]["ext1_dim"] == 0


def test_schur_scan_and_nondistributive(capsys):
    code, r = report(capsys, "schur-scan", QA / "kronecker.qa", "--dim", "1,1", "--budget", 20)
    assert code == 0 and r["result"]["schur_classes_found"] >= 5
    code, r = report(capsys, "nondistributive", QA / "kronecker.qa", "--lambdas", "0..10")
    assert r["result"]["schur_classes"] == 11
    code, r = report(capsys, "nondistributive", QA / "butterfly.qa")
    assert r["result"]["applicable"] is False


def test_markdown_output(capsys):
    code, out = run(capsys, "analyze", QA / "a2.qa", "--md")
    assert code == 0 and out.startswith("# repvar analyze") and "```json" in out


@pytest.mark.parametrize("argv", [
    ["lambda", "decompose", "--n", "5", "--d1", "2", "--d2", "7", "--type", "5,2", "--seed", "7"],
    ["schur-scan", str(QA / "kronecker.qa"), "--dim", "1,2", "--budget", "10", "--seed", "4"],
    ["bands", str(QA / "kronecker.qa"), "--lambda", "3/2"],
])
def test_byte_identical_reports(capsys, argv):
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "repvar.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
