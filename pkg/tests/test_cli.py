import json
import subprocess
import sys

import pytest

from kbundle.cli import main


FIVE_QUADRICS = "X^2 - Y^2, X^2 - Z^2, X*Y, X*Z, Y*Z"
DUAL_JOB = {
    "ring": {"variables": ["X", "Y", "Z"], "field": "qq", "order": "degrevlex"},
    "object": {"kernel": {
        "twists_a": [3, 3, 3, 3, 3, 3],
        "twists_b": [4, 4],
        "matrix": [["X", "-Y", "-Y", "0", "-Z", "0"],
                   ["0", "0", "X", "-Y", "0", "Z"]],
    }},
    "task": {"name": "check", "options": {"engine": "both"}},
}


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_five_quadrics_via_pullback(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli([
        "check", "--syzygy", FIVE_QUADRICS, "--upgrade", "selfdual",
        "--via-pullback", "2", "--json-out", str(out_path)], capsys)
    assert code == 0
    assert "verdict: semistable" in out
    assert "proven_via_selfduality" in out
    report = json.loads(out_path.read_text())
    assert report["results"]["report"]["stability"] == "proven_via_selfduality"
    assert report["results"]["pullback"]["report"]["stability"] == \
        "proven_via_selfduality"


def test_sections_exterior_on_dual_bundle(capsys):
    code, out, _ = run_cli([
        "sections", "--matrix", "X, -Y, -Y, 0, -Z, 0; 0, 0, X, -Y, 0, Z",
        "--twists-a", "3,3,3,3,3,3", "--twists-b", "4,4",
        "--kind", "exterior", "--q", "2", "--twists=-6..-4"], capsys)
    assert code == 0
    assert "k = -6: 0" in out
    lines = {l.strip() for l in out.splitlines()}
    nonzero_at_minus5 = [l for l in lines if l.startswith("k = -5:")]
    assert nonzero_at_minus5 and not nonzero_at_minus5[0].endswith(" 0")


def test_malformed_polynomial_exits_1(capsys):
    code, _, err = run_cli(["check", "--syzygy", "X^2 +* Y"], capsys)
    assert code == 1
    assert "input error" in err


def test_unknown_variable_exits_1(capsys):
    code, _, err = run_cli(["check", "--syzygy", "X^2, W^2, Z^2"], capsys)
    assert code == 1
    assert "W" in err


def test_resource_cap_exits_2(capsys):
    code, _, err = run_cli([
        "check", "--syzygy", FIVE_QUADRICS, "--engine", "gb",
        "--max-pairs", "1"], capsys)
    assert code == 2
    assert "indeterminate" in err


def test_validate_surjectivity(capsys):
    code, out, _ = run_cli([
        "validate", "--syzygy", FIVE_QUADRICS, "--check-surjectivity"], capsys)
    assert code == 0
    assert "surjective" in out


def test_validate_bad_bundle_exits_1(capsys):
    code, out, _ = run_cli([
        "validate", "--matrix", "X, Y^2, Z", "--twists-a=-1,-1,-1",
        "--twists-b", "0"], capsys)
    assert code == 1
    assert "degree-mismatch" in out


def test_restrict_langer_quartics(capsys):
    code, out, _ = run_cli([
        "restrict", "--syzygy",
        "X^4 - Y^4, X^4 - Z^4, X^2*Y^2, X^2*Z^2, Y^2*Z^2",
        "--theorem", "langer", "--assume-stability", "stable"], capsys)
    assert code == 0
    assert "k_min = 61" in out


def test_closure_five_quadrics(capsys):
    code, out, _ = run_cli([
        "closure", "--ideal", FIVE_QUADRICS], capsys)
    assert code == 0
    assert "tau = 5/2" in out
    assert "m >= 3" in out


def test_closure_frobenius(capsys):
    code, out, _ = run_cli([
        "closure", "--field", "fp:7", "--ideal", "X^2, Y^2, Z^2",
        "--candidate", "X*Y", "--genus", "0",
        "--strong-flag", "elliptic-curve"], capsys)
    assert code == 0
    assert "membership: False" in out


def test_tannaka_rank2(capsys):
    code, out, _ = run_cli([
        "tannaka", "--syzygy", "X^2, Y^2, Z^2", "--twist", "3",
        "--q-max", "2", "--method", "exact"], capsys)
    assert code == 0
    assert "dual group: SL(2)" in out


def test_job_file_roundtrip_and_determinism(tmp_path, capsys):
    job_path = tmp_path / "job.json"
    job_path.write_text(json.dumps(DUAL_JOB))
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    code1, _, _ = run_cli(["run", str(job_path), "--json-out", str(out1)], capsys)
    code2, _, _ = run_cli(["run", str(job_path), "--json-out", str(out2)], capsys)
    assert code1 == code2 == 0
    r1 = json.loads(out1.read_text())
    r2 = json.loads(out2.read_text())
    r1.pop("timing")
    r2.pop("timing")
    assert r1 == r2
    # byte-identical modulo the timing field
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
    # verdict fields survive the round trip
    assert r1["results"]["report"]["verdict"] == "semistable"
    assert r1["results"]["report"]["per_power"][1]["alpha"] == -5


def test_job_file_missing_block(tmp_path, capsys):
    job_path = tmp_path / "bad.json"
    job_path.write_text(json.dumps({"ring": {"variables": ["X", "Y", "Z"]}}))
    code, _, err = run_cli(["run", str(job_path)], capsys)
    assert code == 1
    assert "missing" in err


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kbundle.cli", "check", "--syzygy",
         "X^2, Y^2, Z^2", "--twist", "3"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "proven_stable" in proc.stdout
