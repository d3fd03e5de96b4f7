import json
import shutil
import subprocess

import pytest

from selmer_euler.cli import main

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_pair_text(capsys):
    code, out, _ = run(capsys, "analyze-pair", "66a1", "462d1", "--p", "5")
    assert code == 0 and "CONSISTENT" in out and "Sigma_1 = {7}" in out


def test_analyze_pair_qi_json(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "analyze-pair", "38a1", "114b1", "--p", "5", "--field", "Qi",
                       "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    data = json.loads(target.read_text())
    assert data["pair"]["sigma_ss"] == ["2+i", "2-i"] and data["exit_code"] == 0

    code, out, _ = run(capsys, "report", str(target))
    assert code == 0 and "smaller rank side divisible by p" in out


def test_not_congruent_exit_code(capsys):
    code, out, _ = run(capsys, "analyze-pair", "11a1", "37a1", "--p", "7")
    assert code == 3 and "NOT p-CONGRUENT" in out


def test_local_data(capsys):
    code, out, _ = run(capsys, "local-data", "38a1", "--prime", "19", "--field", "Qi")
    assert code == 0 and "Nv=361" in out and "360/361" in out
    code, out, _ = run(capsys, "local-data", "38a1", "--prime", "2", "--field", "Qi", "--format", "json")
    assert json.loads(out)[0]["needs_review"] is True


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", str(DATA / "curves.txt"), "--p", "5", "--bound", "200")
    assert code == 0 and "66a1 462d1" in out


@pytest.mark.parametrize("argv", [
    ["analyze-pair", "66a1", "462d1", "--p", "2"],
    ["analyze-pair", "66a1", "nope", "--p", "5"],
    ["analyze-pair", "66a1"],
    ["scan", "/nonexistent/curves.txt", "--p", "5"],
    ["frobnicate"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and "error" in err


def test_bad_record_file_reports_line(capsys, tmp_path):
    db = tmp_path / "bad.txt"
    db.write_text("label=a a1=0 a2=0 a3=0 a4=0 a6=1\nlabel=b a1=0 a2=0 a3=0 a4=0\n")
    code, _, err = run(capsys, "--db", str(db), "local-data", "a", "--prime", "3")
    assert code == 1 and "line 2" in err and "a6" in err


@pytest.mark.skipif(shutil.which("selmer-euler") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["selmer-euler", "--no-cache", "analyze-pair", "66a1", "462d1", "--p", "5"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "CONSISTENT" in res.stdout
