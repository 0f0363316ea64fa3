import json
import subprocess
import sys

import pytest

from kwfeynman.cli import main


def run(args):
    proc = subprocess.run([sys.executable, "-m", "kwfeynman", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_gd_prints_second_polynomial(capsys):
    assert main(["gd", "--n", "2"]) == 0
    assert "R_2 = 1/2*u^2 + 1/12*u''" in capsys.readouterr().out


def test_kmi_passes_for_three_holes(capsys):
    assert main(["kmi", "--g", "0", "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert out.count("1/(lambda1*lambda2*lambda3)") == 2 and out.rstrip().endswith("PASS")


def test_prove_equation_I_trace(capsys):
    assert main(["prove", "--equation", "I", "--trace"]) == 0
    out = capsys.readouterr().out
    assert "ungraft" in out and "normal form: 0" in out


def test_prove_with_wrong_signs_fails(capsys):
    assert main(["prove", "--equation", "II", "--t1-sign", "-1"]) == 1
    assert capsys.readouterr().out.rstrip().endswith("FAIL")


@pytest.mark.parametrize("args", [
    ["kmi", "--g", "0", "--n", "9"],
    ["oracle", "--equation", "I", "--vmax", "4"],
    ["miwa-check", "--spectrum", "1,2,3,4"],
    ["miwa-check", "--spectrum", "0,1"],
    ["no-such-command"],
])
def test_usage_errors_exit_with_two(args):
    assert main(args) == 2


def test_json_uses_rational_strings(capsys):
    assert main(["--format", "json", "miwa-check", "--spectrum", "1,2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema_version"] == 1 and doc["status"] == "PASS"
    assert doc["checks"][0] == {"k": -1, "i": 0, "lhs": "9/8", "rhs": "9/8"}


def test_oracle_json_buckets(capsys):
    assert main(["--format", "json", "oracle", "--equation", "I", "--vmax", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["residual_by_degree"] == {"-2/1": "0/1", "-5/1": "0/1"}


def test_output_is_deterministic_across_processes():
    first = run(["--format", "json", "prove", "--equation", "II", "--trace"])
    second = run(["--format", "json", "prove", "--equation", "II", "--trace"])
    assert first[0] == 0 and first == second


def test_module_entry_point_reports_status():
    code, out, _ = run(["appendix-check"])
    assert code == 0
    assert out.splitlines()[0] == "D_1 o D_0 at base point = 13/24*ds0 + 1/2*ds0*ds1"
