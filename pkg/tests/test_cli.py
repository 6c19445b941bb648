import json
import shutil
import subprocess
import sys

import pytest

from flagknot.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, main

TREFOIL = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_json(capsys):
    code, out, _ = run(capsys, "parse", "--pd", TREFOIL, "--name", "3_1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["name"] == "3_1" and len(data["crossings"]) == 3


def test_parse_text_positional(capsys):
    code, out, _ = run(capsys, "--format", "text", "parse", "O1+U2+O3+U1+O2+U3+")
    assert code == EXIT_OK
    assert "classical crossings: 3" in out


def test_parse_from_file(capsys, tmp_path):
    f = tmp_path / "k.txt"
    f.write_text(TREFOIL + "\n")
    code, out, _ = run(capsys, "parse", str(f))
    assert code == EXIT_OK and json.loads(out)["edges"] == 6


def test_bad_input_exit_one(capsys):
    code, out, err = run(capsys, "parse", "--pd", "PD[X[1,2,3]]")
    assert code == EXIT_FAIL
    assert out == ""
    assert err.startswith("flagknot: error:")


def test_non_planar_needs_flag(capsys):
    code, _, err = run(capsys, "parse", "--gauss", "O1-O2-U1-U2-")
    assert code == EXIT_FAIL and "error" in err
    code, out, _ = run(capsys, "parse", "--gauss", "O1-O2-U1-U2-", "--planarize")
    assert code == EXIT_OK
    assert sum(c["kind"] == "virtual" for c in json.loads(out)["crossings"]) == 1


def test_unknown_knot(capsys):
    code, _, err = run(capsys, "flag", "--knot", "99_9")
    assert code == EXIT_FAIL and "unknown knot" in err


def test_quotient(capsys):
    code, out, _ = run(capsys, "quotient", "--knot", "4_1", "--axioms", "involutory")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["status"] == "completed" and data["quandle"]["n"] == 5


def test_quotient_budget_exit_two(capsys):
    code, out, _ = run(capsys, "quotient", "--knot", "3_1", "--max-gens", "3")
    assert code == EXIT_BUDGET
    assert json.loads(out)["status"] == "budget-exceeded"


def test_quotient_bad_axiom(capsys):
    code, _, err = run(capsys, "quotient", "--knot", "3_1", "--axioms", "commutative")
    assert code == EXIT_FAIL and "unknown axiom" in err


def test_flag(capsys):
    code, out, _ = run(capsys, "flag", "--knot", "4_1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["cardinality"] == 4
    assert data["alexander"] == "t^2 - 3*t + 1" and data["determinant"] == 5 and data["symmetric"]


def test_flag_bad_order(capsys):
    code, _, err = run(capsys, "--order", "t>s>x>y", "flag", "--knot", "3_1")
    assert code == EXIT_FAIL and "error" in err


def test_alexander_text(capsys):
    code, out, _ = run(capsys, "--format", "text", "alexander", "--knot", "4.99")
    assert code == EXIT_OK
    assert out.startswith("2*t - 1") and "symmetric: False" in out


def test_regress_flag_subset(capsys, tmp_path):
    table = {"kind": "flag", "entries": [
        {"name": "3_1", "flag1": ["t^2 - t + 1", "s^-1 - t", "t^-1 + t - 1", "s + t - 1"], "cardinality": 4},
        {"name": "4_1", "flag1": ["t^2 - t + 1"], "cardinality": 4},
    ]}
    f = tmp_path / "t.json"
    f.write_text(json.dumps(table))
    code, out, _ = run(capsys, "regress", "--table", str(f), "--no-timings")
    assert code == EXIT_FAIL
    report = json.loads(out)
    assert [e["status"] for e in report["entries"]] == ["match", "mismatch"]
    assert report["summary"]["match"] == 1 and not report["ok"]
    assert "seconds" not in out


def test_regress_empty_table(capsys, tmp_path):
    f = tmp_path / "empty.json"
    f.write_text("")
    code, out, _ = run(capsys, "regress", "--table", str(f))
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["entries"] == [] and report["ok"]


def test_regress_deterministic(capsys):
    _, a, _ = run(capsys, "regress", "--bundled", "quotient", "--no-timings")
    _, b, _ = run(capsys, "regress", "--bundled", "quotient", "--no-timings", "--jobs", "2")
    assert a == b
    assert json.loads(a)["ok"]


def test_regress_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "regress", "--table", str(tmp_path / "nope.json"))
    assert code == EXIT_FAIL and "error" in err


@pytest.mark.skipif(shutil.which("flagknot") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["flagknot", "--format", "text", "alexander", "--pd", TREFOIL],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert p.stdout.startswith("t^2 - t + 1")


def test_module_entry():
    p = subprocess.run([sys.executable, "-m", "flagknot.cli", "flag", "--knot", "3_1"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["cardinality"] == 4
