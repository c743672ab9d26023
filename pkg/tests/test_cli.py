import json
import subprocess
import sys

import pytest

from oracles import factorization_reproduces
from suslin.cli import cli_main, random_instance
from suslin.linalg import Factorization, PolyMatrix, verify
from suslin.ring import GF

# E31(x) E23(1 + x^2 + y^2 + z) E13(z): the constructive route needs a rational
# zero of 1 + x^2 + y^2, which does not exist
UNSUPPORTED = {
    "n": 3,
    "vars": ["x", "y", "z"],
    "field": "q",
    "entries": [["1", "0", "z"], ["0", "1", "x^2 + y^2 + z + 1"], ["x", "0", "x*z + 1"]],
}


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_gen_then_verify(tmp_path):
    m, f = tmp_path / "m.json", tmp_path / "f.json"
    assert cli_main(["gen", "--n", "3", "--vars", "2", "--factors", "5", "--seed", "7",
                     "--matrix", str(m), "--factorization", str(f)]) == 0
    assert cli_main(["verify", str(m), str(f)]) == 0


def test_gen_to_stdout(capsys):
    assert cli_main(["gen", "--n", "3", "--factors", "2", "--seed", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    a = PolyMatrix.from_json(data["matrix"])
    assert verify(Factorization.from_json(data["factorization"], ring=a.ring), a)


def test_gen_over_finite_field(tmp_path):
    m = tmp_path / "m.json"
    assert cli_main(["gen", "--n", "4", "--field", "gf:101", "--matrix", str(m)]) == 0
    assert PolyMatrix.from_json(json.loads(m.read_text())).ring.field == GF(101)


@pytest.mark.parametrize("extra", [[], ["--simplify"], ["--field", "gf:101"]])
def test_factor_round_trip(tmp_path, extra):
    a, _ = random_instance(3, 2, 6, seed=3)
    m = write(tmp_path / "m.json", a.to_json())
    out = tmp_path / "out.json"
    assert cli_main(["factor", m, "-o", str(out)] + extra) == 0
    fact = Factorization.from_json(json.loads(out.read_text()))
    assert fact.to_json()["order"] == "left-to-right"
    if not extra or extra == ["--simplify"]:
        assert cli_main(["verify", m, str(out)]) == 0
        assert factorization_reproduces(fact, a)


def test_verify_detects_mismatch(tmp_path):
    a, f = random_instance(3, 2, 4, seed=5)
    b, _ = random_instance(3, 2, 4, seed=6)
    m = write(tmp_path / "m.json", b.to_json())
    ff = tmp_path / "f.json"
    ff.write_text(f.dumps())
    assert cli_main(["verify", m, str(ff)]) == 1


def test_simplify_command(tmp_path, capsys):
    _, f = random_instance(3, 2, 5, seed=8)
    doubled = f + f.inverse() + f
    src = tmp_path / "f.json"
    src.write_text(doubled.dumps())
    out = tmp_path / "g.json"
    assert cli_main(["simplify", str(src), "-o", str(out)]) == 0
    g = Factorization.from_json(json.loads(out.read_text()))
    assert g.product() == f.product() and len(g) <= len(f)


def test_determinant_two_is_input_error(tmp_path, capsys):
    m = write(tmp_path / "m.json", {"n": 3, "vars": ["x", "y"], "field": "q",
                                     "entries": [["2", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    assert cli_main(["factor", m]) == 2
    assert "determinant is 2" in capsys.readouterr().err


def test_two_by_two_is_input_error(tmp_path, capsys):
    m = write(tmp_path / "m.json", {"n": 2, "vars": ["x", "y"], "field": "q",
                                     "entries": [["1 + x*y", "x^2"], ["-y^2", "1 - x*y"]]})
    assert cli_main(["factor", m]) == 2
    assert "n = 2" in capsys.readouterr().err


def test_malformed_json_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3,\n  "vars": [x]}')
    assert cli_main(["factor", str(bad)]) == 2
    assert "line 2 column" in capsys.readouterr().err


def test_bad_polynomial_is_input_error(tmp_path):
    m = write(tmp_path / "m.json", {"n": 3, "vars": ["x"], "field": "q",
                                     "entries": [["1", "0", "0"], ["0", "1", "*"], ["0", "0", "1"]]})
    assert cli_main(["factor", m]) == 2


def test_missing_file_and_bad_arguments(tmp_path):
    assert cli_main(["verify", str(tmp_path / "none.json"), str(tmp_path / "none.json")]) == 2
    assert cli_main(["factor"]) == 2
    assert cli_main(["gen", "--n", "0"]) == 2


def test_unsupported_instance_exit_three(tmp_path, capsys):
    m = write(tmp_path / "m.json", UNSUPPORTED)
    assert cli_main(["factor", m, "--strategy", "suslin"]) == 3
    assert "unsupported" in capsys.readouterr().err


def test_unsupported_instance_is_fine_in_auto_mode(tmp_path):
    m = write(tmp_path / "m.json", UNSUPPORTED)
    out = tmp_path / "f.json"
    assert cli_main(["factor", m, "-o", str(out)]) == 0
    assert cli_main(["verify", m, str(out)]) == 0


def test_console_entry_point(tmp_path):
    m = write(tmp_path / "m.json", UNSUPPORTED)
    proc = subprocess.run([sys.executable, "-m", "suslin.cli", "factor", m, "--strategy", "suslin"],
                          capture_output=True, text=True)
    assert proc.returncode == 3
