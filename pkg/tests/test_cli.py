import json
import subprocess
import sys

import pytest

from dgkit.cli import main, run_suite, fixture_path, fixture_names, EXIT_OK, EXIT_FAIL, EXIT_USAGE
from dgkit.presentation import parses, export
from dgkit.report import validate_report
from conftest import FIXTURES, load

FAST_SUITES = ["axioms", "bar", "counterexample"]


def cli(*args):
    return subprocess.run([sys.executable, "-m", "dgkit.cli", *args], capture_output=True, text=True)


def test_fixture_listing(capsys):
    assert main(["fixtures"]) == EXIT_OK
    assert capsys.readouterr().out.split() == fixture_names()


@pytest.mark.parametrize("name", FIXTURES)
def test_check_passes_on_fixture(name, tmp_path):
    out = tmp_path / "r.json"
    code = main(["check", name, "--quiet", "--out", str(out)] + sum([["--suite", s] for s in FAST_SUITES], []))
    assert code == EXIT_OK
    assert validate_report(json.loads(out.read_text())) == []


@pytest.mark.parametrize("name", FIXTURES)
def test_reports_byte_identical(name, tmp_path):
    args = ["check", name, "--suite", "axioms", "--suite", "signs", "--suite", "bar", "--seed", "7", "--quiet"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli(*args, "--out", str(a)).returncode == 0
    assert cli(*args, "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("name", FIXTURES)
def test_export_round_trip(name, tmp_path):
    first = tmp_path / "first.dgc"
    assert main(["export", name, "--out", str(first)]) == EXIT_OK
    second = tmp_path / "second.dgc"
    assert main(["export", str(first), "--out", str(second)]) == EXIT_OK
    assert first.read_text() == second.read_text()
    assert parses(first.read_text()).structurally_equal(load(name))


def test_missing_file_is_usage_error(capsys):
    assert main(["check", "no-such-file.dgc"]) == EXIT_USAGE
    assert "no such file" in capsys.readouterr().err


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.dgc"
    bad.write_text("grading\n  rank 1\n  pairing 1\n  iota 1\nend\nobjects\n  X\nend\nhom X X\n  e [zz]\nend\n")
    assert main(["check", str(bad)]) == EXIT_USAGE
    assert "parse error" in capsys.readouterr().err


def test_bad_window_is_usage_error():
    assert cli("check", "kx2", "--window", "1..0").returncode == EXIT_USAGE


def test_axiom_violation_exits_one(tmp_path):
    text = open(fixture_path("m2x2")).read().replace("e12 e21 = e11", "e12 e21 = e22")
    path = tmp_path / "broken.dgc"
    path.write_text(text)
    out = tmp_path / "r.json"
    assert main(["check", str(path), "--suite", "bar", "--quiet", "--out", str(out)]) == EXIT_FAIL
    doc = json.loads(out.read_text())
    assert doc["suite"] == "axioms" and not doc["ok"]


def test_unreliable_does_not_fail(tmp_path):
    # bigraded semiorthogonality is undecided in the default window
    rep = run_suite("idempotents", load("bigraded"), {})
    assert rep.ok
    assert rep.counts()["boundary-unreliable"] > 0


def test_json_stdout_and_params(capsys):
    assert main(["check", "kx2", "--suite", "bar", "--R", "3", "--window", "-5..0", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["params"] == {"R": 3, "window": [-5, 0], "r": 2, "nmax": 3}
    assert "time" not in json.dumps(doc)


def test_export_bar(capsys):
    assert main(["export", "kx2", "--what", "bar", "--R", "1", "--objects", "O", "O"]) == EXIT_OK
    assert capsys.readouterr().out.strip()


def test_export_bar_unknown_object(capsys):
    assert main(["export", "kx2", "--what", "bar", "--objects", "O", "Z"]) == EXIT_USAGE


def test_console_script_entry_point():
    proc = subprocess.run(["dgkit", "fixtures"], capture_output=True, text=True)
    assert proc.returncode == 0 and "kx2.dgc" in proc.stdout
