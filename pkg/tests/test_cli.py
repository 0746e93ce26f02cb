import csv
import subprocess
import sys
from itertools import product

import pytest

from skewalg.cli import main
from skewalg.suites import CSV_HEADER, SUITES, run_suite
from skewalg.workspace import fixture_path


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pass_exit_zero(tmp_path, capsys):
    code, _, err = run([fixture_path("kron"), "--suite", "semicovering-mod", "--out", tmp_path], capsys)
    assert code == 0
    assert "0 failed" in err
    rows = list(csv.reader((tmp_path / "semicovering-mod.csv").open()))
    assert tuple(rows[0]) == CSV_HEADER
    n_mod = 9
    assert len(rows) - 1 == n_mod * n_mod
    assert all(r[-1] == "pass" for r in rows[1:])
    assert (tmp_path / "semicovering-mod.txt").read_text().rstrip().endswith("result: PASS")


def test_failure_exit_one(tmp_path, capsys):
    text = fixture_path("kron").read_text() + "\n[functor T_bad]\npresentation: S2_P1\n"
    path = tmp_path / "bad.txt"
    path.write_text(text)
    code, out, _ = run([path, "--suite", "gcf"], capsys)
    assert code == 1
    assert "T_bad" in out and "FAIL" in out


@pytest.mark.parametrize("args", [
    ["missing.txt", "--suite", "hgcm"],
    [fixture_path("kron"), "--suite", "nope"],
    [fixture_path("kron"), "--suite", "hgcm", "--field-p", "32004"],
    [fixture_path("kron"), "--suite", "hgcm", "--seed", "-1"],
])
def test_input_errors_exit_two(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 2 and err.startswith("error:")


def test_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "broken.txt"
    path.write_text("[field]\np 5\n")
    code, _, err = run([path, "--suite", "hgcm"], capsys)
    assert code == 2 and "line 2" in err


def test_empty_workspace(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("")
    code, out, _ = run([path, "--suite", "all"], capsys)
    assert code == 0
    assert out.count("result: PASS") == len(SUITES)


def test_brauer_suite(capsys):
    code, out, _ = run([fixture_path("brauer"), "--suite", "brauer-all"], capsys)
    assert code == 0 and "BG1" in out


@pytest.mark.parametrize("fixture,suite", list(product(["swap", "kron"], ["hgcm", "gstab", "gcf"])))
def test_deterministic(fixture, suite, tmp_path, capsys):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        assert run([fixture_path(fixture), "--suite", suite, "--seed", "3", "--out", d], capsys)[0] == 0
        outs.append(((d / f"{suite}.txt").read_bytes(), (d / f"{suite}.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_strict_flag_and_multiple_suites(tmp_path, capsys):
    code, _, _ = run([fixture_path("swap"), "--suite", "hgcm,gcf", "--suite", "yoneda-square", "--strict",
                      "--out", tmp_path], capsys)
    assert code == 0
    assert {p.name for p in tmp_path.iterdir()} == {
        "hgcm.txt", "hgcm.csv", "gcf.txt", "gcf.csv", "yoneda-square.txt", "yoneda-square.csv"}


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "skewalg", str(fixture_path("swap")), "--suite", "hgcm"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "result: PASS" in r.stdout


def test_unknown_suite_in_library(kron_ws):
    from skewalg.errors import UnknownSuite
    with pytest.raises(UnknownSuite):
        run_suite(kron_ws, "nope")
