import json
import subprocess
import sys

import pytest

from rgrade.cli import RunConfig, _join_negative_values, main, parse_window, threads
from rgrade.modalg import Window


def run(args, capsys):
    status = main(args)
    return status, capsys.readouterr()


def test_window_parsing():
    assert parse_window("-64:64") == Window(-64, 64, -64, 64)
    assert parse_window("-5:3:0:2") == Window(-5, 3, 0, 2)
    assert _join_negative_values(["duality", "--window", "-64:64"]) == ["duality", "--window=-64:64"]


def test_usage_errors_exit_2(capsys):
    assert run(["nope"], capsys)[0] == 2
    assert run(["duality", "--window", "3:1"], capsys)[0] == 2
    assert run(["duality", "--window", "1:2:3"], capsys)[0] == 2
    assert run(["blocks", "--format", "xml"], capsys)[0] == 2
    assert run(["e2", "--format", "svg"], capsys)[0] == 2
    assert run(["pairing", "--n", "4"], capsys)[0] == 2
    assert run(["check-dn", "--n", "1"], capsys)[0] == 2


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("blocks", n=0)


def test_duality_command(capsys):
    status, out = run(["duality", "--window", "-64:64"], capsys)
    assert status == 0 and "0 mismatches" in out.out


def test_duality_json(capsys):
    status, out = run(["duality", "--window", "-8:8", "--format", "json"], capsys)
    data = json.loads(out.out)
    assert status == 0 and data["mismatches"] == [] and data["W"] == [-16, -9]


def test_blocks_table(capsys):
    status, out = run(["blocks", "--block", "BB"], capsys)
    lines = out.out.splitlines()
    assert status == 0 and lines[0] == "BB"
    assert lines[3].split("|")[1].strip() == "P"


def test_e2_table_and_golden(capsys):
    status, out = run(["e2", "--block", "NB", "--format", "table"], capsys)
    assert status == 0 and "nb-low" in out.out and "⊕ F2" in out.out
    status, out = run(["e2", "--block", "NB", "--golden"], capsys)
    assert status == 1 and "x -9 vs -10" in out.out
    status, out = run(["e2", "--block", "NB", "--golden", "--errata"], capsys)
    assert status == 0 and "0 differ" in out.out


def test_run_ss_reports_the_golden_difference(capsys):
    status, out = run(["run-ss", "--golden"], capsys)
    assert status == 1 and "BB_22 u^0 H^0: found d3, expected d2" in out.out
    status, out = run(["run-ss", "--block", "NB", "--golden"], capsys)
    assert status == 0 and "0 differences" in out.out


def test_pairing(capsys, tmp_path):
    status, out = run(["pairing"], capsys)
    assert status == 0 and "BB_delta -> NB_delta_" in out.out
    status, out = run(["pairing", "--golden"], capsys)
    assert status == 1 and "9 rows differ" in out.out
    target = tmp_path / "pairing.json"
    assert run(["pairing", "--format", "json", "--out", str(target)], capsys)[0] == 0
    assert len(json.loads(target.read_text())) == 58


def test_check_dn(capsys):
    status, out = run(["check-dn", "--n", "5", "--format", "json"], capsys)
    data = json.loads(out.out)
    assert status == 0 and data["c"] == 118 and data["page"] == 5


def test_render_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        assert run(["render", "--window", "-20:20", "--out", str(p)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes() and a.read_text().startswith("<svg")


def test_selftest_small_window(capsys, monkeypatch):
    monkeypatch.setenv("RGRADE_THREADS", "1")
    status, out = run(["selftest", "--window", "-12:4"], capsys)
    assert status == 0 and "15/15 modules agree" in out.out


def test_threads_env(monkeypatch):
    monkeypatch.setenv("RGRADE_THREADS", "3")
    assert threads() == 3
    monkeypatch.setenv("RGRADE_THREADS", "junk")
    assert threads() >= 1


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "rgrade.cli", "check-dn", "--n", "2"], capture_output=True, text=True)
    assert out.returncode == 0 and "d_2(a^9) != 0" in out.stdout
