import io
import json
import pathlib
import subprocess
import sys

import pytest

from unclab.cli import main

CONFIGS = pathlib.Path(__file__).parents[1] / "configs"


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "config, expected",
    [("antipodal_fixed.json", 2), ("lemma_h_r1.json", 0), ("malformed.json", 1)],
)
def test_exit_codes_on_fixture_campaigns(config, expected, capsys):
    code, _, _ = run(["campaign", CONFIGS / config], capsys)
    assert code == expected


def test_campaign_output_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(["campaign", CONFIGS / "antipodal_fixed.json", "--out", out], capsys)[0] == 2
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["runtime_ms"] is None and len(rep["violations"]) == 1


def test_csv_output_and_timing(capsys):
    code, out, _ = run(["campaign", CONFIGS / "antipodal_fixed.json", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert lines[0] == "claim,param1,param2,trials,violations,worst_margin,runtime_ms"
    assert lines[1].startswith("thm_discrete,,,1,1,0.82842712474619")
    assert lines[1].endswith(",")
    code, out, _ = run(["campaign", CONFIGS / "antipodal_fixed.json", "--format", "csv", "--timing"], capsys)
    assert not out.splitlines()[1].endswith(",")


def test_flag_overrides(capsys):
    code, out, _ = run(["campaign", CONFIGS / "lemma_h_r1.json", "--trials", "7", "--seed", "3", "--tol", "1e-8"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["trials"] == 7 and rep["campaign"]["seed"] == 3 and rep["campaign"]["tol"] == 1e-8


def test_map_command(tmp_path, capsys):
    out = tmp_path / "map.csv"
    code, _, _ = run(["map", CONFIGS / "map_thm_discrete.json", "--out", out], capsys)
    assert code == 2
    rows = out.read_text().splitlines()
    assert len(rows) == 5
    n2 = rows[2].split(",")
    assert n2[1] == "2" and int(n2[4]) >= 1
    code2, _, _ = run(["map", CONFIGS / "map_thm_discrete.json", "--out", tmp_path / "m2.csv"], capsys)
    assert (tmp_path / "m2.csv").read_bytes() == out.read_bytes()


def test_check_from_file_and_stdin(capsys, monkeypatch):
    code, out, _ = run(["check", CONFIGS / "check_aligned_pairs.json"], capsys)
    assert code == 2 and abs(json.loads(out)["margin"] - 0.8452878799605972) < 1e-9
    text = (CONFIGS / "check_antipodal.json").read_text()
    code, out, _ = run(["check"], capsys, stdin=text, monkeypatch=monkeypatch)
    rep = json.loads(out)
    assert code == 2 and abs(rep["margin"] - 0.8284271247461903) < 1e-9
    code, _, err = run(["check"], capsys, stdin="{not json", monkeypatch=monkeypatch)
    assert code == 1 and "error" in err


def test_recheck_command(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, out, _ = run(["check", CONFIGS / "check_antipodal.json", "--out", cert], capsys)
    assert run(["recheck", cert], capsys)[0] == 0
    data = json.loads(cert.read_text())
    data["rhs"] = 5.0
    data["margin"] = data["lhs"] - data["rhs"]
    cert.write_text(json.dumps(data))
    code, out, _ = run(["recheck", cert], capsys)
    assert code == 2 and json.loads(out)["valid"] == [False]
    report = tmp_path / "report.json"
    run(["campaign", CONFIGS / "antipodal_fixed.json", "--out", report], capsys)
    assert run(["recheck", report], capsys)[0] == 0
    cert.write_text(json.dumps({"claim_id": "thm_discrete", "witness": {}}))
    assert run(["recheck", cert], capsys)[0] == 1


def test_search_command(capsys):
    code, out, _ = run(["search", "--degree", "2", "--delta", "0.785", "--r-max", "2", "--budget", "60", "--seed", "3"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert list(rep) == ["set", "lambda", "interval_lambda", "gap", "seed", "budget"]
    assert rep["gap"] <= 1e-9


def test_usage_errors(capsys):
    assert main([]) == 1
    assert main(["campaign", "/nonexistent.json"]) == 1
    assert main(["--help"]) == 0


def test_console_script_runs():
    out = subprocess.run(
        [sys.executable, "-m", "unclab.cli", "check", str(CONFIGS / "check_aligned_pairs.json")],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 2
    assert json.loads(out.stdout)["claim_id"] == "lemma_h_bound"
