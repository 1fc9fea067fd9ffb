import io
import json

import pytest

from plasmonqd.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main

FAST = ["--N", "3", "--t_points", "5", "--s_points", "2", "--r_points", "2"]


def run(args):
    out = io.StringIO()
    code = main(args, out=out)
    return code, out.getvalue()


def test_params_report():
    code, text = run(["params"])
    assert code == EXIT_OK
    report = json.loads(text)
    assert report["lspr_wavelength_nm"]["local"] == pytest.approx(481, abs=1)
    assert report["lspr_wavelength_nm"]["nonlocal"] == pytest.approx(478, abs=1)
    assert len(report["modes"]) == 10
    assert 0 < report["stationary"]["concurrence"] < 1


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[material]\npreset = silver-drude\n[geometry]\nr = 20 nm\n[run]\nN = 2\n")
    code, text = run(["params", "--config", str(cfg), "--r", "25 nm"])
    assert code == EXIT_OK
    assert len(json.loads(text)["modes"]) == 2


def test_bad_config_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[material]\npreset = silver-drude\n[geometry]\nr = 30\n")
    assert run(["params", "--config", str(cfg)])[0] == EXIT_CONFIG
    assert "line 4" in capsys.readouterr().err
    assert run(["params", "--config", str(tmp_path / "absent.ini")])[0] == EXIT_CONFIG


def test_unwritable_output_exit_code(tmp_path):
    code, _ = run(["sweep-distance", *FAST, "--output", str(tmp_path / "no" / "x.csv")])
    assert code == EXIT_NUMERICAL


@pytest.mark.parametrize("command", ["sweep-distance", "sweep-size", "qfi-map"])
def test_sweeps_write_files(tmp_path, command):
    out = tmp_path / "grid.csv"
    code, text = run([command, *FAST, "--output", str(out)])
    assert code == EXIT_OK
    assert out.exists() and (tmp_path / "grid.csv.meta.json").exists()
    assert (tmp_path / "grid.gp").exists()
    assert str(out) in json.loads(text)["written"]


def test_evolve(tmp_path):
    out = tmp_path / "ev.csv"
    code, text = run(["evolve", "--t_points", "20", "--output", str(out), "--no-plot"])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t_s,concurrence,qfi") and len(lines) == 21
    assert json.loads(text)["steady"]


def test_validate_passes(tmp_path):
    code, text = run(["validate", "--output", str(tmp_path / "v.json")])
    report = json.loads(text)
    assert code == EXIT_OK and report["passed"]
    names = {e["name"] for e in report["entries"]}
    assert {"rhs_cross_check", "rhs_fault_injection", "multipole_convergence_N10_vs_N12"} <= names


def test_worker_precedence(monkeypatch):
    from plasmonqd.cli import build_parser, load_config

    parser = build_parser()
    monkeypatch.setenv("PLASMONQD_WORKERS", "3")
    assert load_config(parser.parse_args(["params"])).workers == 3
    assert load_config(parser.parse_args(["params", "--workers", "2"])).workers == 2
    monkeypatch.delenv("PLASMONQD_WORKERS")
    assert load_config(parser.parse_args(["params"])).workers == 1
