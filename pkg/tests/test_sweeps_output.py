import json

import numpy as np
import pytest

from plasmonqd.config import RunConfig
from plasmonqd.output import OutputError, emit_csv, emit_plot_files, fmt, metadata_path
from plasmonqd.sweeps import (
    resolve_workers,
    run_distance_sweep,
    run_qfi_map,
    run_size_sweep,
    stationary_only,
)

SMALL = RunConfig(t_points=6, s_points=3, r_points=3, s_min=10e-9, s_max=50e-9, r_min=20e-9, r_max=40e-9, n_modes=4)


def read_rows(path):
    lines = path.read_text().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, 2.5e-308, -7.0):
        assert float(fmt(x)) == x
    assert fmt(float("inf")) == "inf"


def test_grid_shape_and_completeness(tmp_path):
    grid = run_distance_sweep(SMALL)
    assert grid.shape == (2, 3, 6)
    assert not np.isnan(grid.concurrence).any()
    assert np.all(np.diff(grid.times) > 0)
    path = emit_csv(grid, tmp_path / "d.csv")
    header, rows = read_rows(path)
    assert header == "analysis,N,s_m,t_s,concurrence,stationary"
    cells = [(r[0], r[2], r[3]) for r in rows]
    assert len(cells) == len(set(cells)) == 2 * 3 * (6 + 1)
    assert [r[0] for r in rows[:21]] == ["dipole"] * 21
    meta = json.loads(metadata_path(path).read_text())
    assert meta["config_sha256"] == SMALL.digest()
    assert len(meta["axes"]["t_s"]) == 6


def test_empty_grid_is_header_only(tmp_path):
    grid = run_distance_sweep(SMALL, positions=[])
    path = emit_csv(grid, tmp_path / "empty.csv")
    header, rows = read_rows(path)
    assert header.startswith("analysis,N,s_m") and rows == []


def test_two_by_two_grid_row_order(tmp_path):
    cfg = SMALL.replace(analysis="dipole", t_points=2)
    grid = run_distance_sweep(cfg, positions=[10e-9, 20e-9])
    _, rows = read_rows(emit_csv(grid, tmp_path / "g.csv"))
    data = [r for r in rows if r[-1] == "0"]
    assert len(data) == 4
    assert [float(r[2]) for r in data] == [10e-9, 10e-9, 20e-9, 20e-9]
    assert float(data[0][3]) < float(data[1][3])
    stationary = [r for r in rows if r[-1] == "1"]
    assert [r[3] for r in stationary] == ["inf", "inf"]


def test_determinism_across_workers(tmp_path):
    a = emit_csv(run_size_sweep(SMALL, workers=1), tmp_path / "a.csv")
    b = emit_csv(run_size_sweep(SMALL, workers=1), tmp_path / "b.csv")
    c = emit_csv(run_size_sweep(SMALL, workers=2), tmp_path / "c.csv")
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_dipole_equals_forced_single_mode():
    dip = run_distance_sweep(SMALL.replace(analysis="dipole"))
    one = run_distance_sweep(SMALL.replace(analysis="multipole", n_modes=1))
    assert np.array_equal(dip.concurrence, one.concurrence)
    assert np.array_equal(dip.stationary_concurrence, one.stationary_concurrence)


def test_stationary_rows_match_stationary_only():
    grid = run_size_sweep(SMALL)
    fast = stationary_only(SMALL, "size", grid.positions)
    for label, _ in grid.analyses:
        np.testing.assert_array_equal(grid.stationary(label), fast[label][0])


def test_qfi_map(tmp_path):
    grid = run_qfi_map(SMALL)
    assert grid.concurrence is None and grid.qfi.shape == (2, 3, 6)
    header, _ = read_rows(emit_csv(grid, tmp_path / "q.csv"))
    assert header == "analysis,N,r_m,t_s,qfi,stationary"
    dat, stat, gp = emit_plot_files(grid, tmp_path / "q")
    script = gp.read_text()
    assert "levels discrete 2" in script and "q.dat" in script
    assert len(stat.read_text().splitlines()) == 4
    assert dat.exists()


def test_unwritable_output(tmp_path):
    grid = run_distance_sweep(SMALL, positions=[])
    with pytest.raises(OutputError):
        emit_csv(grid, tmp_path / "missing" / "x.csv")


def test_worker_resolution():
    assert resolve_workers(SMALL) == 1
    assert resolve_workers(SMALL.replace(workers=2)) == 2
    assert resolve_workers(SMALL.replace(workers=2), 3) == 3
