import csv
import json

import pytest

from varietydvfs.config import load_config
from varietydvfs.experiment import ROW_COLUMNS, RunRow, SweepReport, run_variety_sweep
from varietydvfs.report import ReportWriteError, emit_report, load_report_json


@pytest.fixture(scope="module")
def report():
    return run_variety_sweep(load_config("builtin:benchmarks").with_overrides(seeds=[0, 1]))


def test_empty_report(tmp_path):
    empty = SweepReport(kind="compare", energy_mode="slot-average")
    (rows_csv, agg_csv, plot_csv) = emit_report(empty, "csv", tmp_path)
    assert rows_csv.read_text() == ",".join(ROW_COLUMNS) + "\n"
    (path,) = emit_report(empty, "json", tmp_path)
    data = json.loads(path.read_text())
    assert data["schema_version"] == 1 and data["rows"] == []


def test_one_row_and_stable_reemission(tmp_path):
    row = RunRow("s", 1.0, 0, 1234.56789012, 1500.0, 90.0, 88.5, 17.6954, 1.69491525, True, True)
    rep = SweepReport(kind="compare", energy_mode="slot-average", rows=[row])
    first = emit_report(rep, "csv", tmp_path / "a")[0].read_bytes()
    second = emit_report(rep, "csv", tmp_path / "b")[0].read_bytes()
    assert first == second
    lines = first.decode().splitlines()
    assert len(lines) == 2
    assert lines[1] == "s,1,0,1234.57,1500,90,88.5,17.6954,1.69492,true,true"


def test_csv_column_order(report, tmp_path):
    path = emit_report(report, "csv", tmp_path)[0]
    with open(path) as fh:
        header = next(csv.reader(fh))
    assert tuple(header) == ROW_COLUMNS == (
        "scenario", "z", "seed", "ec_dvfs", "ec_dvo", "ft_dvfs", "ft_dvo",
        "savings_pct", "time_increase_pct", "deadline_met_dvfs", "deadline_met_dvo",
    )


def test_json_round_trip_exact(report, tmp_path):
    (path,) = emit_report(report, "json", tmp_path)
    again = load_report_json(path)
    assert again.rows == report.rows
    assert again.aggregates == report.aggregates
    assert again.to_dict() == report.to_dict()


def test_plot_data(report, tmp_path):
    plot = emit_report(report, "csv", tmp_path)[2]
    with open(plot) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2 * len(report.aggregates)
    assert all(r["normalized_energy"] == "1" for r in rows if r["approach"] == "dvo")


def test_unwritable(tmp_path, report):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ReportWriteError):
        emit_report(report, "json", blocker / "sub")


def test_schema_version_checked():
    with pytest.raises(ValueError):
        SweepReport.from_dict({"schema_version": 2, "kind": "x", "energy_mode": "y", "rows": [], "aggregates": []})
