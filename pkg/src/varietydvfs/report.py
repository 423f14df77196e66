"""Report files: per-run CSV, aggregate CSV, plot-data CSV and versioned JSON.

JSON layout (``schema_version`` 1)::

    {
      "schema_version": 1,
      "kind": "compare" | "variety-sweep" | "deadline-sweep",
      "energy_mode": "slot-average" | "busy-literal",
      "columns": [...per-run CSV column order...],
      "rows": [{scenario, z, seed, ec_dvfs, ec_dvo, ft_dvfs, ft_dvo,
                savings_pct, time_increase_pct, deadline_met_dvfs,
                deadline_met_dvo, deadline, n_blocks, n_at_risk,
                feasible_dvfs, predicted_energy_dvfs,
                predicted_dynamic_energy_dvfs, p_idle}, ...],
      "aggregates": [{scenario, z, n_runs, mean_*, norm_*, ...}, ...],
      "errors": [...], "infeasible_scenarios": [...],
      "monotonicity_violations": [...]
    }

Energies are joules, times seconds. CSV floats use 6 significant digits;
JSON floats are written with full precision and reload exactly.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, fields
from pathlib import Path

from .errors import VarietyDVFSError
from .experiment import ROW_COLUMNS, AggregateRow, SweepReport

AGGREGATE_COLUMNS = tuple(f.name for f in fields(AggregateRow))
PLOT_COLUMNS = ("scenario", "z", "approach", "normalized_energy", "normalized_time")


class ReportWriteError(VarietyDVFSError, OSError):
    pass


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def _csv_text(columns, records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_cell(rec[c]) for c in columns])
    return buf.getvalue()


def rows_csv(report: SweepReport) -> str:
    return _csv_text(ROW_COLUMNS, [asdict(r) for r in report.rows])


def aggregates_csv(report: SweepReport) -> str:
    return _csv_text(AGGREGATE_COLUMNS, [asdict(a) for a in report.aggregates])


def plot_csv(report: SweepReport) -> str:
    records = []
    for a in report.aggregates:
        records.append({"scenario": a.scenario, "z": a.z, "approach": "dv-dvfs",
                        "normalized_energy": a.norm_energy_dvfs, "normalized_time": a.norm_time_dvfs})
        records.append({"scenario": a.scenario, "z": a.z, "approach": "dvo",
                        "normalized_energy": a.norm_energy_dvo, "normalized_time": a.norm_time_dvo})
    return _csv_text(PLOT_COLUMNS, records)


def report_json(report: SweepReport) -> str:
    return json.dumps(report.to_dict(), indent=2, allow_nan=False) + "\n"


def load_report_json(path) -> SweepReport:
    return SweepReport.from_dict(json.loads(Path(path).read_text()))


def emit_report(report: SweepReport, fmt: str, output_dir) -> list[Path]:
    """Write the report; returns the paths written.

    ``csv`` writes ``<kind>.csv``, ``<kind>_aggregate.csv`` and
    ``<kind>_plot.csv``; ``json`` writes ``<kind>.json``.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown report format {fmt!r}")
    out = Path(output_dir)
    if fmt == "csv":
        payload = {
            f"{report.kind}.csv": rows_csv(report),
            f"{report.kind}_aggregate.csv": aggregates_csv(report),
            f"{report.kind}_plot.csv": plot_csv(report),
        }
    else:
        payload = {f"{report.kind}.json": report_json(report)}
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in payload.items():
            path = out / name
            path.write_text(text)
            written.append(path)
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {out}: {exc}") from exc
    return written
