"""Command-line entry point.

Exit status: 0 on success; 1 if any run failed, a scenario had no block
fitting its slot in any run, or a deadline sweep found a looser deadline
costing more; 2 for configuration or usage errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .config import load_config, parse_seeds
from .errors import ConfigError, VarietyDVFSError
from .experiment import run_comparison, run_deadline_sweep, run_variety_sweep
from .report import emit_report

OUTPUT_DIR_ENV = "VARIETYDVFS_OUTPUT_DIR"

log = logging.getLogger("varietydvfs")

RUNNERS = {
    "compare": run_comparison,
    "sweep-variety": run_variety_sweep,
    "sweep-deadline": run_deadline_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varietydvfs",
        description="Data-variety-aware DVFS scheduling experiments.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True,
                       help="YAML experiment config, or builtin:<name> for a shipped preset")

    for name, help_text in (
        ("compare", "DV-DVFS vs. baseline per scenario and seed"),
        ("sweep-variety", "repeat the comparison for every Zipf exponent in z_sweep"),
        ("sweep-deadline", "compare scenarios and check looser deadlines never cost more"),
    ):
        p = sub.add_parser(name, help=help_text)
        common(p)
        p.add_argument("--out", help=f"output directory (default: ${OUTPUT_DIR_ENV}, then the config's output_dir)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seeds", help="seed list override, e.g. 0-19 or 1,2,3")
        p.add_argument("--mode", choices=("slot-average", "busy-literal"), help="energy accounting override")
        p.add_argument("--jobs", type=int, default=1, help="worker processes (output is identical for any value)")

    p = sub.add_parser("validate-config", help="load and validate a config, then exit")
    common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate-config":
        print(f"ok: {len(config.deadline_scenarios)} scenarios, {len(config.seeds)} seeds, "
              f"z_sweep={list(config.z_sweep)}, mode={config.energy_mode.value}")
        return 0

    try:
        seeds = parse_seeds(args.seeds) if args.seeds else None
        out_dir = args.out or os.environ.get(OUTPUT_DIR_ENV) or config.output_dir
        config = config.with_overrides(seeds=seeds, energy_mode=args.mode, output_dir=out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.jobs < 1:
        print("--jobs must be >= 1", file=sys.stderr)
        return 2

    try:
        report = RUNNERS[args.command](config, jobs=args.jobs)
        paths = emit_report(report, args.format, config.output_dir)
    except VarietyDVFSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for path in paths:
        print(path)
    for msg in report.errors:
        print(f"run failed: {msg}", file=sys.stderr)
    for label in report.infeasible_scenarios:
        print(f"infeasible scenario: {label} (no block fits its slot)", file=sys.stderr)
    for msg in report.monotonicity_violations:
        print(f"deadline monotonicity violated: {msg}", file=sys.stderr)
    log.info("%d runs, %d aggregates", len(report.rows), len(report.aggregates))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
