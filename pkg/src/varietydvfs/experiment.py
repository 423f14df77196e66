"""Comparison and sensitivity runs over scenarios, variety levels and seeds."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from .config import DeadlineScenario, ExperimentConfig
from .errors import InvalidParameterError, RunError, VarietyDVFSError
from .planner import plan_slots, schedule_dv_dvfs, schedule_dvo
from .power import EnergyMode
from .sim import compare, execute
from .workload import generate_blocks

SCHEMA_VERSION = 1

# Column order of the per-run CSV.
ROW_COLUMNS = (
    "scenario", "z", "seed", "ec_dvfs", "ec_dvo", "ft_dvfs", "ft_dvo",
    "savings_pct", "time_increase_pct", "deadline_met_dvfs", "deadline_met_dvo",
)


@dataclass(frozen=True)
class RunRow:
    scenario: str
    z: float
    seed: int
    ec_dvfs: float
    ec_dvo: float
    ft_dvfs: float
    ft_dvo: float
    savings_pct: float
    time_increase_pct: float
    deadline_met_dvfs: bool
    deadline_met_dvo: bool
    deadline: float = 0.0
    n_blocks: int = 0
    n_at_risk: int = 0
    feasible_dvfs: bool = True
    predicted_energy_dvfs: float = 0.0
    predicted_dynamic_energy_dvfs: float = 0.0
    p_idle: float = 0.0


@dataclass(frozen=True)
class AggregateRow:
    scenario: str
    z: float
    n_runs: int
    mean_ec_dvfs: float
    mean_ec_dvo: float
    mean_ft_dvfs: float
    mean_ft_dvo: float
    norm_energy_dvfs: float
    norm_energy_dvo: float
    norm_time_dvfs: float
    norm_time_dvo: float
    mean_savings_pct: float
    mean_time_increase_pct: float
    deadline_met_rate_dvfs: float
    deadline_met_rate_dvo: float


@dataclass
class SweepReport:
    kind: str
    energy_mode: str
    rows: list[RunRow] = field(default_factory=list)
    aggregates: list[AggregateRow] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    infeasible_scenarios: list[str] = field(default_factory=list)
    monotonicity_violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.errors or self.infeasible_scenarios or self.monotonicity_violations)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "energy_mode": self.energy_mode,
            "columns": list(ROW_COLUMNS),
            "rows": [asdict(r) for r in self.rows],
            "aggregates": [asdict(a) for a in self.aggregates],
            "errors": list(self.errors),
            "infeasible_scenarios": list(self.infeasible_scenarios),
            "monotonicity_violations": list(self.monotonicity_violations),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise InvalidParameterError(f"unsupported report schema_version {data.get('schema_version')!r}")
        row_names = {f.name for f in fields(RunRow)}
        agg_names = {f.name for f in fields(AggregateRow)}
        return cls(
            kind=data["kind"],
            energy_mode=data["energy_mode"],
            rows=[RunRow(**{k: v for k, v in r.items() if k in row_names}) for r in data["rows"]],
            aggregates=[AggregateRow(**{k: v for k, v in a.items() if k in agg_names}) for a in data["aggregates"]],
            errors=list(data.get("errors", [])),
            infeasible_scenarios=list(data.get("infeasible_scenarios", [])),
            monotonicity_violations=list(data.get("monotonicity_violations", [])),
        )


def run_one(config: ExperimentConfig, scenario: DeadlineScenario, z: float, seed: int) -> RunRow:
    """One workload, planned and simulated under both DV-DVFS and the baseline."""
    server = config.server_for(scenario)
    spec = config.workload.spec_for(z, seed, config.reference_deadline(scenario), server.f_max)
    blocks = generate_blocks(spec)
    plan = plan_slots(scenario.deadline, spec.n_blocks, config.error_margin)
    mode = config.energy_mode
    dvfs = schedule_dv_dvfs(blocks, plan, server, config.sampling_fraction, mode, seed)
    dvo = schedule_dvo(blocks, plan, server, mode)
    r_dvfs = execute(dvfs, blocks, server, mode)
    r_dvo = execute(dvo, blocks, server, mode)
    cmp = compare(r_dvfs, r_dvo)
    return RunRow(
        scenario=scenario.label,
        z=float(z),
        seed=int(seed),
        ec_dvfs=r_dvfs.total_energy,
        ec_dvo=r_dvo.total_energy,
        ft_dvfs=r_dvfs.finish_time,
        ft_dvo=r_dvo.finish_time,
        savings_pct=cmp.energy_savings_pct,
        time_increase_pct=cmp.time_increase_pct,
        deadline_met_dvfs=r_dvfs.deadline_met,
        deadline_met_dvo=r_dvo.deadline_met,
        deadline=scenario.deadline,
        n_blocks=len(blocks),
        n_at_risk=sum(a.at_risk for a in dvfs.assignments),
        feasible_dvfs=dvfs.feasible,
        predicted_energy_dvfs=dvfs.total_predicted_energy,
        predicted_dynamic_energy_dvfs=dvfs.total_predicted_dynamic_energy,
        p_idle=server.p_idle,
    )


def _run_task(task):
    config, scenario, z, seed = task
    try:
        return run_one(config, scenario, z, seed)
    except VarietyDVFSError as exc:
        return f"scenario={scenario.label} z={z:g} seed={seed}: {type(exc).__name__}: {exc}"


def _run_all(config: ExperimentConfig, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [_run_task(t) for t in tasks]


def _mean(values) -> float:
    values = list(values)
    return math.fsum(values) / len(values)


def aggregate(rows) -> list[AggregateRow]:
    """Per-(scenario, z) means, normalized to the baseline's means."""
    groups: dict[tuple[str, float], list[RunRow]] = {}
    for r in rows:
        groups.setdefault((r.scenario, r.z), []).append(r)
    out = []
    for (scenario, z), rs in groups.items():
        ec_dvfs = _mean(r.ec_dvfs for r in rs)
        ec_dvo = _mean(r.ec_dvo for r in rs)
        ft_dvfs = _mean(r.ft_dvfs for r in rs)
        ft_dvo = _mean(r.ft_dvo for r in rs)
        out.append(
            AggregateRow(
                scenario=scenario,
                z=z,
                n_runs=len(rs),
                mean_ec_dvfs=ec_dvfs,
                mean_ec_dvo=ec_dvo,
                mean_ft_dvfs=ft_dvfs,
                mean_ft_dvo=ft_dvo,
                norm_energy_dvfs=ec_dvfs / ec_dvo,
                norm_energy_dvo=ec_dvo / ec_dvo,
                norm_time_dvfs=ft_dvfs / ft_dvo,
                norm_time_dvo=ft_dvo / ft_dvo,
                mean_savings_pct=_mean(r.savings_pct for r in rs),
                mean_time_increase_pct=_mean(r.time_increase_pct for r in rs),
                deadline_met_rate_dvfs=_mean(float(r.deadline_met_dvfs) for r in rs),
                deadline_met_rate_dvo=_mean(float(r.deadline_met_dvo) for r in rs),
            )
        )
    return out


def _entirely_infeasible(config: ExperimentConfig, rows) -> list[str]:
    """Scenarios in which no block of any run fit its slot."""
    by_scenario: dict[str, list[RunRow]] = {}
    for r in rows:
        by_scenario.setdefault(r.scenario, []).append(r)
    return [
        s.label
        for s in config.deadline_scenarios
        if s.label in by_scenario and all(r.n_at_risk == r.n_blocks for r in by_scenario[s.label])
    ]


def _sweep(config: ExperimentConfig, kind: str, zs, jobs: int) -> SweepReport:
    tasks = [(config, s, z, seed) for s in config.deadline_scenarios for z in zs for seed in config.seeds]
    report = SweepReport(kind=kind, energy_mode=config.energy_mode.value)
    for result in _run_all(config, tasks, jobs):
        if isinstance(result, str):
            report.errors.append(result)
        else:
            report.rows.append(result)
    report.aggregates = aggregate(report.rows)
    report.infeasible_scenarios = _entirely_infeasible(config, report.rows)
    return report


def run_comparison(config: ExperimentConfig, jobs: int = 1) -> SweepReport:
    return _sweep(config, "compare", [config.workload.z], jobs)


def run_variety_sweep(config: ExperimentConfig, jobs: int = 1) -> SweepReport:
    if not config.z_sweep:
        raise InvalidParameterError("z_sweep must not be empty")
    return _sweep(config, "variety-sweep", list(config.z_sweep), jobs)


def horizon_energy(row: RunRow, horizon: float, mode: EnergyMode) -> float:
    """Predicted DV-DVFS energy of a run over a common wall-clock window."""
    if mode is EnergyMode.BUSY_TIME_LITERAL:
        return row.predicted_energy_dvfs
    return row.predicted_dynamic_energy_dvfs + horizon * row.p_idle


def check_deadline_monotonicity(config: ExperimentConfig, rows) -> list[str]:
    """Within each scenario group, a looser deadline must never cost more.

    Energies are compared over the group's loosest deadline so that the idle
    draw of the extra wall-clock time counts against every scenario alike.
    """
    violations = []
    index = {(r.scenario, r.z, r.seed): r for r in rows}
    groups: dict[str, list[DeadlineScenario]] = {}
    for s in config.deadline_scenarios:
        groups.setdefault(s.group, []).append(s)
    zs = sorted({r.z for r in rows})
    for group, scenarios in groups.items():
        ordered = sorted(scenarios, key=lambda s: s.deadline)
        horizon = ordered[-1].deadline
        for z in zs:
            for seed in config.seeds:
                for tighter, looser in zip(ordered, ordered[1:]):
                    a, b = index.get((tighter.label, z, seed)), index.get((looser.label, z, seed))
                    if a is None or b is None:
                        continue
                    e_tight = horizon_energy(a, horizon, config.energy_mode)
                    e_loose = horizon_energy(b, horizon, config.energy_mode)
                    if e_loose > e_tight:
                        violations.append(
                            f"{looser.label} ({e_loose!r} J) > {tighter.label} ({e_tight!r} J) at z={z:g} seed={seed}"
                        )
    return violations


def run_deadline_sweep(config: ExperimentConfig, jobs: int = 1) -> SweepReport:
    if len(config.deadline_scenarios) < 2:
        raise InvalidParameterError("deadline sweep needs at least two deadline scenarios")
    report = _sweep(config, "deadline-sweep", [config.workload.z], jobs)
    report.monotonicity_violations = check_deadline_monotonicity(config, report.rows)
    return report


def raise_for_errors(report: SweepReport) -> None:
    if report.errors:
        raise RunError("; ".join(report.errors))
