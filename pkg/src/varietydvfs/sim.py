"""Execute a schedule against the true block work."""
from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .errors import DegenerateBaselineError, InvalidParameterError
from .planner import Schedule
from .power import GHZ, EnergyMode, ServerModel, p_full_at, total_energy
from .workload import true_cycles


@dataclass(frozen=True)
class BlockTrace:
    block_id: int
    frequency: float
    start_time: float
    actual_pt: float
    end_time: float
    slot_overrun: float
    actual_energy: float


@dataclass(frozen=True)
class SimulationResult:
    traces: tuple[BlockTrace, ...]
    finish_time: float
    total_energy: float
    deadline_met: bool
    mode: EnergyMode

    @property
    def busy_time(self) -> float:
        return sum(t.actual_pt for t in self.traces)


@dataclass(frozen=True)
class ComparisonReport:
    energy_savings_pct: float
    time_increase_pct: float
    both_met_deadline: bool


def execute(schedule: Schedule, blocks, server: ServerModel, mode=EnergyMode.SLOT_AVERAGE) -> SimulationResult:
    """Run blocks back to back on one server, block i no earlier than slot i.

    Actual times come from the true work, so estimation error shows up as
    slot overruns, which delay every later block. Slot-average energy
    charges idle power over ``[0, max(deadline, finish)]`` plus each block's
    dynamic energy; busy-literal charges busy power for busy time only.
    """
    mode = EnergyMode.parse(mode)
    plan = schedule.plan
    if len(blocks) != len(schedule.assignments):
        raise InvalidParameterError(f"{len(blocks)} blocks for {len(schedule.assignments)} assignments")
    for b, a in zip(blocks, schedule.assignments):
        if b.id != a.block_id:
            raise InvalidParameterError(f"block id {b.id} does not match assignment for block {a.block_id}")

    pf_cache = {}
    freqs_hz, pfull = [], []
    for a in schedule.assignments:
        if a.frequency not in pf_cache:
            pf_cache[a.frequency] = p_full_at(server.curve, a.frequency)
        freqs_hz.append(a.frequency * GHZ)
        pfull.append(pf_cache[a.frequency])

    starts, pts, ends, overruns, energies = kernels.run_timeline(
        [true_cycles(b) for b in blocks],
        freqs_hz,
        pfull,
        plan.slot_duration,
        plan.deadline,
        server.p_idle,
        server.u_full,
        mode is EnergyMode.SLOT_AVERAGE,
    )
    traces = tuple(
        BlockTrace(a.block_id, a.frequency, float(s), float(p), float(e), float(o), float(en))
        for a, s, p, e, o, en in zip(schedule.assignments, starts, pts, ends, overruns, energies)
    )
    finish = max((t.end_time for t in traces), default=0.0)
    return SimulationResult(
        traces=traces,
        finish_time=finish,
        total_energy=total_energy(t.actual_energy for t in traces),
        deadline_met=finish <= plan.deadline,
        mode=mode,
    )


def compare(dvfs: SimulationResult, dvo: SimulationResult) -> ComparisonReport:
    if not dvo.total_energy > 0 or not dvo.finish_time > 0:
        raise DegenerateBaselineError("baseline energy and finish time must both be > 0")
    return ComparisonReport(
        energy_savings_pct=100.0 * (dvo.total_energy - dvfs.total_energy) / dvo.total_energy,
        time_increase_pct=100.0 * (dvfs.finish_time - dvo.finish_time) / dvo.finish_time,
        both_met_deadline=dvfs.deadline_met and dvo.deadline_met,
    )
