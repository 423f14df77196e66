"""Deadline slots, block sampling and per-block frequency selection.

The deadline is cut into equal slots, one per block, each with a reserved
tail (the error margin). Every block is sampled to estimate its work; the
estimate plus its 95% confidence half-width is the work bound used to pick
the cheapest frequency that still fits the slot's usable budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidParameterError
from .power import GHZ, EnergyMode, ServerModel, p_full_at
from .workload import DataBlock, record_costs, true_cycles

Z_95 = 1.96
DEFAULT_SAMPLING_FRACTION = 0.01
DEFAULT_ERROR_MARGIN = 0.05

_SAMPLING_STREAM = 2


@dataclass(frozen=True)
class SlotPlan:
    deadline: float
    n_slots: int
    slot_duration: float
    error_margin: float
    usable_budget: float

    def slot_start(self, i: int) -> float:
        return i * self.slot_duration

    def slot_end(self, i: int) -> float:
        return self.deadline if i == self.n_slots - 1 else (i + 1) * self.slot_duration


@dataclass(frozen=True)
class BlockSample:
    block_id: int
    sampled_record_count: int
    sampled_cost_mean: float
    sampled_cost_stddev: float
    sample_fraction: float
    # exactly rounded sum of the sampled costs
    sampled_cost_total: float


@dataclass(frozen=True)
class BlockEstimate:
    block_id: int
    cycles_hat: float
    ci95_half_width: float
    is_exact: bool

    @property
    def work_bound(self) -> float:
        return self.cycles_hat + self.ci95_half_width


@dataclass(frozen=True)
class FrequencyAssignment:
    block_id: int
    frequency: float
    predicted_pt: float
    predicted_energy: float
    at_risk: bool
    predicted_dynamic_energy: float = 0.0


@dataclass(frozen=True)
class Schedule:
    plan: SlotPlan
    assignments: tuple[FrequencyAssignment, ...]
    total_predicted_pt: float
    total_predicted_energy: float
    feasible: bool
    total_predicted_dynamic_energy: float = 0.0

    def energy_over_horizon(self, horizon: float, server: ServerModel, mode=EnergyMode.SLOT_AVERAGE) -> float:
        """Predicted energy over a fixed wall-clock window of ``horizon`` seconds.

        Lets schedules planned for different deadlines be compared on equal
        footing: in slot-average mode the server draws idle power for the
        whole window, whatever the deadline was.
        """
        if EnergyMode.parse(mode) is EnergyMode.BUSY_TIME_LITERAL:
            return self.total_predicted_energy
        return self.total_predicted_dynamic_energy + horizon * server.p_idle


def plan_slots(deadline: float, n_slots: int, error_margin: float = DEFAULT_ERROR_MARGIN) -> SlotPlan:
    if not deadline > 0:
        raise InvalidParameterError(f"deadline must be > 0, got {deadline}")
    if n_slots < 1:
        raise InvalidParameterError(f"n_slots must be >= 1, got {n_slots}")
    if not 0 <= error_margin < 1:
        raise InvalidParameterError(f"error_margin must lie in [0, 1), got {error_margin}")
    ts = deadline / n_slots
    return SlotPlan(deadline, n_slots, ts, error_margin, ts * (1 - error_margin))


def block_rng(seed: int, block_id: int) -> np.random.Generator:
    """Per-block sampling stream, independent of evaluation order."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFF, seed >> 32 & 0xFFFFFFFF, _SAMPLING_STREAM, block_id])
    return np.random.default_rng(ss)


def sample_block(block: DataBlock, fraction: float = DEFAULT_SAMPLING_FRACTION, seed: int = 0) -> BlockSample:
    """Uniform sample without replacement of ``ceil(fraction * N)`` records."""
    if not 0 < fraction <= 1:
        raise InvalidParameterError(f"sampling fraction must lie in (0, 1], got {fraction}")
    n_total = block.record_count
    n = min(n_total, max(1, math.ceil(fraction * n_total)))
    if n == n_total:
        index = np.arange(n_total)
    else:
        index = block_rng(seed, block.id).choice(n_total, size=n, replace=False)
    costs = record_costs(block, index)
    total = math.fsum(costs)
    std = float(np.std(costs, ddof=1)) if n > 1 else 0.0
    return BlockSample(block.id, n, total / n, std, n / n_total, total)


def estimate_block(sample: BlockSample, record_count: int) -> BlockEstimate:
    """Scale the sample to the block with a finite-population-corrected 95% CI."""
    if record_count < 1:
        raise InvalidParameterError("record_count must be >= 1")
    n = sample.sampled_record_count
    if n >= record_count:
        return BlockEstimate(sample.block_id, sample.sampled_cost_total, 0.0, True)
    cycles_hat = sample.sampled_cost_total * (record_count / n)
    fpc = math.sqrt((record_count - n) / (record_count - 1))
    half = Z_95 * sample.sampled_cost_stddev / math.sqrt(n) * record_count * fpc
    return BlockEstimate(sample.block_id, cycles_hat, half, False)


def predicted_pt(cycles: float, f: float) -> float:
    """Seconds to retire ``cycles`` at ``f`` GHz."""
    if cycles < 0:
        raise InvalidParameterError("cycles must be >= 0")
    if not f > 0:
        raise InvalidParameterError("frequency must be > 0")
    return cycles / (f * GHZ)


def _frequency_tables(server: ServerModel):
    freqs_hz = [f * GHZ for f in server.frequencies]
    pfull = [p_full_at(server.curve, f) for f in server.frequencies]
    return freqs_hz, pfull


def _assign(block_ids, work, plan: SlotPlan, server: ServerModel, mode: EnergyMode):
    freqs_hz, pfull = _frequency_tables(server)
    idx, pts, energies, risk = kernels.select_frequencies(
        work,
        plan.usable_budget,
        plan.slot_duration,
        freqs_hz,
        pfull,
        server.p_idle,
        server.u_full,
        mode is EnergyMode.SLOT_AVERAGE,
    )
    out = []
    for bid, j, pt, e, r in zip(block_ids, idx, pts, energies, risk):
        j = int(j)
        dyn = float(pt) * (pfull[j] - server.p_idle) * server.u_full
        out.append(FrequencyAssignment(bid, server.frequencies[j], float(pt), float(e), bool(r), dyn))
    return out


def select_frequency(estimate: BlockEstimate, plan: SlotPlan, server: ServerModel, mode=EnergyMode.SLOT_AVERAGE) -> FrequencyAssignment:
    return _assign([estimate.block_id], [estimate.work_bound], plan, server, EnergyMode.parse(mode))[0]


def _build_schedule(plan: SlotPlan, assignments) -> Schedule:
    return Schedule(
        plan=plan,
        assignments=tuple(assignments),
        total_predicted_pt=math.fsum(a.predicted_pt for a in assignments),
        total_predicted_energy=math.fsum(a.predicted_energy for a in assignments),
        feasible=not any(a.at_risk for a in assignments),
        total_predicted_dynamic_energy=math.fsum(a.predicted_dynamic_energy for a in assignments),
    )


def _check_blocks(blocks, plan: SlotPlan):
    if len(blocks) != plan.n_slots:
        raise InvalidParameterError(f"{len(blocks)} blocks for {plan.n_slots} slots")


def estimate_blocks(blocks, sampling_fraction: float = DEFAULT_SAMPLING_FRACTION, seed: int = 0) -> list[BlockEstimate]:
    return [estimate_block(sample_block(b, sampling_fraction, seed), b.record_count) for b in blocks]


def schedule_dv_dvfs(
    blocks,
    plan: SlotPlan,
    server: ServerModel,
    sampling_fraction: float = DEFAULT_SAMPLING_FRACTION,
    mode=EnergyMode.SLOT_AVERAGE,
    seed: int = 0,
) -> Schedule:
    """Sample every block once, then give each slot its minimum-energy feasible frequency.

    Block i runs in slot i. A block whose work bound fits no frequency gets
    the highest one and is flagged ``at_risk``; the schedule is then
    infeasible but still usable.
    """
    _check_blocks(blocks, plan)
    estimates = estimate_blocks(blocks, sampling_fraction, seed)
    assignments = _assign(
        [e.block_id for e in estimates], [e.work_bound for e in estimates], plan, server, EnergyMode.parse(mode)
    )
    return _build_schedule(plan, assignments)


def schedule_dvo(blocks, plan: SlotPlan, server: ServerModel, mode=EnergyMode.SLOT_AVERAGE) -> Schedule:
    """Variety-oblivious baseline: every block at the highest frequency.

    No sampling; predicted times use the true block work so the baseline's
    report reflects what it actually costs.
    """
    _check_blocks(blocks, plan)
    mode = EnergyMode.parse(mode)
    f = server.f_max
    pf = p_full_at(server.curve, f)
    out = []
    for b in blocks:
        pt = predicted_pt(true_cycles(b), f)
        if mode is EnergyMode.SLOT_AVERAGE:
            e = pt * (pf - server.p_idle) * server.u_full + max(pt, plan.slot_duration) * server.p_idle
        else:
            e = pt * ((pf - server.p_idle) * server.u_full + server.p_idle)
        dyn = pt * (pf - server.p_idle) * server.u_full
        out.append(FrequencyAssignment(b.id, f, pt, e, pt > plan.usable_budget, dyn))
    return _build_schedule(plan, out)
