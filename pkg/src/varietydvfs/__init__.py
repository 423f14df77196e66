"""Deadline-constrained, data-variety-aware DVFS scheduling simulator."""
from .errors import (
    ConfigError,
    ConfigNotFoundError,
    ConfigParseError,
    ConfigValidationError,
    DegenerateBaselineError,
    InfeasibleSkewError,
    InvalidParameterError,
    OutOfRangeError,
    RunError,
    VarietyDVFSError,
)
from .planner import (
    BlockEstimate,
    BlockSample,
    FrequencyAssignment,
    Schedule,
    SlotPlan,
    estimate_block,
    plan_slots,
    predicted_pt,
    sample_block,
    schedule_dv_dvfs,
    schedule_dvo,
    select_frequency,
)
from .power import (
    EnergyMode,
    PowerCurve,
    ServerModel,
    busy_power,
    cpu_utilization,
    p_full_at,
    slot_energy,
    total_energy,
    utilize_factor,
)
from .sim import BlockTrace, ComparisonReport, SimulationResult, compare, execute
from .workload import DataBlock, WorkloadSpec, ZipfianParams, generate_blocks, true_cycles, zipf_weights

__version__ = "0.1.0"
