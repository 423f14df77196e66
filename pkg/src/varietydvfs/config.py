"""Experiment configuration: YAML loading, defaults and validation.

Every validation failure raises ``ConfigValidationError`` naming the dotted
field path (``workload.n_blocks``, ``deadline_scenarios[1].deadline``).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import yaml

from .errors import ConfigNotFoundError, ConfigParseError, ConfigValidationError, VarietyDVFSError
from .planner import DEFAULT_ERROR_MARGIN, DEFAULT_SAMPLING_FRACTION
from .power import EnergyMode, PowerCurve, ServerModel, load_power_table
from .workload import WorkloadSpec, ZipfianParams, size_costs

# Average CPU usage per application at full load.
APPLICATION_UTILIZATION = {
    "wordcount": 0.68,
    "grep": 0.45,
    "inverted-index": 0.82,
}
# No published utilization for these two; the mean of the three above.
_UNPUBLISHED_UTILIZATION = round(sum(APPLICATION_UTILIZATION.values()) / 3, 4)

# (tight, firm) deadlines in seconds
BENCHMARK_DEADLINES = {
    "wordcount": (1350.0, 1500.0),
    "grep": (670.0, 730.0),
    "inverted-index": (27000.0, 30000.0),
    "tpc": (1250.0, 1400.0),
    "amazon": (1150.0, 1350.0),
}

BUILTIN_PREFIX = "builtin:"

# Slot-relative sizing used when a workload gives no per-record costs.
DEFAULT_BASE_FILL = 0.46
DEFAULT_HIT_FILL = 0.7


@dataclass(frozen=True)
class DeadlineScenario:
    label: str
    deadline: float
    group: str = "default"
    u_full: float | None = None


@dataclass(frozen=True)
class WorkloadConfig:
    """Workload template; a concrete ``WorkloadSpec`` is made per run.

    Per-record costs are either absolute (``cycles_per_hit``/``cycles_per_miss``)
    or sized from slot fill fractions of the scenario group's loosest deadline
    (``base_fill``/``hit_fill``), see ``workload.size_costs``. Absolute costs
    win when set; otherwise the fills default to ``DEFAULT_BASE_FILL`` and
    ``DEFAULT_HIT_FILL``.
    """

    n_blocks: int = 8
    records_per_block: int = 100_000
    total_hit_records: int = 100_000
    z: float = 1.0
    cycles_per_hit: float | None = None
    cycles_per_miss: float | None = None
    base_fill: float | None = None
    hit_fill: float | None = None
    jitter_sigma: float = 0.0
    shuffle: bool = False

    def spec_for(self, z: float, seed: int, reference_deadline: float, f_max: float) -> WorkloadSpec:
        if self.cycles_per_hit is not None or self.cycles_per_miss is not None:
            c_miss = self.cycles_per_miss or 0.0
            c_hit = c_miss if self.cycles_per_hit is None else self.cycles_per_hit
        else:
            c_hit, c_miss = size_costs(
                reference_deadline,
                self.n_blocks,
                self.records_per_block,
                self.total_hit_records,
                f_max,
                DEFAULT_BASE_FILL if self.base_fill is None else self.base_fill,
                DEFAULT_HIT_FILL if self.hit_fill is None else self.hit_fill,
            )
        return WorkloadSpec(
            n_blocks=self.n_blocks,
            records_per_block=self.records_per_block,
            total_hit_records=self.total_hit_records,
            cycles_per_hit=c_hit,
            cycles_per_miss=c_miss,
            zipf=ZipfianParams(z, self.n_blocks),
            rng_seed=seed,
            shuffle=self.shuffle,
            jitter_sigma=self.jitter_sigma,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    workload: WorkloadConfig
    server: ServerModel
    deadline_scenarios: tuple[DeadlineScenario, ...]
    error_margin: float = DEFAULT_ERROR_MARGIN
    sampling_fraction: float = DEFAULT_SAMPLING_FRACTION
    energy_mode: EnergyMode = EnergyMode.SLOT_AVERAGE
    z_sweep: tuple[float, ...] = (0.0, 1.0, 2.0)
    seeds: tuple[int, ...] = tuple(range(20))
    output_dir: str = "out"
    source: str | None = field(default=None, compare=False)

    def server_for(self, scenario: DeadlineScenario) -> ServerModel:
        if scenario.u_full is None:
            return self.server
        return replace(self.server, u_full=scenario.u_full)

    def reference_deadline(self, scenario: DeadlineScenario) -> float:
        return max(s.deadline for s in self.deadline_scenarios if s.group == scenario.group)

    def with_overrides(self, seeds=None, energy_mode=None, output_dir=None) -> "ExperimentConfig":
        changes = {}
        if seeds is not None:
            if not seeds:
                raise ConfigValidationError("seeds", "at least one seed is required")
            changes["seeds"] = tuple(seeds)
        if energy_mode is not None:
            changes["energy_mode"] = EnergyMode.parse(energy_mode)
        if output_dir is not None:
            changes["output_dir"] = str(output_dir)
        return replace(self, **changes)


def benchmark_scenarios(name: str) -> list[DeadlineScenario]:
    key = name.strip().lower().replace("_", "-").replace(" ", "-")
    if key == "invertedindex":
        key = "inverted-index"
    if key not in BENCHMARK_DEADLINES:
        raise KeyError(name)
    tight, firm = BENCHMARK_DEADLINES[key]
    u = APPLICATION_UTILIZATION.get(key, _UNPUBLISHED_UTILIZATION)
    return [
        DeadlineScenario(f"{key}/tight", tight, key, u),
        DeadlineScenario(f"{key}/firm", firm, key, u),
    ]


def preset_path(name: str) -> Path:
    ref = resources.files("varietydvfs") / "presets" / f"{name}.yaml"
    return Path(str(ref))


def parse_seeds(text: str) -> tuple[int, ...]:
    """``"0-19"``, ``"1,2,5"`` or a mix like ``"0-4,10"``."""
    seeds = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(-?\d+)\s*-\s*(-?\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if hi < lo:
                raise ConfigValidationError("seeds", f"empty range {part!r}")
            seeds.extend(range(lo, hi + 1))
        else:
            try:
                seeds.append(int(part))
            except ValueError:
                raise ConfigValidationError("seeds", f"not an integer: {part!r}") from None
    if not seeds:
        raise ConfigValidationError("seeds", "at least one seed is required")
    return tuple(seeds)


# --- validation helpers --------------------------------------------------------


def _number(value, path, *, lo=None, hi=None, lo_open=False, hi_open=False):
    # YAML 1.1 reads 1.0e9 (no exponent sign) as a string
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise ConfigValidationError(path, f"expected a number, got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError(path, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigValidationError(path, "must be finite")
    if lo is not None and (value <= lo if lo_open else value < lo):
        raise ConfigValidationError(path, f"must be {'>' if lo_open else '>='} {lo}, got {value}")
    if hi is not None and (value >= hi if hi_open else value > hi):
        raise ConfigValidationError(path, f"must be {'<' if hi_open else '<='} {hi}, got {value}")
    return value


def _integer(value, path, *, lo=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigValidationError(path, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigValidationError(path, f"must be >= {lo}, got {value}")
    return value


def _mapping(value, path):
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigValidationError(path, "expected a mapping")
    return value


def _reject_unknown(data, allowed, path):
    for key in data:
        if key not in allowed:
            where = f"{path}.{key}" if path else str(key)
            raise ConfigValidationError(where, "unknown field")


_WORKLOAD_KEYS = {
    "n_blocks", "records_per_block", "total_hit_records", "z", "cycles_per_hit",
    "cycles_per_miss", "base_fill", "hit_fill", "jitter_sigma", "shuffle",
}
_SERVER_KEYS = {"frequencies_ghz", "p_idle", "p_full", "anchor_ghz", "alpha", "table_csv", "u_full"}
_TOP_KEYS = {
    "workload", "server", "benchmarks", "deadline_scenarios", "error_margin",
    "sampling_fraction", "energy_mode", "z_sweep", "seeds", "output_dir",
}


def _parse_workload(data) -> WorkloadConfig:
    data = _mapping(data, "workload")
    _reject_unknown(data, _WORKLOAD_KEYS, "workload")
    d = WorkloadConfig()
    n_blocks = _integer(data.get("n_blocks", d.n_blocks), "workload.n_blocks", lo=1)
    records = _integer(data.get("records_per_block", d.records_per_block), "workload.records_per_block", lo=1)
    hits = _integer(data.get("total_hit_records", d.total_hit_records), "workload.total_hit_records", lo=0)
    if hits > n_blocks * records:
        raise ConfigValidationError("workload.total_hit_records", "exceeds n_blocks * records_per_block")
    z = _number(data.get("z", d.z), "workload.z", lo=0)
    absolute = "cycles_per_hit" in data or "cycles_per_miss" in data
    relative = "base_fill" in data or "hit_fill" in data
    if absolute and relative:
        raise ConfigValidationError("workload", "give either cycles_per_hit/cycles_per_miss or base_fill/hit_fill, not both")
    kw = {}
    if absolute:
        c_miss = _number(data.get("cycles_per_miss", 0.0), "workload.cycles_per_miss", lo=0)
        c_hit = _number(data.get("cycles_per_hit", c_miss), "workload.cycles_per_hit", lo=0)
        if c_hit < c_miss:
            raise ConfigValidationError("workload.cycles_per_hit", "must be >= cycles_per_miss")
        kw = {"cycles_per_hit": c_hit, "cycles_per_miss": c_miss}
    else:
        kw = {
            "base_fill": _number(data.get("base_fill", DEFAULT_BASE_FILL), "workload.base_fill", lo=0),
            "hit_fill": _number(data.get("hit_fill", DEFAULT_HIT_FILL), "workload.hit_fill", lo=0),
        }
    sigma = _number(data.get("jitter_sigma", 0.0), "workload.jitter_sigma", lo=0)
    shuffle = data.get("shuffle", False)
    if not isinstance(shuffle, bool):
        raise ConfigValidationError("workload.shuffle", "expected true or false")
    return WorkloadConfig(n_blocks, records, hits, z, jitter_sigma=sigma, shuffle=shuffle, **kw)


def _parse_server(data, base_dir: Path | None) -> ServerModel:
    data = _mapping(data, "server")
    _reject_unknown(data, _SERVER_KEYS, "server")
    freqs = data.get("frequencies_ghz", [1.6, 2.8])
    if not isinstance(freqs, list) or not freqs:
        raise ConfigValidationError("server.frequencies_ghz", "expected a non-empty list")
    freqs = [_number(f, f"server.frequencies_ghz[{i}]", lo=0, lo_open=True) for i, f in enumerate(freqs)]
    for i in range(1, len(freqs)):
        if freqs[i] <= freqs[i - 1]:
            raise ConfigValidationError(f"server.frequencies_ghz[{i}]", "frequencies must be strictly ascending")
    p_idle = _number(data.get("p_idle", 100.0), "server.p_idle", lo=0)
    p_full = _number(data.get("p_full", 200.0), "server.p_full", lo=0)
    if p_full <= p_idle:
        raise ConfigValidationError("server.p_full", "must exceed server.p_idle")
    anchor = _number(data.get("anchor_ghz", freqs[-1]), "server.anchor_ghz", lo=0, lo_open=True)
    alpha = _number(data.get("alpha", 3.0), "server.alpha", lo=0)
    u_full = _number(data.get("u_full", APPLICATION_UTILIZATION["wordcount"]), "server.u_full", lo=0, hi=1, lo_open=True)
    table = None
    if data.get("table_csv") is not None:
        path = Path(data["table_csv"])
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        if not path.exists():
            raise ConfigValidationError("server.table_csv", f"no such file: {path}")
        try:
            table = load_power_table(path)
        except VarietyDVFSError as exc:
            raise ConfigValidationError("server.table_csv", str(exc)) from None
    try:
        curve = PowerCurve(p_idle, anchor, p_full, alpha, table)
        server = ServerModel(tuple(freqs), curve, u_full)
    except VarietyDVFSError as exc:
        raise ConfigValidationError("server", str(exc)) from None
    if table is not None and (freqs[0] < table[0][0] or freqs[-1] > table[-1][0]):
        raise ConfigValidationError("server.table_csv", "table does not cover every configured frequency")
    return server


def _parse_scenarios(data) -> tuple[DeadlineScenario, ...]:
    scenarios = []
    benches = data.get("benchmarks") or []
    if not isinstance(benches, list):
        raise ConfigValidationError("benchmarks", "expected a list of benchmark names")
    for i, name in enumerate(benches):
        try:
            scenarios.extend(benchmark_scenarios(str(name)))
        except KeyError:
            raise ConfigValidationError(
                f"benchmarks[{i}]", f"unknown benchmark {name!r}; choose from {sorted(BENCHMARK_DEADLINES)}"
            ) from None
    explicit = data.get("deadline_scenarios") or []
    if not isinstance(explicit, list):
        raise ConfigValidationError("deadline_scenarios", "expected a list")
    for i, item in enumerate(explicit):
        path = f"deadline_scenarios[{i}]"
        item = _mapping(item, path)
        _reject_unknown(item, {"label", "deadline", "group", "u_full"}, path)
        if "label" not in item:
            raise ConfigValidationError(f"{path}.label", "required")
        if "deadline" not in item:
            raise ConfigValidationError(f"{path}.deadline", "required")
        u = item.get("u_full")
        scenarios.append(
            DeadlineScenario(
                label=str(item["label"]),
                deadline=_number(item["deadline"], f"{path}.deadline", lo=0, lo_open=True),
                group=str(item.get("group", "default")),
                u_full=None if u is None else _number(u, f"{path}.u_full", lo=0, hi=1, lo_open=True),
            )
        )
    if not scenarios:
        raise ConfigValidationError("deadline_scenarios", "at least one deadline scenario is required")
    labels = [s.label for s in scenarios]
    for i, label in enumerate(labels):
        if label in labels[:i]:
            raise ConfigValidationError("deadline_scenarios", f"duplicate label {label!r}")
    return tuple(scenarios)


def _parse_seeds(value) -> tuple[int, ...]:
    if value is None:
        return tuple(range(20))
    if isinstance(value, str):
        return parse_seeds(value)
    if isinstance(value, dict):
        _reject_unknown(value, {"range"}, "seeds")
        rng = value.get("range")
        if not (isinstance(rng, list) and len(rng) == 2):
            raise ConfigValidationError("seeds.range", "expected [start, stop)")
        lo, hi = _integer(rng[0], "seeds.range[0]"), _integer(rng[1], "seeds.range[1]")
        if hi <= lo:
            raise ConfigValidationError("seeds.range", "empty range")
        return tuple(range(lo, hi))
    if not isinstance(value, list) or not value:
        raise ConfigValidationError("seeds", "at least one seed is required")
    return tuple(_integer(s, f"seeds[{i}]") for i, s in enumerate(value))


def config_from_dict(data, base_dir: Path | None = None, source: str | None = None) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigValidationError("<root>", "config must be a mapping")
    _reject_unknown(data, _TOP_KEYS, "")
    workload = _parse_workload(data.get("workload"))
    server = _parse_server(data.get("server"), base_dir)
    scenarios = _parse_scenarios(data)
    margin = _number(data.get("error_margin", DEFAULT_ERROR_MARGIN), "error_margin", lo=0, hi=1, hi_open=True)
    fraction = _number(
        data.get("sampling_fraction", DEFAULT_SAMPLING_FRACTION), "sampling_fraction", lo=0, hi=1, lo_open=True
    )
    try:
        mode = EnergyMode.parse(data.get("energy_mode", "slot-average"))
    except VarietyDVFSError as exc:
        raise ConfigValidationError("energy_mode", str(exc)) from None
    z_sweep = data.get("z_sweep", [0.0, 1.0, 2.0])
    if not isinstance(z_sweep, list) or not z_sweep:
        raise ConfigValidationError("z_sweep", "expected a non-empty list")
    z_sweep = tuple(_number(z, f"z_sweep[{i}]", lo=0) for i, z in enumerate(z_sweep))
    seeds = _parse_seeds(data.get("seeds"))
    output_dir = str(data.get("output_dir", "out"))
    return ExperimentConfig(
        workload=workload,
        server=server,
        deadline_scenarios=scenarios,
        error_margin=margin,
        sampling_fraction=fraction,
        energy_mode=mode,
        z_sweep=z_sweep,
        seeds=seeds,
        output_dir=output_dir,
        source=source,
    )


def load_config(path) -> ExperimentConfig:
    """Load and validate a YAML experiment config.

    ``builtin:<name>`` loads a preset shipped with the package.
    """
    text_path = str(path)
    if text_path.startswith(BUILTIN_PREFIX):
        path = preset_path(text_path[len(BUILTIN_PREFIX):])
    path = Path(path)
    if not path.is_file():
        raise ConfigNotFoundError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"{path}: {exc}") from None
    if data is None:
        data = {}
    return config_from_dict(data, base_dir=path.parent, source=str(path))
