import pytest

from varietydvfs.config import (
    BENCHMARK_DEADLINES,
    DeadlineScenario,
    load_config,
    parse_seeds,
    preset_path,
)
from varietydvfs.errors import ConfigNotFoundError, ConfigParseError, ConfigValidationError
from varietydvfs.power import EnergyMode


def write(tmp_path, text, name="exp.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


MINIMAL = "deadline_scenarios:\n  - {label: only, deadline: 100}\n"


def test_minimal_config_gets_defaults(tmp_path):
    cfg = load_config(write(tmp_path, MINIMAL))
    assert cfg.error_margin == 0.05
    assert cfg.sampling_fraction == 0.01
    assert cfg.energy_mode is EnergyMode.SLOT_AVERAGE
    assert cfg.server.curve.exponent_alpha == 3.0
    assert cfg.server.frequencies == (1.6, 2.8)
    assert cfg.deadline_scenarios == (DeadlineScenario("only", 100.0),)
    assert len(cfg.seeds) == 20


@pytest.mark.parametrize(
    "snippet, field",
    [
        ("error_margin: 1.2\n", "error_margin"),
        ("sampling_fraction: 0\n", "sampling_fraction"),
        ("energy_mode: watts\n", "energy_mode"),
        ("workload: {n_blocks: 0}\n", "workload.n_blocks"),
        ("server: {frequencies_ghz: [2.8, 1.6]}\n", "server.frequencies_ghz[1]"),
        ("server: {u_full: 1.5}\n", "server.u_full"),
        ("seeds: []\n", "seeds"),
        ("z_sweep: [-1]\n", "z_sweep[0]"),
        ("bogus: 1\n", "bogus"),
        ("benchmarks: [sort]\n", "benchmarks[0]"),
    ],
)
def test_validation_names_field(tmp_path, snippet, field):
    with pytest.raises(ConfigValidationError) as info:
        load_config(write(tmp_path, MINIMAL + snippet))
    assert info.value.field == field
    assert field in str(info.value)


def test_bad_scenario_field(tmp_path):
    with pytest.raises(ConfigValidationError) as info:
        load_config(write(tmp_path, "deadline_scenarios:\n  - {label: a, deadline: 10}\n  - {label: b, deadline: -1}\n"))
    assert info.value.field == "deadline_scenarios[1].deadline"


def test_no_scenarios(tmp_path):
    with pytest.raises(ConfigValidationError) as info:
        load_config(write(tmp_path, "error_margin: 0.1\n"))
    assert info.value.field == "deadline_scenarios"


def test_missing_file(tmp_path):
    with pytest.raises(ConfigNotFoundError):
        load_config(tmp_path / "nope.yaml")


def test_parse_error(tmp_path):
    with pytest.raises(ConfigParseError):
        load_config(write(tmp_path, "deadline_scenarios: [\n"))


def test_error_kinds_are_distinct():
    assert len({ConfigNotFoundError, ConfigParseError, ConfigValidationError}) == 3
    assert not issubclass(ConfigParseError, ConfigValidationError)


def test_benchmark_presets(tmp_path):
    cfg = load_config(write(tmp_path, "benchmarks: [wordcount, grep, inverted-index, tpc, amazon]\n"))
    pairs = {}
    for s in cfg.deadline_scenarios:
        pairs.setdefault(s.group, []).append(s.deadline)
    assert pairs == {
        "wordcount": [1350.0, 1500.0],
        "grep": [670.0, 730.0],
        "inverted-index": [27000.0, 30000.0],
        "tpc": [1250.0, 1400.0],
        "amazon": [1150.0, 1350.0],
    }
    u = {s.group: s.u_full for s in cfg.deadline_scenarios}
    assert (u["wordcount"], u["grep"], u["inverted-index"]) == (0.68, 0.45, 0.82)
    assert len(BENCHMARK_DEADLINES) == 5


def test_builtin_preset_loads():
    cfg = load_config("builtin:benchmarks")
    assert len(cfg.deadline_scenarios) == 10
    assert cfg.z_sweep == (0.0, 1.0, 2.0)
    assert cfg.seeds == tuple(range(20))
    assert preset_path("benchmarks").is_file()


def test_relative_sizing_uses_group_firm_deadline():
    cfg = load_config("builtin:benchmarks")
    tight, firm = cfg.deadline_scenarios[:2]
    assert cfg.reference_deadline(tight) == cfg.reference_deadline(firm) == 1500.0
    spec = cfg.workload.spec_for(1.0, 0, 1500.0, 2.8)
    slot_cycles = 1500.0 / 8 * 2.8e9
    assert spec.cycles_per_miss * spec.records_per_block == pytest.approx(0.46 * slot_cycles)


def test_table_csv_relative_to_config(tmp_path):
    (tmp_path / "curve.csv").write_text("1.0,120\n2.0,150\n3.0,210\n")
    cfg = load_config(write(tmp_path, MINIMAL + "server: {frequencies_ghz: [1.0, 3.0], table_csv: curve.csv}\n"))
    assert cfg.server.curve.table == ((1.0, 120.0), (2.0, 150.0), (3.0, 210.0))
    with pytest.raises(ConfigValidationError) as info:
        load_config(write(tmp_path, MINIMAL + "server: {frequencies_ghz: [1.0, 3.5], table_csv: curve.csv}\n", "b.yaml"))
    assert info.value.field == "server.table_csv"


def test_overrides():
    cfg = load_config("builtin:benchmarks").with_overrides(seeds=[4, 5], energy_mode="busy-literal", output_dir="x")
    assert cfg.seeds == (4, 5) and cfg.energy_mode is EnergyMode.BUSY_TIME_LITERAL and cfg.output_dir == "x"


@pytest.mark.parametrize("text, seeds", [("0-3", (0, 1, 2, 3)), ("1,2,5", (1, 2, 5)), ("0-1,7", (0, 1, 7))])
def test_parse_seeds(text, seeds):
    assert parse_seeds(text) == seeds


def test_parse_seeds_rejects_junk():
    with pytest.raises(ConfigValidationError):
        parse_seeds("a,b")


def test_unsigned_exponent_numbers(tmp_path):
    cfg = load_config(write(tmp_path, MINIMAL + "workload: {cycles_per_hit: 2.0e9, cycles_per_miss: 1.0e9}\n"))
    assert cfg.workload.cycles_per_hit == 2e9
    with pytest.raises(ConfigValidationError) as info:
        load_config(write(tmp_path, MINIMAL + "error_margin: lots\n", "b.yaml"))
    assert info.value.field == "error_margin"
