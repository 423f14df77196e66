import pytest

from varietydvfs.config import DeadlineScenario, ExperimentConfig, WorkloadConfig, load_config
from varietydvfs.errors import InvalidParameterError
from varietydvfs.experiment import (
    aggregate,
    run_comparison,
    run_deadline_sweep,
    run_one,
    run_variety_sweep,
)
from varietydvfs.power import ServerModel


@pytest.fixture(scope="module")
def preset():
    return load_config("builtin:benchmarks")


def small(preset, **kw):
    return preset.with_overrides(seeds=kw.pop("seeds", range(5)))


def test_uniform_tight_budget_saves_nothing():
    # uniform block work 0.6 of a slot at 2.8 GHz; 1.6 GHz would need 1.05
    cfg = ExperimentConfig(
        workload=WorkloadConfig(n_blocks=4, records_per_block=1000, total_hit_records=0, z=0.0, base_fill=0.6, hit_fill=0.0),
        server=ServerModel(),
        deadline_scenarios=(DeadlineScenario("tight", 100.0),),
        seeds=(0,),
    )
    report = run_comparison(cfg)
    assert [r.savings_pct for r in report.rows] == [0.0]
    assert report.aggregates[0].norm_energy_dvfs == 1.0


def test_variety_sweep_z0_only_fmax():
    cfg = ExperimentConfig(
        workload=WorkloadConfig(n_blocks=4, records_per_block=100_000, total_hit_records=40_000, base_fill=0.5, hit_fill=0.3),
        server=ServerModel(),
        deadline_scenarios=(DeadlineScenario("d", 100.0),),
        z_sweep=(0.0,),
        seeds=(0, 1, 2),
    )
    # block work is 0.575 slot at 2.8 GHz, about 1.006 slot at 1.6 GHz
    report = run_variety_sweep(cfg)
    assert all(a.norm_energy_dvfs == 1.0 for a in report.aggregates)


def test_skewed_firm_mean_savings_positive(preset):
    cfg = preset.with_overrides(seeds=range(20))
    report = run_variety_sweep(
        ExperimentConfig(**{**cfg.__dict__, "z_sweep": (2.0,), "deadline_scenarios": cfg.deadline_scenarios[:2]})
    )
    firm = [a for a in report.aggregates if a.scenario == "wordcount/firm"][0]
    assert firm.mean_savings_pct > 0


def test_row_count(preset):
    cfg = small(preset)
    report = run_variety_sweep(cfg)
    assert len(report.rows) == len(cfg.z_sweep) * len(cfg.seeds) * len(cfg.deadline_scenarios)
    assert len(report.aggregates) == len(cfg.z_sweep) * len(cfg.deadline_scenarios)


def test_dvo_meets_deadline_when_every_block_fits(preset):
    cfg = small(preset)
    for row in run_variety_sweep(cfg).rows:
        scenario = next(s for s in cfg.deadline_scenarios if s.label == row.scenario)
        server = cfg.server_for(scenario)
        spec = cfg.workload.spec_for(row.z, row.seed, cfg.reference_deadline(scenario), server.f_max)
        from varietydvfs.workload import generate_blocks, true_cycles

        ts = scenario.deadline / spec.n_blocks
        if all(true_cycles(b) / (server.f_max * 1e9) <= ts for b in generate_blocks(spec)):
            assert row.deadline_met_dvo


def test_normalization_exact(preset):
    report = run_variety_sweep(small(preset))
    for a in report.aggregates:
        assert a.norm_energy_dvo == 1.0 and a.norm_time_dvo == 1.0
        assert abs(a.norm_energy_dvfs - a.mean_ec_dvfs / a.mean_ec_dvo) <= 1e-12
        assert abs(a.norm_time_dvfs - a.mean_ft_dvfs / a.mean_ft_dvo) <= 1e-12


def test_deadline_sweep_checks_monotonicity(preset):
    report = run_deadline_sweep(small(preset))
    assert report.monotonicity_violations == []
    assert report.ok


def test_deadline_sweep_equal_deadlines_identical():
    cfg = ExperimentConfig(
        workload=WorkloadConfig(),
        server=ServerModel(),
        deadline_scenarios=(DeadlineScenario("tight", 1000.0), DeadlineScenario("firm", 1000.0)),
        seeds=(0, 1),
    )
    report = run_deadline_sweep(cfg)
    by = {(r.scenario, r.seed): r for r in report.rows}
    for seed in (0, 1):
        a, b = by[("tight", seed)], by[("firm", seed)]
        assert (a.ec_dvfs, a.ec_dvo, a.ft_dvfs) == (b.ec_dvfs, b.ec_dvo, b.ft_dvfs)


def test_deadline_sweep_needs_two_scenarios():
    cfg = ExperimentConfig(WorkloadConfig(), ServerModel(), (DeadlineScenario("x", 10.0),))
    with pytest.raises(InvalidParameterError):
        run_deadline_sweep(cfg)


def test_hopeless_scenario_flagged():
    cfg = ExperimentConfig(
        workload=WorkloadConfig(n_blocks=4, records_per_block=1000, total_hit_records=0,
                                cycles_per_hit=1e9, cycles_per_miss=1e9),
        server=ServerModel(),
        deadline_scenarios=(DeadlineScenario("impossible", 10.0), DeadlineScenario("easy", 1e5)),
        seeds=(0,),
    )
    report = run_deadline_sweep(cfg)
    assert report.infeasible_scenarios == ["impossible"]
    row = next(r for r in report.rows if r.scenario == "impossible")
    assert row.n_at_risk == row.n_blocks and not row.feasible_dvfs
    assert not report.ok


def test_run_errors_carry_context():
    # zipf skew overflows rank 1 -> recorded per run, not raised
    cfg = ExperimentConfig(
        workload=WorkloadConfig(n_blocks=4, records_per_block=10, total_hit_records=40, z=2.0),
        server=ServerModel(),
        deadline_scenarios=(DeadlineScenario("s", 100.0),),
        seeds=(3,),
    )
    report = run_comparison(cfg)
    assert report.rows == [] and len(report.errors) == 1
    assert "scenario=s" in report.errors[0] and "seed=3" in report.errors[0]
    assert "InfeasibleSkewError" in report.errors[0]


def test_parallel_matches_serial(preset):
    cfg = small(preset, seeds=range(3))
    assert run_variety_sweep(cfg, jobs=2).to_dict() == run_variety_sweep(cfg, jobs=1).to_dict()


def test_run_one_deterministic(preset):
    s = preset.deadline_scenarios[1]
    assert run_one(preset, s, 2.0, 11) == run_one(preset, s, 2.0, 11)


def test_aggregate_empty():
    assert aggregate([]) == []
