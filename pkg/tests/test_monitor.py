import pytest

from config import ClusteringConfig, config
from monitor import RunMonitor, RunRecord, summarize_records


def make_record(i, ratio, single=10.0):
    return RunRecord(seed_key=f"0/{i}", final_cost=ratio, baseline_cost=1.0, ratio=ratio,
                     eps_spent=1.0, delta_spent=1e-6, k_prime=4, d_prime=2,
                     single_center_cost=single)


def test_summary_fractions():
    records = [make_record(0, 1.5), make_record(1, 2.5), make_record(2, 4.0, single=3.0)]
    summary = summarize_records(records, ratio_threshold=3.0)
    assert summary['runs'] == 3
    assert summary['fraction_within_threshold'] == pytest.approx(2 / 3)
    assert summary['fraction_beats_single_center'] == pytest.approx(2 / 3)
    assert summary['ratio_max'] == 4.0
    assert summarize_records([]) == {'runs': 0}


def test_stage_timing_accumulates():
    monitor = RunMonitor()
    with monitor.stage("a"):
        pass
    with monitor.stage("a"):
        pass
    assert set(monitor.stage_seconds) == {"a"}
    assert monitor.stage_seconds["a"] >= 0.0


def test_update_config(monkeypatch):
    monkeypatch.setattr(ClusteringConfig, "GM_STEPS", ClusteringConfig.GM_STEPS)
    ClusteringConfig.update_config(GM_STEPS=50, NOT_A_KEY=1)
    assert config.GM_STEPS == 50
    assert not hasattr(ClusteringConfig, "NOT_A_KEY")
    assert config.get_config_dict()['GM_STEPS'] == 50
