import pytest

from engine_config import SCAN_CONFIG, RunConfig, get_run_config


def test_overrides_win_and_none_is_ignored():
    config = get_run_config(limit=500, jobs=2, format=None)
    assert config.limit == 500
    assert config.jobs == 2
    assert config.format == SCAN_CONFIG["format"]


@pytest.mark.parametrize("overrides", [
    {"limit": 0},
    {"jobs": 0},
    {"c_max": 0},
    {"max_depth": 0},
    {"format": "yaml"},
])
def test_invalid_values_are_rejected(overrides):
    with pytest.raises(ValueError):
        get_run_config(**overrides)


def test_snapshot_keeps_only_result_affecting_values():
    snapshot = RunConfig(limit=100, jobs=3, format="json", cache_path="x.jsonl").snapshot()
    assert set(snapshot) == {"limit", "c_max", "max_depth", "escalate_limit"}
    assert snapshot["limit"] == 100
