"""
Tests for configuration loading and overrides.
"""

import pytest
import yaml

from acr.config import DEFAULTS, ConfigManager, config_manager, get_analysis_config


def test_defaults_without_a_file(tmp_path):
    manager = ConfigManager(str(tmp_path / "missing.yaml"))
    assert manager.load_config() == {}
    assert manager.get_analysis_config() == {"seed": 0, "samples": 64, "sample_max": 97}
    tolerances = manager.get_tolerance_config()
    assert tolerances["rank"] == DEFAULTS["tolerances"]["rank"]
    assert tolerances["newton_max_iter"] == 50
    assert manager.get_config("no.such.key", "fallback") == "fallback"


def test_file_values_override_defaults(tmp_path):
    path = tmp_path / "acr_scan.yaml"
    path.write_text("analysis:\n  samples: 8\ntolerances:\n  rank: 1.0e-6\n")
    manager = ConfigManager(str(path))
    assert manager.get_analysis_config()["samples"] == 8
    assert manager.get_analysis_config()["seed"] == 0
    assert manager.get_tolerance_config()["rank"] == 1e-6


def test_overrides_win_and_clear(tmp_path):
    path = tmp_path / "acr_scan.yaml"
    path.write_text("analysis:\n  seed: 3\n")
    manager = ConfigManager(str(path))
    manager.set_override("analysis.seed", 7)
    assert manager.get_analysis_config()["seed"] == 7
    manager.clear_overrides()
    assert manager.get_analysis_config()["seed"] == 3


def test_reload_picks_up_changes(tmp_path):
    path = tmp_path / "acr_scan.yaml"
    path.write_text("analysis:\n  samples: 2\n")
    manager = ConfigManager(str(path))
    assert manager.get_config("analysis.samples") == 2
    path.write_text("analysis:\n  samples: 5\n")
    assert manager.get_config("analysis.samples") == 2
    manager.reload()
    assert manager.get_config("analysis.samples") == 5


def test_malformed_file_raises(tmp_path):
    path = tmp_path / "acr_scan.yaml"
    path.write_text("analysis: [unclosed\n")
    with pytest.raises(yaml.YAMLError):
        ConfigManager(str(path)).load_config()


def test_color_environment_variable(tmp_path, monkeypatch):
    manager = ConfigManager(str(tmp_path / "missing.yaml"))
    monkeypatch.delenv("ACR_SCAN_COLOR", raising=False)
    assert manager.get_environment_config() == {"log_level": "WARNING", "color": True}
    monkeypatch.setenv("ACR_SCAN_COLOR", "0")
    assert manager.get_environment_config()["color"] is False


def test_global_manager_overrides_reach_helpers():
    config_manager.set_override("analysis.samples", 3)
    assert get_analysis_config()["samples"] == 3
