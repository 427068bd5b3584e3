"""Tests for SimulationConfig domain configuration."""

import pytest
from pydantic import ValidationError

from home_meg.config.simulation import SimulationConfig


class TestSimulationConfigDefaults:
    """Tests for SimulationConfig default values."""

    def test_defaults(self):
        """Seed 0, 200 trials, stationary start, model-derived horizon."""
        config = SimulationConfig()
        assert config.seed == 0
        assert config.trials == 200
        assert config.horizon is None
        assert config.init_mode == "stationary"
        assert config.sweep_sources is False


class TestSimulationConfigEnvironment:
    """Tests for SimulationConfig environment variable overrides."""

    def test_trials_from_env(self, monkeypatch):
        """trials should load from HOMEMEG_TRIALS."""
        monkeypatch.setenv("HOMEMEG_TRIALS", "500")
        assert SimulationConfig().trials == 500

    def test_seed_from_env(self, monkeypatch):
        monkeypatch.setenv("HOMEMEG_SEED", "42")
        assert SimulationConfig().seed == 42

    def test_init_mode_normalized(self, monkeypatch):
        """'all:nd' is stored as 'all:ND'."""
        monkeypatch.setenv("HOMEMEG_INIT_MODE", "all:nd")
        assert SimulationConfig().init_mode == "all:ND"

    def test_snapshot_file_mode(self):
        assert SimulationConfig(init_mode=" file:runs/e0.json ").init_mode == "file:runs/e0.json"


class TestSimulationConfigValidation:
    def test_unknown_init_mode_rejected(self):
        with pytest.raises(ValidationError):
            SimulationConfig(init_mode="all:XX")

    def test_zero_trials_rejected(self):
        with pytest.raises(ValidationError):
            SimulationConfig(trials=0)
