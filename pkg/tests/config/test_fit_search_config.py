"""Tests for FitSearchConfig domain configuration."""

import pytest
from pydantic import ValidationError

from home_meg.config.fitting import FitSearchConfig


class TestFitSearchConfigDefaults:
    """Tests for FitSearchConfig default values."""

    def test_grid_defaults(self):
        """A 7-point log grid over [1e-7, 1] per axis."""
        config = FitSearchConfig()
        assert config.grid_points == 7
        assert config.grid_low == 1e-7
        assert config.grid_high == 1.0

    def test_step_seconds_default(self):
        assert FitSearchConfig().step_seconds == 86.4


class TestFitSearchConfigEnvironment:
    def test_grid_points_from_env(self, monkeypatch):
        """grid_points should load from HOMEMEG_FIT_GRID_POINTS."""
        monkeypatch.setenv("HOMEMEG_FIT_GRID_POINTS", "5")
        assert FitSearchConfig().grid_points == 5

    def test_refine_starts_from_env(self, monkeypatch):
        monkeypatch.setenv("HOMEMEG_FIT_REFINE_STARTS", "2")
        assert FitSearchConfig().refine_starts == 2


class TestFitSearchConfigValidation:
    def test_single_grid_point_rejected(self):
        with pytest.raises(ValidationError):
            FitSearchConfig(grid_points=1)

    def test_grid_low_must_be_below_one(self):
        with pytest.raises(ValidationError):
            FitSearchConfig(grid_low=1.0)
