"""CCDF fitting search configuration."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class FitSearchConfig(BaseSettings):
    """Grid + simplex search settings for parameter fitting.

    Environment variables:
        HOMEMEG_FIT_GRID_POINTS: Log-uniform grid points per axis
        HOMEMEG_FIT_REFINE_STARTS: Best grid starts refined by Nelder-Mead
        HOMEMEG_FIT_MAX_ITERATIONS: Simplex iterations per start
        HOMEMEG_FIT_STEP_SECONDS: Model time step in seconds
    """

    model_config = SettingsConfigDict(
        env_prefix="HOMEMEG_FIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    grid_points: int = Field(default=7, ge=2, description="Grid points per parameter axis")
    grid_low: float = Field(default=1e-7, gt=0.0, lt=1.0, description="Lowest grid value")
    grid_high: float = Field(default=1.0, gt=0.0, le=1.0, description="Highest grid value")
    refine_starts: int = Field(default=8, ge=1, description="Grid starts refined by the simplex")
    max_iterations: int = Field(default=500, ge=1)
    xatol: float = Field(
        default=1e-6,
        gt=0.0,
        description="Simplex diameter (log10-parameter space) at convergence"
    )
    fatol: float = Field(default=1e-12, gt=0.0)
    step_seconds: float = Field(default=86.4, gt=0.0, description="Seconds per model time step")
