"""Simulation run configuration."""

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class SimulationConfig(BaseSettings):
    """Seeds, trial counts and horizons for flooding experiments.

    Environment variables:
        HOMEMEG_SEED: Master seed (overrides --seed on the command line)
        HOMEMEG_TRIALS: Independent trials per source
        HOMEMEG_HORIZON: Censoring horizon in steps (unset = derived from the model)
        HOMEMEG_INIT_MODE: 'stationary' or 'all:<STATE>' (e.g. 'all:ND')
        HOMEMEG_SWEEP_SOURCES: Run every source instead of source 0
    """

    model_config = SettingsConfigDict(
        env_prefix="HOMEMEG_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    seed: int = Field(default=0, ge=0, description="Master seed for all uniforms")
    trials: int = Field(default=200, ge=1, description="Trials per source")
    horizon: Optional[int] = Field(
        default=None,
        ge=1,
        description="Censoring horizon; None uses the flooding module default"
    )
    init_mode: str = Field(
        default="stationary",
        description="Initial edge states: 'stationary', 'all:<HC|HD|NC|ND>' or 'file:<snapshot.json>'"
    )
    sweep_sources: bool = Field(default=False, description="Flood from every source")

    @field_validator("init_mode")
    @classmethod
    def validate_init_mode(cls, value: str) -> str:
        """Accept 'stationary', 'all:<STATE>' or 'file:<path>'."""
        normalized = value.strip()
        if normalized.lower() == "stationary":
            return "stationary"
        head, _, state = normalized.partition(":")
        if head.lower() == "all" and state.upper() in {"HC", "HD", "NC", "ND"}:
            return f"all:{state.upper()}"
        if head.lower() == "file" and state:
            return f"file:{state}"
        raise ValueError(f"init_mode must be 'stationary', 'all:<HC|HD|NC|ND>' or 'file:<path>', got {value!r}")
