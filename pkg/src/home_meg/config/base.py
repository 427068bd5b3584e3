"""Configuration composition root."""
import tomllib
from pathlib import Path
from typing import Any

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .fitting import FitSearchConfig
from .intercontact import IntercontactConfig
from .output import OutputConfig
from .simulation import SimulationConfig
from .verification import VerificationConfig


class HomeMegSettings(BaseSettings):
    """Root configuration composing the per-concern settings.

    Nested values can be set with HOMEMEG_<SECTION>__<FIELD>, e.g.
    HOMEMEG_SIMULATION__TRIALS=500, in addition to each section's own flat
    variables.
    """

    model_config = SettingsConfigDict(
        env_prefix="HOMEMEG_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    fit: FitSearchConfig = Field(default_factory=FitSearchConfig)
    verification: VerificationConfig = Field(default_factory=VerificationConfig)
    intercontact: IntercontactConfig = Field(default_factory=IntercontactConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    log_level: str = Field(default="INFO", description="Root log level for CLI and scripts")

    @classmethod
    def from_toml(cls, path: Path) -> "HomeMegSettings":
        """Load settings with a TOML file layered over environment and defaults.

        Top-level tables map to sections ([simulation], [fit], ...). Bare
        key=value lines at top level go to the root.
        """
        with open(path, "rb") as handle:
            data: dict[str, Any] = tomllib.load(handle)

        base = cls()
        merged = base.model_dump()
        for key, value in data.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key].update(value)
            else:
                merged[key] = value
        return cls(**merged)
