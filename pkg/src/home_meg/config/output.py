"""Output location configuration."""

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class OutputConfig(BaseSettings):
    """Where result files go.

    Environment variables:
        HOMEMEG_OUTPUT_DIR: Directory for CSV/JSON results (default: ./results)
    """

    model_config = SettingsConfigDict(
        env_prefix="HOMEMEG_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    output_dir: Path = Field(default=Path("results"))
    schema_version: str = Field(default="1", description="Carried by every JSON output")

    @property
    def flood_dir(self) -> Path:
        return self.output_dir / "flood"

    @property
    def ic_dir(self) -> Path:
        return self.output_dir / "ic"

    @property
    def fit_dir(self) -> Path:
        return self.output_dir / "fit"
