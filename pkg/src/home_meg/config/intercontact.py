"""Inter-contact distribution configuration."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class IntercontactConfig(BaseSettings):
    """Horizon and data requirements for inter-contact distributions.

    Environment variables:
        HOMEMEG_IC_K_MAX: Analytic pmf horizon
        HOMEMEG_IC_TAIL_EPSILON: Early stop once the remaining tail mass is below this
        HOMEMEG_IC_MIN_GAPS: Minimum observed gaps for an empirical distribution
    """

    model_config = SettingsConfigDict(
        env_prefix="HOMEMEG_IC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    k_max: int = Field(default=100_000, ge=1)
    tail_epsilon: float = Field(default=1e-9, ge=0.0)
    min_gaps: int = Field(default=1000, ge=1)
