"""Statistical verification configuration."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class VerificationConfig(BaseSettings):
    """Tolerances and trial counts for the `verify` checks.

    Environment variables:
        HOMEMEG_VERIFY_SIGMA: Normal-approximation tolerance in standard errors
        HOMEMEG_VERIFY_MC_TRIALS: Trials for the lemma estimators
        HOMEMEG_VERIFY_ORACLE_TRIALS: Monte Carlo runs compared with the exact oracle
    """

    model_config = SettingsConfigDict(
        env_prefix="HOMEMEG_VERIFY_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    sigma: float = Field(default=3.0, gt=0.0)
    mc_trials: int = Field(default=1_000_000, ge=1)
    lemma_max_l: int = Field(default=20, ge=1)
    coupling_n: int = Field(default=64, ge=1)
    coupling_trials: int = Field(default=100, ge=1)
    oracle_n: int = Field(default=3, ge=1, le=4)
    oracle_trials: int = Field(default=100_000, ge=1)
    oracle_tv: float = Field(default=0.01, gt=0.0, lt=1.0)
