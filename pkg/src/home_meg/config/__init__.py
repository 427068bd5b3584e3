"""Configuration package for home-meg.

Usage:
    from home_meg.config import settings, HomeMegSettings

    settings.simulation.seed
    settings.fit.grid_points
    settings.verification.sigma
"""

from .base import HomeMegSettings
from .fitting import FitSearchConfig
from .intercontact import IntercontactConfig
from .output import OutputConfig
from .simulation import SimulationConfig
from .verification import VerificationConfig

# Global singleton
settings = HomeMegSettings()

__all__ = [
    "settings",
    "HomeMegSettings",
    "SimulationConfig",
    "FitSearchConfig",
    "VerificationConfig",
    "IntercontactConfig",
    "OutputConfig",
]
