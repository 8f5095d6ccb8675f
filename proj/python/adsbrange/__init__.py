"""Range and phase-offset estimation from collided ADS-B packets."""

from ._core import *  # noqa: F401,F403
from ._core import InputShapeError, DomainError, ConfigurationError, CapabilityError  # noqa: F401

__version__ = "0.1.0"
