"""Repeated position measurements of a free mass and the standard quantum limit.

Gaussian state algebra, measurement schemes expressed through system-only
reduction operators, the two-by-two calculus of quadratic system-probe
interactions, a brute-force grid oracle and a Monte Carlo driver for the
measure, evolve, re-measure protocol.
"""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    ConfigError,
    FreemassError,
    GridError,
    InvalidSchemeError,
    NormalizationError,
    NotPlausibleError,
    SmallQValidityError,
)
from .gaussian_states import GaussianState, Moments, PhysicalUnits, make_muw, make_tcs  # noqa: E402
from .instruments import (  # noqa: E402
    GordonLouisell,
    RadiationPressureFull,
    RadiationPressureSmallQ,
    ThreeStep,
    VonNeumann,
)

__all__ = [
    "ConfigError",
    "FreemassError",
    "GridError",
    "InvalidSchemeError",
    "NormalizationError",
    "NotPlausibleError",
    "SmallQValidityError",
    "GaussianState",
    "Moments",
    "PhysicalUnits",
    "make_muw",
    "make_tcs",
    "GordonLouisell",
    "RadiationPressureFull",
    "RadiationPressureSmallQ",
    "ThreeStep",
    "VonNeumann",
]
