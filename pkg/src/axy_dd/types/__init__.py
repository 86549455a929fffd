from .frequency_grid import FrequencyGrid, check_grid
from .vector import HalfPeriodFraction, Vector3

__all__ = [
    "FrequencyGrid",
    "HalfPeriodFraction",
    "Vector3",
    "check_grid",
]
