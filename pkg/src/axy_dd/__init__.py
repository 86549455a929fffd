from .models import (
    BathModel,
    CompositeTimings,
    HarmonicTarget,
    Link,
    PulseSchedule,
    SimulationConfig,
    Spectrum,
)
from .routers import RootRouter

__all__ = [
    "BathModel",
    "CompositeTimings",
    "HarmonicTarget",
    "Link",
    "PulseSchedule",
    "RootRouter",
    "SimulationConfig",
    "Spectrum",
]
