from .bath import BathModel, DipolarMode, NuclearSpin
from .errors import ErrorParams, OrderScalingResult, SequenceErrorKind
from .schedule import PhaseOrder, PulseEvent, PulseSchedule, SequenceKind
from .shared import Link
from .simulation import OUParams, PulseMode, SimulationConfig, Spectrum
from .timings import CompositeTimings, DesignResult, HarmonicTarget

__all__ = [
    "BathModel",
    "CompositeTimings",
    "DesignResult",
    "DipolarMode",
    "ErrorParams",
    "HarmonicTarget",
    "Link",
    "NuclearSpin",
    "OUParams",
    "OrderScalingResult",
    "PhaseOrder",
    "PulseEvent",
    "PulseMode",
    "PulseSchedule",
    "SequenceErrorKind",
    "SequenceKind",
    "SimulationConfig",
    "Spectrum",
]
