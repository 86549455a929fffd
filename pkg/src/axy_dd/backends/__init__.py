from collections.abc import Callable, Sequence

from axy_dd.models.bath import NuclearSpin
from axy_dd.models.schedule import PulseSchedule
from axy_dd.models.simulation import SimulationConfig

from .conditional import conditional_coherence, pulse_phase_factor
from .effective import effective_prediction, effective_prediction_closed_form
from .full import evolve_full
from .noise import ou_trajectory
from .propagators import PropagatorCache

ClusterEngine = Callable[
    [PulseSchedule, Sequence[NuclearSpin], SimulationConfig, int], float
]
"""
Type alias for a function that evolves the NV with one cluster.

Args:
    schedule (PulseSchedule): The pulse train, with finite-width pulses.
    spins (Sequence[NuclearSpin]): Members of the cluster, may be empty.
    config (SimulationConfig): Field, control errors and noise settings.
    point_index (int): Sweep point, selects the noise sub-stream.

Returns:
    The NV transition probability for the cluster alone.
"""

__all__ = [
    "ClusterEngine",
    "PropagatorCache",
    "conditional_coherence",
    "effective_prediction",
    "effective_prediction_closed_form",
    "evolve_full",
    "ou_trajectory",
    "pulse_phase_factor",
]
