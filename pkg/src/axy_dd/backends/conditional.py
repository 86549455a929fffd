"""Exact two-branch evolution of a nuclear cluster under ideal, instantaneous pulses.

Between pulses the cluster evolves under H1 while the NV sits in |m_s> and
under H0 while it sits in |0>; every pi pulse swaps the two branches. The
NV phase picked up from the pulse axes is kept out of the cluster coherence
(see `pulse_phase_factor`), so coherences of disjoint clusters multiply.
"""

import logging
from collections.abc import Sequence

import numpy as np

from axy_dd.backends.propagators import PropagatorCache, cluster_hamiltonians
from axy_dd.exceptions import ModeError
from axy_dd.models.bath import DipolarMode, NuclearSpin
from axy_dd.models.schedule import PulseEvent, PulseSchedule

logger = logging.getLogger(__name__)

H_ZERO = "h0"
H_SPIN = "h1"


def pulse_phase_factor(schedule: PulseSchedule) -> complex:
    """NV-only phase exp(-2i sum_k (-1)^k phi_k) of an ideal pi-pulse train.

    Vanishes from the signal (equals 1) for AXY, CPMG and X~ trains with an
    even number of pulses per unit.
    """
    signs = np.where(np.arange(len(schedule.events)) % 2 == 0, 1.0, -1.0)
    alternating = float(signs @ schedule.phases) if schedule.events else 0.0
    return complex(np.exp(-2j * alternating))


def _branches(
    events: Sequence[PulseEvent], duration: float, cache: PropagatorCache, dim: int
) -> tuple[np.ndarray, np.ndarray]:
    """Branch propagators over [0, duration]; branch a starts with the NV in |m_s>."""
    a = np.eye(dim, dtype=complex)
    b = np.eye(dim, dtype=complex)
    keys = (H_SPIN, H_ZERO)
    t = 0.0
    for event in [*events, None]:
        stop = duration if event is None else event.center_time
        gap = stop - t
        if gap > 0.0:
            a = cache(keys[0], gap) @ a
            b = cache(keys[1], gap) @ b
        keys = keys[::-1]
        t = stop
    return a, b


def conditional_coherence(
    schedule: PulseSchedule,
    spins: Sequence[NuclearSpin],
    b_z: float,
    m_s: int,
    dipolar: DipolarMode = DipolarMode.full,
    coupling_groups: Sequence[Sequence[int]] | None = None,
) -> complex:
    """Cluster coherence L = Tr[U_a^dagger U_b] / d for a maximally mixed cluster."""
    if not schedule.is_instantaneous:
        raise ModeError("conditional evolution needs instantaneous pulses")
    if not spins:
        return 1.0 + 0.0j
    h0, h1 = cluster_hamiltonians(spins, b_z, m_s, dipolar, coupling_groups)
    cache = PropagatorCache()
    cache.add(H_ZERO, h0)
    cache.add(H_SPIN, h1)
    dim = h0.shape[0]
    unit = schedule.unit_events
    if len(unit) % 2 == 0 and schedule.unit_count > 1:
        a, b = _branches(unit, schedule.unit_duration, cache, dim)
        a = np.linalg.matrix_power(a, schedule.unit_count)
        b = np.linalg.matrix_power(b, schedule.unit_count)
    else:
        a, b = _branches(schedule.events, schedule.total_time, cache, dim)
    return complex(np.trace(a.conj().T @ b) / dim)
