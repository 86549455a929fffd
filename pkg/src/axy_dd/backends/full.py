"""Joint NV and cluster evolution with finite, imperfect pulses.

Drive rotating frame, NV basis (|m_s>, |0>):
H = Delta sz/2 + Omega(t) s_phi/2 + |m_s><m_s| m_s sum A.I + H_nuclear,
with Omega(t) = Omega (1 + delta) + dOmega(t) during pulses and zero between.
"""

import logging
from collections.abc import Sequence

import numpy as np

from axy_dd.backends.noise import ou_trajectory
from axy_dd.backends.propagators import (
    PropagatorCache,
    cluster_hamiltonians,
    evolve,
)
from axy_dd.exceptions import CapacityError, ModeError
from axy_dd.models.bath import NuclearSpin
from axy_dd.models.schedule import PulseEvent, PulseSchedule
from axy_dd.models.simulation import SimulationConfig
from axy_dd.rng import stream

logger = logging.getLogger(__name__)

P_UP = np.diag([1.0, 0.0]).astype(complex)
P_DOWN = np.diag([0.0, 1.0]).astype(complex)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
FREE = "free"


def sigma_phi(phi: float) -> np.ndarray:
    return np.array([[0.0, np.exp(-1j * phi)], [np.exp(1j * phi), 0.0]])


class JointModel:
    """Hamiltonian pieces of one NV-cluster pair plus its propagator cache."""

    def __init__(
        self, spins: Sequence[NuclearSpin], config: SimulationConfig
    ) -> None:
        if len(spins) > config.capacity_spins:
            raise CapacityError(
                f"cluster of {len(spins)} spins exceeds the capacity of "
                f"{config.capacity_spins} ({2 ** (config.capacity_spins + 1)}-dim joint space)"
            )
        h0, h1 = cluster_hamiltonians(spins, config.b_z_gauss, config.m_s, config.dipolar)
        self.dim = h0.shape[0]
        identity = np.eye(self.dim)
        self.free = (
            np.kron(P_UP, h1)
            + np.kron(P_DOWN, h0)
            + 0.5 * config.detuning * np.kron(SIGMA_Z, identity)
        )
        self.identity = identity
        self.amplitude_error = config.amplitude_error
        self.cache = PropagatorCache()
        self.cache.add(FREE, self.free)

    def drive(self, phase: float, amplitude: float) -> np.ndarray:
        return self.free + 0.5 * amplitude * np.kron(sigma_phi(phase), self.identity)

    def pulse(self, event: PulseEvent) -> np.ndarray:
        """Noise-free pulse propagator, cached by phase and duration."""
        amplitude = np.pi / event.duration * (1.0 + self.amplitude_error)
        key = ("pulse", round(event.phase, 12), round(event.duration, 15))
        if key not in self.cache:
            self.cache.add(key, self.drive(event.phase, amplitude))
        return self.cache(key, event.duration)

    def gap(self, duration: float) -> np.ndarray:
        return self.cache(FREE, duration)

    def transition_probability(self, u: np.ndarray) -> float:
        """|x+> to |x-> probability with the cluster maximally mixed."""
        d = self.dim
        up_up, up_down = u[:d, :d], u[:d, d:]
        down_up, down_down = u[d:, :d], u[d:, d:]
        block = 0.5 * (down_up + down_down - up_up - up_down)
        return float(np.sum(np.abs(block) ** 2) / d)


def _sequence(
    model: JointModel, events: Sequence[PulseEvent], duration: float
) -> np.ndarray:
    u = np.eye(2 * model.dim, dtype=complex)
    t = 0.0
    for event in events:
        if event.start > t:
            u = model.gap(event.start - t) @ u
        u = model.pulse(event) @ u
        t = event.end
    if duration > t:
        u = model.gap(duration - t) @ u
    return u


def _noisy_sequence(
    model: JointModel,
    schedule: PulseSchedule,
    config: SimulationConfig,
    point_index: int,
) -> np.ndarray:
    substeps = config.integrator_substeps
    starts = np.array([e.start for e in schedule.events])
    durations = np.array([e.duration for e in schedule.events])
    midpoints = (np.arange(substeps) + 0.5) / substeps
    sample_times = (starts[:, None] + durations[:, None] * midpoints).ravel()
    omega = np.pi / durations[0] if durations.size else 0.0
    fluctuation = ou_trajectory(
        config.noise,
        sample_times,
        omega,
        stream(config.noise_seed, "noise", point_index),
    ).reshape(-1, substeps)

    u = np.eye(2 * model.dim, dtype=complex)
    t = 0.0
    for event, noise in zip(schedule.events, fluctuation):
        if event.start > t:
            u = model.gap(event.start - t) @ u
        nominal = np.pi / event.duration * (1.0 + model.amplitude_error)
        step = event.duration / substeps
        for d_omega in noise:
            u = evolve(model.drive(event.phase, nominal + d_omega), step) @ u
        t = event.end
    if schedule.total_time > t:
        u = model.gap(schedule.total_time - t) @ u
    return u


def _repeats_whole_units(schedule: PulseSchedule) -> bool:
    unit = schedule.unit_events
    return schedule.unit_count > 1 and all(e.end <= schedule.unit_duration for e in unit)


def evolve_full(
    schedule: PulseSchedule,
    spins: Sequence[NuclearSpin],
    config: SimulationConfig,
    point_index: int = 0,
) -> float:
    """NV transition probability from joint propagation with one cluster."""
    if schedule.events and schedule.is_instantaneous:
        raise ModeError("full evolution needs finite-width pulses")
    model = JointModel(spins, config)
    if config.noise.enabled and schedule.events:
        u = _noisy_sequence(model, schedule, config, point_index)
    elif _repeats_whole_units(schedule):
        unit = _sequence(model, schedule.unit_events, schedule.unit_duration)
        u = np.linalg.matrix_power(unit, schedule.unit_count)
    else:
        u = _sequence(model, schedule.events, schedule.total_time)
    return model.transition_probability(u)
