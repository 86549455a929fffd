"""Bath-level transition probabilities and frequency sweeps.

Instantaneous pulses use the conditional two-branch engine per cluster and
multiply coherences. Finite pulses use the joint engine per cluster; the
cluster signals s_c = 1 - 2 p_c are combined relative to the bath-free
signal s_0, s = s_0 prod(s_c / s_0), which reduces to the coherence product
when the pulses are ideal.
"""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np
from pydantic import ValidationError

from axy_dd.analysis import spectrum_deviation
from axy_dd.backends import ClusterEngine, conditional_coherence, evolve_full, pulse_phase_factor
from axy_dd.exceptions import DomainError
from axy_dd.models.bath import BathModel
from axy_dd.models.reports import DeviationCell
from axy_dd.models.schedule import PulseSchedule
from axy_dd.models.simulation import PulseMode, SimulationConfig, Spectrum
from axy_dd.sequence_builder import ScheduleFamily, frequency_to_tau
from axy_dd.types import FrequencyGrid, check_grid

logger = logging.getLogger(__name__)

PROBABILITY_SLACK = 1e-9
SIGNAL_FLOOR = 1e-14


def combine_clusters(coherences: Iterable[complex]) -> complex:
    """Disjoint-cluster coherence: product of the per-cluster factors."""
    total = 1.0 + 0.0j
    for coherence in coherences:
        total *= coherence
    return total


def probability_from_signal(signal: float) -> float:
    """p = (1 - s) / 2, clamped to [0, 1]."""
    p = 0.5 * (1.0 - signal)
    if p < -PROBABILITY_SLACK or p > 1.0 + PROBABILITY_SLACK:
        logger.warning("clamping transition probability %.3e into [0, 1]", p)
    return min(max(p, 0.0), 1.0)


def probability_from_coherence(coherence: complex, phase: complex = 1.0) -> float:
    return probability_from_signal(float(np.real(phase * coherence)))


def family_for(family: ScheduleFamily, config: SimulationConfig) -> ScheduleFamily:
    """Align the pulse width of `family` with the configured pulse mode."""
    match config.pulse_mode:
        case PulseMode.instantaneous:
            return family.model_copy(update={"rabi_mhz": None})
        case PulseMode.finite:
            return family.model_copy(update={"rabi_mhz": config.rabi_mhz})
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


def _check_bath(bath: BathModel, config: SimulationConfig) -> None:
    if bath.spins and (bath.b_z_gauss, bath.m_s) != (config.b_z_gauss, config.m_s):
        logger.warning(
            "bath was generated for B_z=%s G, m_s=%s; simulating B_z=%s G, m_s=%s",
            bath.b_z_gauss,
            bath.m_s,
            config.b_z_gauss,
            config.m_s,
        )
    if bath.dipolar != config.dipolar:
        logger.warning(
            "bath was written for dipolar=%s; simulating dipolar=%s",
            bath.dipolar,
            config.dipolar,
        )


def _instantaneous(schedule: PulseSchedule, bath: BathModel, config: SimulationConfig) -> float:
    coherence = combine_clusters(
        conditional_coherence(
            schedule,
            bath.cluster_spins(cluster),
            config.b_z_gauss,
            config.m_s,
            config.dipolar,
        )
        for cluster in bath.groups
    )
    return probability_from_coherence(coherence, pulse_phase_factor(schedule))


def _finite(
    schedule: PulseSchedule,
    bath: BathModel,
    config: SimulationConfig,
    point_index: int,
    engine: ClusterEngine,
) -> float:
    bare = 1.0 - 2.0 * engine(schedule, [], config, point_index)
    if not bath.spins:
        return probability_from_signal(bare)
    if abs(bare) < SIGNAL_FLOOR:
        logger.warning("bath-free signal vanishes; reporting the pulse-only probability")
        return probability_from_signal(bare)
    signal = bare
    for cluster in bath.groups:
        signal *= (1.0 - 2.0 * engine(schedule, bath.cluster_spins(cluster), config, point_index)) / bare
    return probability_from_signal(signal)


def transition_probability(
    schedule: PulseSchedule,
    bath: BathModel,
    config: SimulationConfig,
    point_index: int = 0,
    engine: ClusterEngine = evolve_full,
) -> float:
    """NV |x+> to |x-> probability after `schedule` with the whole bath."""
    if schedule.is_instantaneous:
        return _instantaneous(schedule, bath, config)
    return _finite(schedule, bath, config, point_index, engine)


def sweep(
    bath: BathModel,
    family: ScheduleFamily,
    grid: FrequencyGrid,
    config: SimulationConfig,
    threads: int = 1,
) -> Spectrum:
    """Transition probability over a grid of matched frequencies k_dd / tau.

    The grid must be positive and strictly increasing with at least two
    points. Points are independent; noise is seeded per point index, so the
    result does not depend on `threads`.
    """
    try:
        start, stop, points = check_grid(grid)
    except ValidationError as e:
        raise DomainError(f"grid {grid}: {e.errors()[0]['msg']}") from e
    _check_bath(bath, config)
    family = family_for(family, config)
    freqs = np.linspace(start, stop, points)
    taus = [frequency_to_tau(float(f), family.k_dd) for f in freqs]
    logger.info("sweeping %s over %d points on %d threads", family.describe(), points, threads)

    def point(index: int) -> float:
        return transition_probability(family.build(taus[index]), bath, config, index)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            probability = list(pool.map(point, range(points)))
    else:
        probability = [point(i) for i in range(points)]
    return Spectrum(
        freq_mhz=[float(f) for f in freqs],
        tau_us=taus,
        probability=probability,
        k_dd=family.k_dd,
    )


def deviation_map(
    family: ScheduleFamily,
    bath: BathModel,
    detunings_mhz: Sequence[float],
    amplitude_errors: Sequence[float],
    grid: FrequencyGrid,
    config: SimulationConfig,
    window: tuple[float, float] | None = None,
    threads: int = 1,
) -> list[DeviationCell]:
    """Spectrum deviation of erroneous finite pulses from error-free ones.

    Every cell compares a finite-pulse sweep carrying the detuning and
    amplitude error against the same sweep without them; noise stays as
    configured in both.
    """
    if not detunings_mhz or not amplitude_errors:
        raise DomainError("deviation map needs detunings and amplitude errors")
    finite = SimulationConfig.model_validate(
        config.model_dump()
        | {"pulse_mode": PulseMode.finite, "detuning_mhz": 0.0, "amplitude_error": 0.0}
    )
    reference = sweep(bath, family, grid, finite, threads)
    cells = []
    for detuning, amplitude in product(detunings_mhz, amplitude_errors):
        errored = finite.model_copy(
            update={"detuning_mhz": float(detuning), "amplitude_error": float(amplitude)}
        )
        spectrum = sweep(bath, family, grid, errored, threads)
        deviation = spectrum_deviation(reference, spectrum, window)
        logger.info(
            "detuning %s MHz, amplitude error %s: deviation %.3g",
            detuning,
            amplitude,
            deviation,
        )
        cells.append(
            DeviationCell(
                detuning_mhz=detuning, amplitude_error=amplitude, deviation=deviation
            )
        )
    return cells
