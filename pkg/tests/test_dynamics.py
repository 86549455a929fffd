import logging

import numpy as np
from pytest import approx, mark, raises

from axy_dd.analysis import spectrum_deviation, spin_lines
from axy_dd.dynamics import (
    combine_clusters,
    deviation_map,
    family_for,
    probability_from_coherence,
    probability_from_signal,
    sweep,
    transition_probability,
)
from axy_dd.exceptions import DomainError
from axy_dd.models.bath import BathModel, DipolarMode
from axy_dd.models.schedule import SequenceKind
from axy_dd.models.simulation import OUParams, PulseMode, SimulationConfig
from axy_dd.models.timings import CompositeTimings
from axy_dd.sequence_builder import ScheduleFamily, apply_finite_width, build_axy

from .shared import B_Z, bath_of, weak_spin


def two_spin_bath() -> BathModel:
    return bath_of(
        [weak_spin(), weak_spin(a_perp_khz=6.0, a_par_khz=30.0, position=(0.0, 1.0, 1.0))],
        max_cluster=1,
    )


def test_combine_clusters() -> None:
    assert combine_clusters([]) == 1.0
    assert combine_clusters([0.5, 0.5j, 2.0]) == approx(0.5j)
    assert probability_from_coherence(combine_clusters([1.0, 1.0])) == 0.0
    assert probability_from_coherence(combine_clusters([1.0, -1.0])) == 1.0


def test_probability_is_clamped(caplog) -> None:
    with caplog.at_level(logging.WARNING):
        assert probability_from_signal(1.5) == 0.0
        assert probability_from_signal(-1.0 - 1e-12) == 1.0
    assert len(caplog.records) == 1
    assert "clamping" in caplog.text


def test_family_for_pulse_mode(f1_timings: CompositeTimings) -> None:
    family = ScheduleFamily(timings=f1_timings, rabi_mhz=20.0)
    instantaneous = family_for(family, SimulationConfig())
    assert instantaneous.rabi_mhz is None
    finite = family_for(family, SimulationConfig(pulse_mode=PulseMode.finite, rabi_mhz=40.0))
    assert finite.rabi_mhz == 40.0


def test_empty_bath_leaves_the_nv_alone(
    f1_timings: CompositeTimings, tau: float, empty_bath: BathModel
) -> None:
    schedule = build_axy(8, f1_timings, tau, 4)
    assert transition_probability(schedule, empty_bath, SimulationConfig()) == 0.0


def test_finite_clusters_are_combined_relative_to_the_bare_signal(
    f1_timings: CompositeTimings, tau: float
) -> None:
    def engine(schedule, spins, config, point_index) -> float:
        return 0.2 if spins else 0.1

    schedule = apply_finite_width(build_axy(8, f1_timings, tau, 1), 2 * np.pi * 40.0)
    config = SimulationConfig(pulse_mode=PulseMode.finite)
    p = transition_probability(schedule, two_spin_bath(), config, engine=engine)
    # s0 = 0.8, s_c = 0.6 for each of the two clusters
    assert p == approx(0.5 * (1.0 - 0.8 * 0.75 * 0.75))


def test_vanishing_bare_signal(f1_timings: CompositeTimings, tau: float, caplog) -> None:
    def engine(schedule, spins, config, point_index) -> float:
        return 0.5

    schedule = apply_finite_width(build_axy(8, f1_timings, tau, 1), 2 * np.pi * 40.0)
    config = SimulationConfig(pulse_mode=PulseMode.finite)
    with caplog.at_level(logging.WARNING):
        p = transition_probability(schedule, two_spin_bath(), config, engine=engine)
    assert p == 0.5
    assert "bath-free signal vanishes" in caplog.text


@mark.slow
def test_ideal_finite_pulses_reduce_to_coherence_product(f1_timings: CompositeTimings) -> None:
    bath = two_spin_bath()
    tau = 2 * np.pi / bath.spins[0].frame.omega
    schedule = build_axy(8, f1_timings, tau, 20)
    rabi_mhz = 1.0 / (2.0 * 1e-6 * tau)
    narrow = apply_finite_width(schedule, 2 * np.pi * rabi_mhz)

    expected = transition_probability(schedule, bath, SimulationConfig(b_z_gauss=B_Z))
    config = SimulationConfig(b_z_gauss=B_Z, pulse_mode=PulseMode.finite, rabi_mhz=rabi_mhz)
    assert expected > 0.01
    assert transition_probability(narrow, bath, config) == approx(expected, abs=1e-4)


def test_sweep_of_empty_bath(f1_timings: CompositeTimings, empty_bath: BathModel) -> None:
    family = ScheduleFamily(timings=f1_timings, repeats=2)
    spectrum = sweep(empty_bath, family, (0.2, 0.3, 11), SimulationConfig())
    assert len(spectrum) == 11
    assert spectrum.freq_mhz == approx(np.linspace(0.2, 0.3, 11).tolist())
    assert spectrum.tau_us == approx([1.0 / f for f in spectrum.freq_mhz])
    assert spectrum.probability == [0.0] * 11
    assert spectrum.manifest is None


def test_sweep_is_thread_independent(f1_timings: CompositeTimings) -> None:
    bath = two_spin_bath()
    family = ScheduleFamily(timings=f1_timings, repeats=5)
    config = SimulationConfig()
    serial = sweep(bath, family, (0.205, 0.22, 9), config, threads=1)
    parallel = sweep(bath, family, (0.205, 0.22, 9), config, threads=3)
    assert serial.probability == parallel.probability


def test_noisy_sweep_is_thread_independent(
    f1_timings: CompositeTimings, empty_bath: BathModel
) -> None:
    family = ScheduleFamily(timings=f1_timings)
    config = SimulationConfig(
        pulse_mode=PulseMode.finite,
        noise=OUParams(enabled=True, tau_mw_us=10.0, delta_omega=0.02),
        seed=5,
    )
    serial = sweep(empty_bath, family, (0.2, 0.23, 4), config, threads=1)
    parallel = sweep(empty_bath, family, (0.2, 0.23, 4), config, threads=2)
    assert serial.probability == parallel.probability
    assert len(set(serial.probability)) == 4


@mark.slow
def test_resonance_sits_on_the_spin_line(f1_timings: CompositeTimings) -> None:
    bath = bath_of([weak_spin()])
    line = float(spin_lines(bath)[0])
    family = ScheduleFamily(timings=f1_timings, repeats=100)
    spectrum = sweep(bath, family, (line - 0.005, line + 0.005, 41), SimulationConfig())
    step = 0.01 / 40
    peak = spectrum.freq_mhz[int(np.argmax(spectrum.probability))]
    assert abs(peak - line) <= step
    assert max(spectrum.probability) > 0.3


def test_mismatched_field_warns(
    f1_timings: CompositeTimings, caplog
) -> None:
    family = ScheduleFamily(timings=f1_timings)
    with caplog.at_level(logging.WARNING):
        sweep(two_spin_bath(), family, (0.2, 0.21, 2), SimulationConfig(b_z_gauss=300.0))
    assert "bath was generated for B_z=200.0 G" in caplog.text


@mark.parametrize("grid", [(0.3, 0.2, 50), (0.2, 0.2, 5), (0.2, 0.3, 1), (0.0, 0.3, 5)])
def test_sweep_needs_an_increasing_grid(
    grid: tuple[float, float, int], f1_timings: CompositeTimings, empty_bath: BathModel
) -> None:
    with raises(DomainError):
        sweep(empty_bath, ScheduleFamily(timings=f1_timings), grid, SimulationConfig())


def test_mismatched_dipolar_mode_warns(
    f1_timings: CompositeTimings, empty_bath: BathModel, caplog
) -> None:
    family = ScheduleFamily(timings=f1_timings)
    config = SimulationConfig(dipolar=DipolarMode.secular)
    with caplog.at_level(logging.WARNING):
        sweep(empty_bath, family, (0.2, 0.21, 2), config)
    assert "bath was written for dipolar=full; simulating dipolar=secular" in caplog.text


@mark.slow
def test_narrow_pulse_sweep_matches_instantaneous(
    f1_timings: CompositeTimings,
) -> None:
    bath = bath_of([weak_spin()])
    line = float(spin_lines(bath)[0])
    family = ScheduleFamily(timings=f1_timings, repeats=10)
    grid = (line - 0.01, line + 0.01, 100)
    # pi / Omega = 1e-6 tau at the line
    rabi_mhz = 0.5e6 * line
    ideal = sweep(bath, family, grid, SimulationConfig(b_z_gauss=B_Z))
    narrow = sweep(
        bath,
        family,
        grid,
        SimulationConfig(b_z_gauss=B_Z, pulse_mode=PulseMode.finite, rabi_mhz=rabi_mhz),
    )
    assert narrow.freq_mhz == ideal.freq_mhz
    assert np.max(np.abs(np.subtract(narrow.probability, ideal.probability))) < 1e-4


def _line_window(
    bath: BathModel, half_width: float, points: int
) -> tuple[float, float, int]:
    line = float(spin_lines(bath)[0])
    return (line - half_width, line + half_width, points)


@mark.slow
def test_composite_phases_absorb_pulse_errors(f1_timings: CompositeTimings) -> None:
    bath = bath_of([weak_spin()])
    grid = _line_window(bath, 0.002, 41)
    step = 0.004 / 40
    ideal = SimulationConfig(b_z_gauss=B_Z, pulse_mode=PulseMode.finite)
    errored = ideal.model_copy(update={"detuning_mhz": 1.0, "amplitude_error": 0.05})

    deviations = {}
    for kind in (SequenceKind.axy, SequenceKind.xtilde):
        family = ScheduleFamily(kind=kind, timings=f1_timings, repeats=76)
        clean = sweep(bath, family, grid, ideal)
        noisy = sweep(bath, family, grid, errored)
        deviations[kind] = spectrum_deviation(clean, noisy)
        if kind is SequenceKind.axy:
            shift = abs(
                clean.freq_mhz[int(np.argmax(clean.probability))]
                - noisy.freq_mhz[int(np.argmax(noisy.probability))]
            )
            assert shift <= step + 1e-12

    assert 10.0 * deviations[SequenceKind.axy] <= deviations[SequenceKind.xtilde]


@mark.slow
def test_slow_amplitude_noise_barely_moves_the_spectrum(
    f1_timings: CompositeTimings,
) -> None:
    bath = bath_of([weak_spin()])
    grid = _line_window(bath, 0.001, 9)
    family = ScheduleFamily(timings=f1_timings, repeats=76)
    quiet = SimulationConfig(b_z_gauss=B_Z, pulse_mode=PulseMode.finite)
    noisy = quiet.model_copy(
        update={
            "noise": OUParams(enabled=True, tau_mw_us=1000.0, delta_omega=7e-3, seed=3)
        }
    )
    deviation = spectrum_deviation(
        sweep(bath, family, grid, quiet), sweep(bath, family, grid, noisy)
    )
    assert deviation < 0.02


def test_deviation_map_cells(f1_timings: CompositeTimings) -> None:
    bath = bath_of([weak_spin()])
    grid = _line_window(bath, 0.002, 5)
    family = ScheduleFamily(timings=f1_timings, repeats=2)
    cells = deviation_map(
        family, bath, [0.0, 1.0], [0.0, 0.05], grid, SimulationConfig(b_z_gauss=B_Z)
    )
    assert [(c.detuning_mhz, c.amplitude_error) for c in cells] == [
        (0.0, 0.0),
        (0.0, 0.05),
        (1.0, 0.0),
        (1.0, 0.05),
    ]
    assert cells[0].deviation == 0.0
    assert cells[-1].deviation > 0.0


def test_deviation_map_needs_errors(
    f1_timings: CompositeTimings, empty_bath: BathModel
) -> None:
    family = ScheduleFamily(timings=f1_timings)
    with raises(DomainError):
        deviation_map(family, empty_bath, [], [0.0], (0.2, 0.21, 2), SimulationConfig())
