import numpy as np
from pytest import approx, mark, raises

from axy_dd.constants import CPMG_PHASE, X_PHASES, Y_PHASE_SHIFT
from axy_dd.exceptions import ConfigError, DomainError, ScheduleOverlapError
from axy_dd.modfunc import modulation_value, pulse_fractions
from axy_dd.models.schedule import PhaseOrder, SequenceKind
from axy_dd.models.timings import CompositeTimings
from axy_dd.sequence_builder import (
    ScheduleFamily,
    apply_finite_width,
    build_axy,
    build_cpmg,
    build_xtilde,
    composite_pattern,
    frequency_to_tau,
)


@mark.parametrize(
    "n, order, pattern",
    [
        (4, PhaseOrder.xyxy_yxyx, "XYXY"),
        (8, PhaseOrder.xyxy_yxyx, "XYXYYXYX"),
        (8, PhaseOrder.xyxyxyxy, "XYXYXYXY"),
    ],
)
def test_composite_pattern(n: int, order: PhaseOrder, pattern: str) -> None:
    assert composite_pattern(n, order) == pattern


def test_unsupported_order() -> None:
    with raises(ConfigError):
        composite_pattern(6)


def test_axy8_layout(f1_timings: CompositeTimings, tau: float) -> None:
    schedule = build_axy(8, f1_timings, tau, repeats=3)
    assert len(schedule) == 120
    assert schedule.unit_periods == 4
    assert schedule.unit_count == 3
    assert schedule.total_time == approx(12 * tau)
    assert len(schedule.unit_events) == 40
    assert schedule.is_instantaneous

    first_period = schedule.times[:10]
    assert first_period == approx(pulse_fractions(f1_timings) * tau)
    # second repeat is a time-shifted copy of the first
    assert schedule.times[40:80] == approx(schedule.times[:40] + 4 * tau)


def test_axy8_phases(f1_timings: CompositeTimings, tau: float) -> None:
    schedule = build_axy(8, f1_timings, tau, repeats=1)
    x = np.array(X_PHASES)
    y = x + Y_PHASE_SHIFT
    # XY XY YX YX
    expected = np.concatenate([x, y, x, y, y, x, y, x])
    assert schedule.phases == approx(expected)


def test_axy4_repeats_two_periods(f1_timings: CompositeTimings, tau: float) -> None:
    schedule = build_axy(4, f1_timings, tau, repeats=2)
    assert schedule.unit_periods == 2
    assert schedule.repetitions == 4
    assert len(schedule) == 40


def test_xtilde_shares_times(f1_timings: CompositeTimings, tau: float) -> None:
    axy = build_axy(8, f1_timings, tau, repeats=1)
    xtilde = build_xtilde(f1_timings, tau, repeats=1)
    assert xtilde.kind is SequenceKind.xtilde
    assert xtilde.times == approx(axy.times)
    assert not np.any(xtilde.phases)


def test_cpmg_layout(tau: float) -> None:
    schedule = build_cpmg(tau, repeats=3)
    assert schedule.times == approx(np.array([0.25, 0.75, 1.25, 1.75, 2.25, 2.75]) * tau)
    assert schedule.phases == approx(np.full(6, CPMG_PHASE))


def test_finite_width(f1_timings: CompositeTimings, tau: float) -> None:
    omega = 2 * np.pi * 40.0
    schedule = apply_finite_width(build_axy(8, f1_timings, tau, 1), omega)
    assert not schedule.is_instantaneous
    assert all(e.duration == approx(0.0125) for e in schedule.events)
    assert schedule.times == approx(build_axy(8, f1_timings, tau, 1).times)


def test_overlapping_pulses_are_named() -> None:
    crowded = CompositeTimings(x=(0.1, 0.12, 0.25, 0.38, 0.4))
    # 12.5 ns pulses only 4 ns apart
    with raises(ScheduleOverlapError) as exc_info:
        apply_finite_width(build_axy(8, crowded, 0.2, 1), 2 * np.pi * 40.0)
    assert exc_info.value.pair == (0, 1)


def test_pulse_before_start_is_rejected() -> None:
    with raises(ScheduleOverlapError) as exc_info:
        apply_finite_width(build_cpmg(0.02, 1), 2 * np.pi * 40.0)
    assert exc_info.value.pair == (-1, 0)


@mark.parametrize("freq, k_dd, tau", [(2.0, 1, 0.5), (2.0, 3, 1.5), (0.25, 1, 4.0)])
def test_frequency_to_tau(freq: float, k_dd: int, tau: float) -> None:
    assert frequency_to_tau(freq, k_dd) == approx(tau)


def test_frequency_must_be_positive() -> None:
    with raises(DomainError):
        frequency_to_tau(0.0, 1)


def test_family(f1_timings: CompositeTimings) -> None:
    family = ScheduleFamily(timings=f1_timings, repeats=76, k_dd=1)
    assert family.pulse_count == 3040
    schedule = family.for_frequency(0.2)
    assert schedule.period == approx(5.0)
    assert len(schedule) == 3040
    assert family.describe() == "axy-8 k_dd=1 pulses=3040 instantaneous"

    finite = family.model_copy(update={"rabi_mhz": 40.0})
    assert not finite.build(5.0).is_instantaneous


def test_family_needs_timings() -> None:
    with raises(ConfigError):
        ScheduleFamily(kind=SequenceKind.axy).build(1.0)
    cpmg = ScheduleFamily(kind=SequenceKind.cpmg, repeats=2)
    assert len(cpmg.build(1.0)) == 4
    assert cpmg.describe().startswith("CPMG")


@mark.parametrize("n, repeats", [(4, 3), (8, 2)])
def test_schedule_reproduces_the_modulation_function(
    n: int, repeats: int, f1_timings: CompositeTimings, tau: float
) -> None:
    schedule = build_axy(n, f1_timings, tau, repeats)
    samples = np.random.default_rng(n).uniform(0.0, schedule.total_time, 10_000)
    flips = np.searchsorted(schedule.times, samples, side="right")
    from_schedule = np.where(flips % 2 == 0, 1, -1)
    expected = [
        modulation_value(f1_timings, float(t / tau - np.floor(t / tau))) for t in samples
    ]
    assert from_schedule.tolist() == expected


@mark.parametrize(
    "timings",
    [
        CompositeTimings.equally_spaced(),
        CompositeTimings(x=(0.03, 0.11, 0.2, 0.31, 0.47)),
    ],
)
def test_periods_are_mirrored(timings: CompositeTimings, tau: float) -> None:
    schedule = build_axy(8, timings, tau, repeats=2)
    times = schedule.times.reshape(-1, 10)
    local = times - tau * np.arange(len(times))[:, None]
    assert local + local[:, ::-1] == approx(np.full_like(local, tau), abs=1e-12)


def test_symmetric_composites_are_mirrored(f1_timings: CompositeTimings, tau: float) -> None:
    local = build_axy(8, f1_timings, tau, repeats=1).times[:5]
    assert local + local[::-1] == approx(np.full(5, 0.5 * tau), abs=1e-12)
