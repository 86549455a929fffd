"""Concrete pulse schedules for AXY-n, CPMG and the equal-phase X~ reference."""

import logging
from itertools import pairwise

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt

from axy_dd.constants import CPMG_PHASE, TWO_PI, X_PHASES, Y_PHASE_SHIFT
from axy_dd.exceptions import ConfigError, DomainError, ScheduleOverlapError
from axy_dd.models.schedule import (
    PhaseOrder,
    PulseEvent,
    PulseSchedule,
    SequenceKind,
)
from axy_dd.models.timings import CompositeTimings

logger = logging.getLogger(__name__)

SUPPORTED_N = (4, 8)


def composite_pattern(n: int, phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx) -> str:
    """Composite letters of one repeating unit, two per period."""
    if n not in SUPPORTED_N:
        raise ConfigError(f"AXY-{n} is not supported, use one of {SUPPORTED_N}")
    if n == 4 or phase_order is PhaseOrder.xyxyxyxy:
        return "XY" * (n // 2)
    return "XYXYYXYX"


def _period_events(
    timings: CompositeTimings, tau: float, start: float, phases: tuple[float, ...]
) -> list[PulseEvent]:
    """Ten pulses of one period: a composite and its mirror image."""
    first = [
        PulseEvent(center_time=start + x * tau, phase=phase)
        for x, phase in zip(timings.x, phases[:5])
    ]
    second = [
        PulseEvent(center_time=start + (tau - x * tau), phase=phase)
        for x, phase in zip(reversed(timings.x), phases[5:])
    ]
    return first + second


def _letter_phases(letter: str) -> tuple[float, ...]:
    shift = Y_PHASE_SHIFT if letter == "Y" else 0.0
    return tuple(phase + shift for phase in X_PHASES)


def build_axy(
    n: int,
    timings: CompositeTimings,
    tau: float,
    repeats: int,
    phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx,
) -> PulseSchedule:
    """`repeats` units of n composites, each unit spanning n/2 periods."""
    if tau <= 0 or repeats < 1:
        raise DomainError("period and repeats must be positive")
    pattern = composite_pattern(n, phase_order)
    unit_periods = n // 2
    events: list[PulseEvent] = []
    for period in range(repeats * unit_periods):
        letters = pattern[2 * (period % unit_periods) :][:2]
        phases = _letter_phases(letters[0]) + _letter_phases(letters[1])
        events.extend(_period_events(timings, tau, period * tau, phases))
    return PulseSchedule(
        kind=SequenceKind.axy,
        label=f"AXY-{n}",
        events=tuple(events),
        period=tau,
        repetitions=repeats * unit_periods,
        unit_periods=unit_periods,
    )


def build_xtilde(
    timings: CompositeTimings, tau: float, repeats: int, n: int = 8
) -> PulseSchedule:
    """AXY pulse times with every rotation about x."""
    axy = build_axy(n, timings, tau, repeats)
    return axy.model_copy(
        update={
            "kind": SequenceKind.xtilde,
            "label": f"X~-{n}",
            "events": tuple(e.model_copy(update={"phase": 0.0}) for e in axy.events),
            "unit_periods": 1,
        }
    )


def build_cpmg(tau: float, repeats: int, phase: float = CPMG_PHASE) -> PulseSchedule:
    if tau <= 0 or repeats < 1:
        raise DomainError("period and repeats must be positive")
    events = [
        PulseEvent(center_time=period * tau + offset * tau, phase=phase)
        for period in range(repeats)
        for offset in (0.25, 0.75)
    ]
    return PulseSchedule(
        kind=SequenceKind.cpmg,
        label="CPMG",
        events=tuple(events),
        period=tau,
        repetitions=repeats,
    )


def apply_finite_width(schedule: PulseSchedule, omega: float) -> PulseSchedule:
    """Give every pulse the pi-pulse duration pi / omega around its center."""
    if omega <= 0:
        raise DomainError(f"Rabi frequency {omega} must be positive")
    width = np.pi / omega
    events = tuple(e.model_copy(update={"duration": width}) for e in schedule.events)
    check_overlap(events, schedule.total_time)
    return schedule.model_copy(update={"events": events})


def check_overlap(events: tuple[PulseEvent, ...], total_time: float) -> None:
    if events and events[0].start < 0.0:
        raise ScheduleOverlapError(-1, 0, events[0].start)
    for i, (a, b) in enumerate(pairwise(events)):
        if b.start - a.end < 0.0:
            raise ScheduleOverlapError(i, i + 1, b.start - a.end)
    if events and events[-1].end > total_time:
        raise ScheduleOverlapError(len(events) - 1, len(events), total_time - events[-1].end)


def frequency_to_tau(freq_mhz: float, k_dd: int) -> float:
    """Period whose k_dd-th harmonic sits at freq_mhz."""
    if freq_mhz <= 0:
        raise DomainError(f"frequency {freq_mhz} MHz must be positive")
    return k_dd / freq_mhz


class ScheduleFamily(BaseModel):
    """Recipe that rebuilds one sequence for any period, used by sweeps."""

    kind: SequenceKind = SequenceKind.axy
    n: int = 8
    phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx
    timings: CompositeTimings | None = None
    k_dd: PositiveInt = 1
    repeats: PositiveInt = 1
    rabi_mhz: PositiveFloat | None = Field(
        default=None, description="finite pulse width pi / Omega when set"
    )

    model_config = ConfigDict(extra="forbid", frozen=True)

    def build(self, tau: float) -> PulseSchedule:
        match self.kind:
            case SequenceKind.axy:
                schedule = build_axy(
                    self.n, self._timings(), tau, self.repeats, self.phase_order
                )
            case SequenceKind.xtilde:
                schedule = build_xtilde(self._timings(), tau, self.repeats, self.n)
            case SequenceKind.cpmg:
                schedule = build_cpmg(tau, self.repeats)
            case x:
                raise AssertionError(f"Expected code to be unreachable {x}")
        if self.rabi_mhz is None:
            return schedule
        return apply_finite_width(schedule, TWO_PI * self.rabi_mhz)

    def for_frequency(self, freq_mhz: float) -> PulseSchedule:
        return self.build(frequency_to_tau(freq_mhz, self.k_dd))

    def _timings(self) -> CompositeTimings:
        if self.timings is None:
            raise ConfigError(f"{self.kind} sequences need composite timings")
        return self.timings

    @property
    def pulse_count(self) -> int:
        per_repeat = 2 if self.kind is SequenceKind.cpmg else 5 * self.n
        return per_repeat * self.repeats

    def describe(self) -> str:
        label = "CPMG" if self.kind is SequenceKind.cpmg else f"{self.kind}-{self.n}"
        width = "instantaneous" if self.rabi_mhz is None else f"rabi {self.rabi_mhz} MHz"
        return f"{label} k_dd={self.k_dd} pulses={self.pulse_count} {width}"


def build_axy_for_frequency(
    n: int,
    timings: CompositeTimings,
    freq_mhz: float,
    k_dd: int,
    repeats: int,
    phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx,
) -> PulseSchedule:
    return build_axy(n, timings, frequency_to_tau(freq_mhz, k_dd), repeats, phase_order)


def build_cpmg_for_frequency(freq_mhz: float, k_dd: int, repeats: int) -> PulseSchedule:
    return build_cpmg(frequency_to_tau(freq_mhz, k_dd), repeats)
