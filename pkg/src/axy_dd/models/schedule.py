from enum import StrEnum
from itertools import pairwise
from typing import Self

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    model_validator,
)


class SequenceKind(StrEnum):
    axy = "axy"
    cpmg = "cpmg"
    xtilde = "xtilde"


class PhaseOrder(StrEnum):
    xyxyxyxy = "xyxyxyxy"
    xyxy_yxyx = "xyxy_yxyx"


class PulseEvent(BaseModel):
    center_time: float
    phase: float
    duration: NonNegativeFloat = 0.0
    nominal_angle: float = np.pi

    model_config = ConfigDict(frozen=True)

    @property
    def start(self) -> float:
        return self.center_time - 0.5 * self.duration

    @property
    def end(self) -> float:
        return self.center_time + 0.5 * self.duration


class PulseSchedule(BaseModel):
    kind: SequenceKind
    label: str
    events: tuple[PulseEvent, ...] = Field(default_factory=tuple)
    period: PositiveFloat
    repetitions: PositiveInt
    unit_periods: PositiveInt = 1
    """Periods in one repeating phase pattern (4 for AXY-8, 2 for AXY-4)."""

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_events(self) -> Self:
        if any(b.center_time < a.center_time for a, b in pairwise(self.events)):
            raise ValueError("events must be sorted by center time")
        if self.repetitions % self.unit_periods:
            raise ValueError(
                f"{self.repetitions} periods do not hold whole units of "
                f"{self.unit_periods}"
            )
        return self

    @property
    def total_time(self) -> float:
        return self.repetitions * self.period

    @property
    def unit_duration(self) -> float:
        return self.unit_periods * self.period

    @property
    def unit_count(self) -> int:
        return self.repetitions // self.unit_periods

    @property
    def unit_events(self) -> tuple[PulseEvent, ...]:
        """Events of the first repeating unit; later units are time shifted copies."""
        end = self.unit_duration
        return tuple(e for e in self.events if e.center_time < end)

    @property
    def times(self) -> np.ndarray:
        return np.array([e.center_time for e in self.events])

    @property
    def phases(self) -> np.ndarray:
        return np.array([e.phase for e in self.events])

    @property
    def is_instantaneous(self) -> bool:
        return all(e.duration == 0.0 for e in self.events)

    def __len__(self) -> int:
        return len(self.events)
