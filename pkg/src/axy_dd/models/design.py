from typing import Self

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    PositiveInt,
    model_validator,
)

from axy_dd.models.errors import DEFAULT_ETAS, ErrorParams, SequenceErrorKind
from axy_dd.models.schedule import PhaseOrder, PulseSchedule, SequenceKind
from axy_dd.models.shared import Link
from axy_dd.models.timings import CompositeTimings, HarmonicTarget, SolverPath

TABLE_K_MAX = 10


class DesignRequest(HarmonicTarget):
    symmetric: bool | None = None
    """None picks the closed form where one exists, then the numeric solver."""

    @property
    def target(self) -> HarmonicTarget:
        return HarmonicTarget(k_dd=self.k_dd, f_target=self.f_target, zeroed=self.zeroed)


class HarmonicValue(BaseModel):
    k: int
    f_k: float


class DesignResponse(BaseModel):
    timings: CompositeTimings
    path: SolverPath
    residual: float
    coefficients: list[HarmonicValue]
    links: list[Link] = Field(default_factory=list)


class ScheduleRequest(BaseModel):
    kind: SequenceKind = SequenceKind.axy
    n: int = 8
    phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx
    timings: CompositeTimings | None = None
    tau_us: PositiveFloat | None = None
    k_dd: PositiveInt = 1
    freq_mhz: PositiveFloat | None = None
    repeats: PositiveInt = 1
    rabi_mhz: PositiveFloat | None = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_period(self) -> Self:
        if (self.tau_us is None) == (self.freq_mhz is None):
            raise ValueError("give exactly one of tau_us and freq_mhz")
        return self


class ScheduleResponse(BaseModel):
    summary: str
    pulse_count: int
    total_time_us: float
    schedule: PulseSchedule
    links: list[Link] = Field(default_factory=list)


class OrderScalingRequest(BaseModel):
    kind: SequenceErrorKind
    timings: CompositeTimings
    tau_us: PositiveFloat
    errors: ErrorParams = Field(default_factory=ErrorParams)
    etas: list[float] = Field(default_factory=lambda: list(DEFAULT_ETAS))
    phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx

    model_config = ConfigDict(extra="forbid")
