from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat

from axy_dd.constants import TWO_PI

DEFAULT_ETAS = tuple(float(e) for e in np.logspace(-3.0, -2.0, 8))


class SequenceErrorKind(StrEnum):
    x_unequal_delays = "x_unequal_delays"
    x_no_delay = "x_no_delay"
    axy4 = "axy4"
    axy8 = "axy8"


class ErrorParams(BaseModel):
    """Static control errors scaled together: delta = eta * delta_tilde, epsilon = eta * epsilon_tilde."""

    delta_tilde: float = 1.0
    epsilon_tilde: float = 1.0
    eta: float = Field(default=0.0, ge=0.0, lt=1.0)
    omega: PositiveFloat = TWO_PI * 40.0
    """Rabi frequency, rad/µs."""
    free_detuning: float = TWO_PI * 1.0
    """Detuning acting between pulses, rad/µs; held fixed while eta sweeps."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    @property
    def delta(self) -> float:
        return self.eta * self.delta_tilde

    @property
    def epsilon(self) -> float:
        return self.eta * self.epsilon_tilde

    def at(self, eta: float) -> "ErrorParams":
        return self.model_copy(update={"eta": eta})

    def ideal(self) -> "ErrorParams":
        return self.at(0.0)


class OrderScalingResult(BaseModel):
    kind: SequenceErrorKind
    etas: list[float]
    distances: list[float]
    slope: float | None
    """Least-squares slope of log distance against log eta; None when nothing is fittable."""
