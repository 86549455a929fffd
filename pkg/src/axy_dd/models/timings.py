from enum import StrEnum
from itertools import pairwise
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from axy_dd.constants import MAX_COEFFICIENT, TWO_PI
from axy_dd.types import HalfPeriodFraction


class CompositeTimings(BaseModel):
    """Relative pulse times x1..x5 of one composite, as fractions of the period.

    The composite occupies the first half period; the second composite of
    the period is its mirror image about the period midpoint.
    """

    x: tuple[
        HalfPeriodFraction,
        HalfPeriodFraction,
        HalfPeriodFraction,
        HalfPeriodFraction,
        HalfPeriodFraction,
    ]
    symmetric: bool = False

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def check_ordering(self) -> Self:
        if any(b <= a for a, b in pairwise(self.x)):
            raise ValueError(f"pulse times must be strictly increasing: {self.x}")
        x1, x2, x3, x4, x5 = self.x
        if self.symmetric and (x3 != 0.25 or x4 != 0.5 - x2 or x5 != 0.5 - x1):
            raise ValueError("symmetric timings need x3 = 1/4, x4 = 1/2 - x2, x5 = 1/2 - x1")
        return self

    @classmethod
    def from_pair(cls, x1: float, x2: float) -> Self:
        return cls(x=(x1, x2, 0.25, 0.5 - x2, 0.5 - x1), symmetric=True)

    @classmethod
    def equally_spaced(cls) -> Self:
        return cls.from_pair(0.05, 0.15)

    @property
    def pair(self) -> tuple[float, float]:
        return self.x[0], self.x[1]


class FourierSpectrum(BaseModel):
    coefficients: tuple[float, ...]
    period_us: float = Field(gt=0)

    @model_validator(mode="after")
    def check_bound(self) -> Self:
        if any(abs(f) > MAX_COEFFICIENT + 1e-12 for f in self.coefficients):
            raise ValueError("a Fourier coefficient exceeds 4/pi")
        return self

    @property
    def omega_dd(self) -> float:
        return TWO_PI / self.period_us

    def __getitem__(self, k: int) -> float:
        return self.coefficients[k]


class HarmonicTarget(BaseModel):
    k_dd: PositiveInt = 1
    f_target: float
    zeroed: tuple[int, ...] = (2, 3, 4)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_harmonics(self) -> Self:
        if self.k_dd in self.zeroed:
            raise ValueError(f"harmonic {self.k_dd} cannot be tuned and zeroed")
        if any(k < 0 for k in self.zeroed):
            raise ValueError("harmonic indices are non-negative")
        return self

    @property
    def odd_zeroed(self) -> tuple[int, ...]:
        return tuple(sorted({k for k in self.zeroed if k % 2}))

    def constraints(self) -> list[tuple[int, float]]:
        """(harmonic, required value) pairs, tuned harmonic first."""
        zeroed = sorted(set(self.zeroed))
        return [(self.k_dd, self.f_target)] + [(k, 0.0) for k in zeroed]


class SolverPath(StrEnum):
    closed_form = "closed-form"
    numeric = "numeric"


class DesignResult(BaseModel):
    timings: CompositeTimings
    path: SolverPath
    target: HarmonicTarget
    residual: float

    @property
    def pair(self) -> tuple[float, float]:
        return self.timings.pair
