import csv
import io
from enum import StrEnum
from typing import Any, Literal, Self

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    model_validator,
)

from axy_dd.constants import TWO_PI
from axy_dd.models.bath import DipolarMode

CSV_HEADER = ("freq_MHz", "tau_us", "probability")


class PulseMode(StrEnum):
    instantaneous = "instantaneous"
    finite = "finite"


class OUParams(BaseModel):
    enabled: bool = False
    tau_mw_us: PositiveFloat = 1000.0
    delta_omega: NonNegativeFloat = 7e-3
    """Relative drive amplitude fluctuation; stationary std is delta_omega * Omega."""
    seed: NonNegativeInt | None = None

    model_config = ConfigDict(extra="forbid", frozen=True)

    def c_mw(self, omega: float) -> float:
        return 2.0 * self.delta_omega**2 * omega**2 / self.tau_mw_us

    def stationary_std(self, omega: float) -> float:
        return self.delta_omega * omega


class SimulationConfig(BaseModel):
    b_z_gauss: PositiveFloat = 200.0
    m_s: Literal[-1, 1] = 1
    pulse_mode: PulseMode = PulseMode.instantaneous
    detuning_mhz: float = 0.0
    amplitude_error: float = 0.0
    rabi_mhz: PositiveFloat = 40.0
    noise: OUParams = Field(default_factory=OUParams)
    integrator_substeps: PositiveInt = 4
    dipolar: DipolarMode = DipolarMode.full
    capacity_spins: PositiveInt = 7
    seed: NonNegativeInt = 0

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def check_substeps(self) -> Self:
        if self.pulse_mode is PulseMode.finite and self.integrator_substeps < 4:
            raise ValueError("finite pulses need at least 4 integrator substeps")
        return self

    @property
    def detuning(self) -> float:
        return TWO_PI * self.detuning_mhz

    @property
    def rabi(self) -> float:
        return TWO_PI * self.rabi_mhz

    @property
    def noise_seed(self) -> int:
        return self.seed if self.noise.seed is None else self.noise.seed


class RunManifest(BaseModel):
    config: dict[str, Any]
    config_hash: str
    seed: int
    schedule: str
    points: int
    k_dd: int


class Spectrum(BaseModel):
    freq_mhz: list[float]
    """Matched sequence frequency k_dd * omega_dd / 2 pi."""
    tau_us: list[float]
    probability: list[float]
    k_dd: PositiveInt = 1
    manifest: RunManifest | None = None

    @model_validator(mode="after")
    def check_columns(self) -> Self:
        if not len(self.freq_mhz) == len(self.tau_us) == len(self.probability):
            raise ValueError("spectrum columns differ in length")
        if any(not 0.0 <= p <= 1.0 for p in self.probability):
            raise ValueError("probabilities must lie in [0, 1]")
        return self

    @property
    def population(self) -> np.ndarray:
        """|x+> population 1 - p; resonances appear as its dips."""
        return 1.0 - np.asarray(self.probability)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in zip(self.freq_mhz, self.tau_us, self.probability):
            writer.writerow(format(v, ".17g") for v in row)
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str, k_dd: int = 1) -> Self:
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_HEADER:
            raise ValueError(f"expected header {','.join(CSV_HEADER)}")
        columns = list(zip(*(map(float, row) for row in rows[1:]))) or [(), (), ()]
        freq, tau, probability = columns
        return cls(
            freq_mhz=list(freq),
            tau_us=list(tau),
            probability=list(probability),
            k_dd=k_dd,
        )

    def __len__(self) -> int:
        return len(self.freq_mhz)
