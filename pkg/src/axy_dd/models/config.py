"""Sweep run configuration, read from TOML.

    [run]       seed, threads, out
    [field]     b_z_gauss, m_s
    [sequence]  kind, n, phase_order, k_dd, repeats and one timing source:
                timings = [x1..x5], f1, f3, or harmonic/target/zero
    [bath]      file, spins = [{position, hyperfine}], or [bath.generate]
    [errors]    detuning_mhz, amplitude_error
    [noise]     enabled, tau_mw_us, delta_omega, seed
    [grid]      start_mhz/stop_mhz/points, or center_on_spin/span_mhz/points
    [engine]    pulse_mode, rabi_mhz, integrator_substeps, dipolar, capacity_spins
"""

import tomllib
from pathlib import Path
from typing import Any, Literal, Self

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)

from axy_dd.models.bath import DipolarMode
from axy_dd.models.schedule import PhaseOrder, SequenceKind
from axy_dd.models.simulation import OUParams, PulseMode, SimulationConfig
from axy_dd.models.timings import CompositeTimings, HarmonicTarget
from axy_dd.types import Vector3


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RunSection(Section):
    seed: NonNegativeInt = 0
    threads: PositiveInt = 1
    out: str | None = None


class FieldSection(Section):
    b_z_gauss: PositiveFloat = 200.0
    m_s: Literal[-1, 1] = 1


class SequenceSection(Section):
    kind: SequenceKind = SequenceKind.axy
    n: Literal[4, 8] = 8
    phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx
    k_dd: PositiveInt = 1
    repeats: PositiveInt = 1
    timings: CompositeTimings | None = None
    f1: float | None = None
    f3: float | None = None
    harmonic: PositiveInt | None = None
    target: float | None = None
    zero: tuple[NonNegativeInt, ...] = (2, 3, 4)

    @field_validator("timings", mode="before")
    @classmethod
    def timings_from_list(cls, value: Any) -> Any:
        if isinstance(value, list | tuple):
            return {"x": value}
        return value

    @model_validator(mode="after")
    def check_timing_source(self) -> Self:
        given = [
            name
            for name in ("timings", "f1", "f3", "target")
            if getattr(self, name) is not None
        ]
        if len(given) > 1:
            raise ValueError(f"give one timing source, got {', '.join(given)}")
        if self.kind is not SequenceKind.cpmg and not given:
            raise ValueError(f"{self.kind} sequences need timings, f1, f3 or target")
        if (self.target is None) != (self.harmonic is None):
            raise ValueError("harmonic and target go together")
        return self

    @property
    def harmonic_target(self) -> HarmonicTarget | None:
        """Solver target when the timings are designed rather than given."""
        if self.f1 is not None:
            return HarmonicTarget(k_dd=1, f_target=self.f1, zeroed=(2, 3, 4))
        if self.f3 is not None:
            return HarmonicTarget(k_dd=3, f_target=self.f3, zeroed=(1, 2, 4))
        if self.target is not None and self.harmonic is not None:
            return HarmonicTarget(k_dd=self.harmonic, f_target=self.target, zeroed=self.zero)
        return None


class SpinEntry(Section):
    position: Vector3
    """nm"""
    hyperfine: Vector3 | None = None
    """rad/µs; computed from the position when absent."""


class GenerateSection(Section):
    radius_nm: PositiveFloat
    abundance: float = Field(default=0.011, ge=0.0, le=1.0)
    max_cluster: PositiveInt = 6
    seed: NonNegativeInt | None = None


class BathSection(Section):
    file: str | None = None
    spins: tuple[SpinEntry, ...] | None = None
    generate: GenerateSection | None = None

    @model_validator(mode="after")
    def check_source(self) -> Self:
        sources = [s for s in (self.file, self.spins, self.generate) if s is not None]
        if len(sources) > 1:
            raise ValueError("give at most one of file, spins, generate")
        return self


class ErrorsSection(Section):
    detuning_mhz: float = 0.0
    amplitude_error: float = 0.0


class GridSection(Section):
    start_mhz: PositiveFloat | None = None
    stop_mhz: PositiveFloat | None = None
    points: int = Field(default=200, ge=2)
    center_on_spin: NonNegativeInt | None = None
    span_mhz: PositiveFloat | None = None

    @model_validator(mode="after")
    def check_window(self) -> Self:
        explicit = self.start_mhz is not None and self.stop_mhz is not None
        centered = self.center_on_spin is not None and self.span_mhz is not None
        if explicit == centered:
            raise ValueError(
                "give either start_mhz and stop_mhz, or center_on_spin and span_mhz"
            )
        start, stop = self.start_mhz, self.stop_mhz
        if start is not None and stop is not None and start >= stop:
            raise ValueError(
                f"grid must be strictly increasing, got start_mhz {start} "
                f">= stop_mhz {stop}"
            )
        return self


class EngineSection(Section):
    pulse_mode: PulseMode = PulseMode.instantaneous
    rabi_mhz: PositiveFloat = 40.0
    integrator_substeps: PositiveInt = 4
    dipolar: DipolarMode = DipolarMode.full
    capacity_spins: PositiveInt = 7


class SweepConfig(Section):
    run: RunSection = Field(default_factory=RunSection)
    field: FieldSection = Field(default_factory=FieldSection)
    sequence: SequenceSection
    bath: BathSection = Field(default_factory=BathSection)
    errors: ErrorsSection = Field(default_factory=ErrorsSection)
    noise: OUParams = Field(default_factory=OUParams)
    grid: GridSection
    engine: EngineSection = Field(default_factory=EngineSection)

    @classmethod
    def from_toml(cls, text: str) -> Self:
        return cls.model_validate(tomllib.loads(text))

    @classmethod
    def load(cls, path: Path) -> Self:
        return cls.from_toml(path.read_text())

    def with_overrides(
        self, seed: int | None = None, threads: int | None = None, out: str | None = None
    ) -> Self:
        update = {
            k: v
            for k, v in (("seed", seed), ("threads", threads), ("out", out))
            if v is not None
        }
        return self.model_copy(update={"run": self.run.model_copy(update=update)})

    def reproducible_dump(self) -> dict[str, Any]:
        """Inputs that determine the output; thread count and paths are left out."""
        return self.model_dump(mode="json", exclude={"run": {"threads", "out"}})

    def simulation_config(self) -> SimulationConfig:
        return SimulationConfig(
            b_z_gauss=self.field.b_z_gauss,
            m_s=self.field.m_s,
            pulse_mode=self.engine.pulse_mode,
            detuning_mhz=self.errors.detuning_mhz,
            amplitude_error=self.errors.amplitude_error,
            rabi_mhz=self.engine.rabi_mhz,
            noise=self.noise,
            integrator_substeps=self.engine.integrator_substeps,
            dipolar=self.engine.dipolar,
            capacity_spins=self.engine.capacity_spins,
            seed=self.run.seed,
        )
