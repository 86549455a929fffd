from enum import StrEnum
from typing import Literal, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from axy_dd.constants import CONSTANTS
from axy_dd.types import Vector3


class DipolarMode(StrEnum):
    full = "full"
    secular = "secular"
    off = "off"


class EffectiveFrame(BaseModel):
    omega_vec: Vector3
    omega_hat: Vector3
    omega: float
    a_perp: Vector3

    model_config = ConfigDict(frozen=True)

    @property
    def a_perp_norm(self) -> float:
        return float(np.linalg.norm(self.a_perp))


class NuclearSpin(BaseModel):
    position: Vector3
    """nm, relative to the NV site."""
    hyperfine: Vector3
    """rad/µs"""
    gamma: float = CONSTANTS.gamma_c13
    frame: EffectiveFrame | None = None

    model_config = ConfigDict(frozen=True)


class BathModel(BaseModel):
    spins: tuple[NuclearSpin, ...] = Field(default_factory=tuple)
    clusters: tuple[tuple[int, ...], ...] = Field(default_factory=tuple)
    seed: int | None = None
    b_z_gauss: float = Field(default=200.0, gt=0)
    m_s: Literal[-1, 1] = 1
    abundance: float | None = None
    radius_nm: float | None = None
    max_cluster: int = Field(default=6, ge=1)
    dipolar: DipolarMode = DipolarMode.full

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_partition(self) -> Self:
        members = sorted(i for cluster in self.clusters for i in cluster)
        if self.clusters and members != list(range(len(self.spins))):
            raise ValueError("clusters must partition the spin indices")
        if any(len(c) > self.max_cluster for c in self.clusters):
            raise ValueError(f"a cluster exceeds the maximum size {self.max_cluster}")
        return self

    @property
    def groups(self) -> tuple[tuple[int, ...], ...]:
        """Clusters, or one singleton per spin when no partition is stored."""
        return self.clusters or tuple((i,) for i in range(len(self.spins)))

    def cluster_spins(self, cluster: tuple[int, ...]) -> list[NuclearSpin]:
        return [self.spins[i] for i in cluster]

    def __len__(self) -> int:
        return len(self.spins)


class SpinAddressability(BaseModel):
    index: int
    larmor_mhz: float
    a_perp_mhz: float
    zeeman_ratio: float
    """|gamma B| / (k_dd |a_perp|); large means counter-rotating terms are negligible."""
    separation_ratio: float | None
    """|omega_j - omega_target| / (|f| |a_perp_j|); None for the target itself."""
    flagged: bool


class AddressabilityReport(BaseModel):
    target_index: int
    k_dd: int
    f_kdd: float
    margin: float
    spins: list[SpinAddressability]

    @property
    def flagged(self) -> list[int]:
        return [s.index for s in self.spins if s.flagged]
