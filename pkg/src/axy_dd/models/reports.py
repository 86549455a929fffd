from pydantic import BaseModel, Field


class Dip(BaseModel):
    freq_mhz: float
    probability: float
    """Transition probability at the resonance; the |x+> population dips to 1 - p."""
    prominence: float
    width_mhz: float
    """Full width at half prominence."""
    spin_index: int | None = None
    line_mhz: float | None = None
    """omega_j / 2 pi of the assigned spin."""
    distance_mhz: float | None = None
    a_perp_mhz: float | None = None
    candidates: list[int] = Field(default_factory=list)
    """Spins whose lines fall inside the dip."""

    @property
    def assigned(self) -> bool:
        return self.spin_index is not None

    @property
    def overlapping(self) -> bool:
        return len(self.candidates) >= 2


class PeakReport(BaseModel):
    k_dd: int
    prominence: float
    tolerance_mhz: float
    dips: list[Dip]
    missing: list[int]
    """Spins with a line inside the sweep window but no assigned dip."""

    @property
    def resolved(self) -> list[int]:
        """Spins owning a dip that no other spin line shares."""
        return [
            d.spin_index
            for d in self.dips
            if d.spin_index is not None and not d.overlapping
        ]

    @property
    def unassigned(self) -> list[Dip]:
        return [d for d in self.dips if not d.assigned]

    @property
    def overlapping(self) -> list[Dip]:
        return [d for d in self.dips if d.overlapping]

    def summary(self) -> dict[str, int]:
        return {
            "dips": len(self.dips),
            "resolved": len(self.resolved),
            "overlapping": len(self.overlapping),
            "unassigned": len(self.unassigned),
            "missing": len(self.missing),
        }


class DeviationCell(BaseModel):
    detuning_mhz: float
    amplitude_error: float
    deviation: float
    """Mean |p - p_ideal| over the compared window."""
