import numpy as np
from pydantic import BaseModel, ConfigDict

TYPE_JSON = "application/json"
TYPE_CSV = "text/csv"

TWO_PI = 2.0 * np.pi

# Units used throughout: times in µs, angular frequencies in rad/µs,
# fields in gauss, lengths in nm.


class PhysicalConstants(BaseModel):
    gamma_e: float = 17.6085963023
    """Electron gyromagnetic ratio, rad/µs/G."""
    gamma_c13: float = 6.728284e-3
    """Carbon-13 gyromagnetic ratio, rad/µs/G (1.0708 kHz/G)."""
    dipolar_prefactor: float = 1e-7 * 1.054571817e-34 * 1e20 * 1e21
    """mu0 * hbar / (4 pi) so that prefactor * gamma_i * gamma_j / r_nm**3 is rad/µs."""
    zero_field_splitting: float = TWO_PI * 2870.0
    """NV ground-state splitting D, rad/µs. Eliminated in the rotating frame."""
    lattice_constant_nm: float = 0.35668
    bond_length_nm: float = 0.15445

    model_config = ConfigDict(frozen=True)


CONSTANTS = PhysicalConstants()

# single-harmonic maximum of a ±1 valued modulation function
MAX_COEFFICIENT = 4.0 / np.pi

# |pi * f1| < 8 cos(pi/9) - 4 for the first-harmonic closed form
FIRST_HARMONIC_BOUND = (8.0 * np.cos(np.pi / 9.0) - 4.0) / np.pi

# Knill-type composite phases for one X unit
X_PHASES = (np.pi / 6.0, 0.0, np.pi / 2.0, 0.0, np.pi / 6.0)
Y_PHASE_SHIFT = np.pi / 2.0
CPMG_PHASE = np.pi / 2.0

EQUALLY_SPACED = (0.05, 0.15, 0.25, 0.35, 0.45)

RESIDUAL_TOLERANCE = 1e-8
DEFAULT_K_MAX = 64
