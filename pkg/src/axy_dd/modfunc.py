"""Modulation function F(t) of a periodic pulse train and its Fourier coefficients.

F starts at +1 at t = 0 and flips sign at every pulse. One period holds the
composite pulses at x1..x5 and their mirror images at 1 - x5..1 - x1, all
as fractions of the period. Coefficients follow
f_k = (2/tau) * integral over one period of F(t) cos(k omega_dd t).
"""

from collections.abc import Sequence

import numpy as np

from axy_dd.constants import DEFAULT_K_MAX
from axy_dd.exceptions import DomainError
from axy_dd.models.timings import CompositeTimings, FourierSpectrum

CPMG_FLIPS = (0.25, 0.75)


def pulse_fractions(timings: CompositeTimings) -> np.ndarray:
    """The ten sign-flip positions of one period, sorted."""
    x = np.asarray(timings.x, dtype=float)
    return np.concatenate([x, 1.0 - x[::-1]])


def modulation_value(timings: CompositeTimings, t_frac: float) -> int:
    if not 0.0 <= t_frac < 1.0:
        raise DomainError(f"t_frac {t_frac} outside [0, 1)")
    flips = np.searchsorted(pulse_fractions(timings), t_frac, side="right")
    return 1 if flips % 2 == 0 else -1


def _intervals(flips: Sequence[float]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    edges = np.concatenate([[0.0], np.asarray(flips, dtype=float), [1.0]])
    signs = np.where(np.arange(len(edges) - 1) % 2 == 0, 1.0, -1.0)
    return edges[:-1], edges[1:], signs


def fourier_coeff_from_flips(flips: Sequence[float], k: int) -> float:
    """Exact coefficient for any flip pattern, summed per sign-constant interval."""
    if k < 0:
        raise DomainError(f"harmonic index {k} is negative")
    start, stop, signs = _intervals(flips)
    if k == 0:
        return float(2.0 * np.sum(signs * (stop - start)))
    phase = 2.0 * np.pi * k
    total = np.sum(signs * (np.sin(phase * stop) - np.sin(phase * start)))
    return float(total / (np.pi * k))


def fourier_coeff_numeric(timings: CompositeTimings, k: int) -> float:
    return fourier_coeff_from_flips(pulse_fractions(timings), k)


def fourier_coeff_symmetric(x1: float, x2: float, k: int) -> float:
    """Closed form for the symmetric construction; even harmonics vanish."""
    if k % 2 == 0:
        return 0.0
    return float(
        4.0
        / (np.pi * k)
        * (
            2.0 * np.sin(2.0 * np.pi * k * x1)
            - 2.0 * np.sin(2.0 * np.pi * k * x2)
            + np.sin(k * np.pi / 2.0)
        )
    )


def cpmg_coeff(k: int) -> float:
    if k < 0:
        raise DomainError(f"harmonic index {k} is negative")
    if k == 0:
        return 0.0
    # sin(k pi / 2) taken exactly
    return 4.0 * (0.0, 1.0, 0.0, -1.0)[k % 4] / (k * np.pi)


def fourier_spectrum(
    timings: CompositeTimings, tau: float, k_max: int = DEFAULT_K_MAX
) -> FourierSpectrum:
    return FourierSpectrum(
        coefficients=tuple(fourier_coeff_numeric(timings, k) for k in range(k_max + 1)),
        period_us=tau,
    )


def max_residual(timings: CompositeTimings, constraints: list[tuple[int, float]]) -> float:
    """Largest |f_k - target| over the constraints, evaluated with the oracle."""
    return max(abs(fourier_coeff_numeric(timings, k) - f) for k, f in constraints)
