"""Comparison and resonance detection on computed spectra."""

import logging

import numpy as np
from scipy.signal import find_peaks, peak_widths

from axy_dd.constants import TWO_PI
from axy_dd.exceptions import DomainError, GridMismatchError
from axy_dd.models.bath import BathModel, EffectiveFrame
from axy_dd.models.reports import Dip, PeakReport
from axy_dd.models.simulation import Spectrum
from axy_dd.spin_bath import effective_frame

logger = logging.getLogger(__name__)

DEFAULT_PROMINENCE = 0.02
GRID_RTOL = 1e-12


def _check_grids(a: Spectrum, b: Spectrum) -> None:
    if len(a) != len(b) or not np.allclose(
        a.freq_mhz, b.freq_mhz, rtol=GRID_RTOL, atol=0.0
    ):
        raise GridMismatchError("spectra are sampled on different frequency grids")


def spectrum_deviation(
    a: Spectrum, b: Spectrum, window: tuple[float, float] | None = None
) -> float:
    """Mean |p_a - p_b| over the grid points inside `window` (MHz, inclusive)."""
    _check_grids(a, b)
    freq = np.asarray(a.freq_mhz)
    mask = np.ones(freq.size, dtype=bool)
    if window is not None:
        mask = (freq >= window[0]) & (freq <= window[1])
    if not mask.any():
        raise DomainError(f"no grid points inside the window {window}")
    diff = np.abs(np.asarray(a.probability) - np.asarray(b.probability))
    return float(diff[mask].mean())


def _frames(bath: BathModel) -> list[EffectiveFrame]:
    return [
        s.frame or effective_frame(s, bath.b_z_gauss, bath.m_s) for s in bath.spins
    ]


def spin_lines(bath: BathModel) -> np.ndarray:
    """omega_j / 2 pi in MHz for every spin of the bath.

    On the matched-frequency axis k_dd / tau a spin resonates at its own
    Larmor frequency whatever the harmonic, since tau = k_dd / (omega_j / 2 pi).
    """
    return np.array([f.omega for f in _frames(bath)]) / TWO_PI


def _tolerance(centers: np.ndarray, freq: np.ndarray) -> float:
    if centers.size >= 2:
        return 0.5 * float(np.median(np.diff(centers)))
    return float(freq[-1] - freq[0])


def _assign(
    centers: np.ndarray, lines: np.ndarray, tolerance: float
) -> dict[int, tuple[int, float]]:
    """Greedy nearest-first matching; each dip and each spin used at most once."""
    if not centers.size or not lines.size:
        return {}
    distance = np.abs(centers[:, None] - lines[None, :])
    used_dips: set[int] = set()
    used_spins: set[int] = set()
    matches: dict[int, tuple[int, float]] = {}
    for flat in np.argsort(distance, axis=None, kind="stable"):
        i, j = (int(v) for v in np.unravel_index(flat, distance.shape))
        if distance[i, j] > tolerance:
            break
        if i in used_dips or j in used_spins:
            continue
        used_dips.add(i)
        used_spins.add(j)
        matches[i] = (j, float(distance[i, j]))
    return matches


def _dip(
    freq: float,
    probability: float,
    prominence: float,
    width: float,
    reach: float,
    lines: np.ndarray,
    match: tuple[int, float] | None,
    a_perp: list[float],
) -> Dip:
    dip = Dip(
        freq_mhz=freq,
        probability=probability,
        prominence=prominence,
        width_mhz=width,
        candidates=[int(j) for j in np.flatnonzero(np.abs(lines - freq) <= reach)],
    )
    if match is None:
        return dip
    j, distance = match
    return dip.model_copy(
        update={
            "spin_index": j,
            "line_mhz": float(lines[j]),
            "distance_mhz": distance,
            "a_perp_mhz": a_perp[j],
        }
    )


def detect_peaks(
    spectrum: Spectrum,
    bath: BathModel,
    k_dd: int | None = None,
    prominence: float = DEFAULT_PROMINENCE,
) -> PeakReport:
    """Locate resonances and attribute them to bath spins.

    A resonance is a maximum of p (a dip of the |x+> population) with at
    least `prominence`. Each is matched to the nearest spin line within half
    the median resonance spacing, and is overlapping when two or more lines
    fall within max(FWHM / 2, grid step) of it.
    """
    if len(spectrum) < 2:
        raise DomainError("resonance detection needs at least two grid points")
    k_dd = k_dd or spectrum.k_dd
    freq = np.asarray(spectrum.freq_mhz)
    p = np.asarray(spectrum.probability)
    if np.any(np.diff(freq) <= 0.0):
        raise DomainError(
            "resonance detection needs a strictly increasing frequency grid"
        )
    step = float(np.median(np.diff(freq)))
    peaks, properties = find_peaks(p, prominence=prominence)
    prominence_data = (
        properties["prominences"],
        properties["left_bases"],
        properties["right_bases"],
    )
    widths = peak_widths(p, peaks, rel_height=0.5, prominence_data=prominence_data)[0] * step
    lines = spin_lines(bath)
    tolerance = _tolerance(freq[peaks], freq)
    matches = _assign(freq[peaks], lines, tolerance)
    a_perp = [f.a_perp_norm / TWO_PI for f in _frames(bath)]
    dips = [
        _dip(
            float(freq[peak]),
            float(p[peak]),
            float(properties["prominences"][i]),
            float(widths[i]),
            max(0.5 * float(widths[i]), step),
            lines,
            matches.get(i),
            a_perp,
        )
        for i, peak in enumerate(peaks)
    ]
    assigned = {d.spin_index for d in dips}
    in_window = (lines >= freq[0]) & (lines <= freq[-1])
    report = PeakReport(
        k_dd=k_dd,
        prominence=prominence,
        tolerance_mhz=tolerance,
        dips=dips,
        missing=[int(j) for j in np.flatnonzero(in_window) if j not in assigned],
    )
    logger.info("resonance report: %s", report.summary())
    return report
