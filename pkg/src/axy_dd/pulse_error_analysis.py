"""Error algebra of imperfect pi pulses and the order of its cancellation.

Only the NV two-level system is modelled. A pulse about the axis at phase
phi with relative amplitude mismatch delta and relative detuning
epsilon = Delta / Omega is the exact rotation

    R = cos(theta) - i sin(theta) (s_phi + epsilon sz) / sqrt(1 + epsilon^2),
    theta = (pi - 2 delta) sqrt(1 + epsilon^2) / 2,

and a delay t between pulses is exp(-i Delta_free sz t / 2).
"""

import logging
from collections.abc import Sequence

import numpy as np

from axy_dd.constants import X_PHASES, Y_PHASE_SHIFT
from axy_dd.exceptions import DomainError
from axy_dd.models.errors import (
    DEFAULT_ETAS,
    ErrorParams,
    OrderScalingResult,
    SequenceErrorKind,
)
from axy_dd.models.schedule import PhaseOrder, PulseEvent
from axy_dd.models.timings import CompositeTimings
from axy_dd.sequence_builder import build_axy

logger = logging.getLogger(__name__)

IDENTITY = np.eye(2, dtype=complex)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
DISTANCE_FLOOR = 1e-12
SYMMETRY_TOLERANCE = 1e-12
MAX_ETA = 0.1


def sigma_phi(phi: float) -> np.ndarray:
    return np.array([[0.0, np.exp(-1j * phi)], [np.exp(1j * phi), 0.0]])


def z_rotation(angle: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def imperfect_rotation(phi: float, params: ErrorParams) -> np.ndarray:
    """Exact propagator of a nominal pi pulse about phi with the errors in `params`."""
    epsilon = params.epsilon
    norm = np.sqrt(1.0 + epsilon**2)
    theta = 0.5 * (np.pi - 2.0 * params.delta) * norm
    axis = (sigma_phi(phi) + epsilon * SIGMA_Z) / norm
    return np.cos(theta) * IDENTITY - 1j * np.sin(theta) * axis


def rotation_expansion(phi: float, params: ErrorParams) -> np.ndarray:
    """Second-order expansion of `imperfect_rotation` in delta and epsilon."""
    delta, epsilon = params.delta, params.epsilon
    return (
        -1j * (1.0 - 0.5 * (delta**2 + epsilon**2)) * sigma_phi(phi)
        - 1j * epsilon * SIGMA_Z
        + (delta - 0.25 * np.pi * epsilon**2) * IDENTITY
    )


def free_precession(detuning: float, duration: float) -> np.ndarray:
    return z_rotation(detuning * duration)


def train_propagator(
    events: Sequence[PulseEvent],
    params: ErrorParams,
    total_time: float | None = None,
) -> np.ndarray:
    """Delays and imperfect rotations in time order, from t = 0 to `total_time`.

    Without `total_time` the product ends at the last pulse.
    """
    u = IDENTITY.copy()
    t = 0.0
    for event in events:
        u = imperfect_rotation(event.phase, params) @ free_precession(
            params.free_detuning, event.center_time - t
        ) @ u
        t = event.center_time
    if total_time is not None:
        u = free_precession(params.free_detuning, total_time - t) @ u
    return u


def composite_events(
    timings: CompositeTimings, tau: float, phase_shift: float = 0.0
) -> list[PulseEvent]:
    """The five pulses of one composite, measured from its first pulse."""
    x0 = timings.x[0]
    return [
        PulseEvent(center_time=(x - x0) * tau, phase=phase + phase_shift)
        for x, phase in zip(timings.x, X_PHASES)
    ]


def composite_with_delays(
    timings: CompositeTimings, tau: float, params: ErrorParams, letter: str = "X"
) -> np.ndarray:
    """Imperfect composite X (or Y) including the four delays between its pulses.

    Y is X conjugated by a pi/2 rotation about z.
    """
    x = train_propagator(composite_events(timings, tau), params)
    match letter:
        case "X":
            return x
        case "Y":
            rz = z_rotation(Y_PHASE_SHIFT)
            return rz @ x @ rz.conj().T
        case other:
            raise DomainError(f"composite letter must be X or Y, got {other!r}")


def sequence_propagator(
    kind: SequenceErrorKind,
    timings: CompositeTimings,
    tau: float,
    params: ErrorParams,
    phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx,
) -> np.ndarray:
    match kind:
        case SequenceErrorKind.x_unequal_delays:
            return composite_with_delays(timings, tau, params)
        case SequenceErrorKind.x_no_delay:
            return train_propagator(
                [PulseEvent(center_time=0.0, phase=phase) for phase in X_PHASES], params
            )
        case SequenceErrorKind.axy4 | SequenceErrorKind.axy8:
            n = 4 if kind is SequenceErrorKind.axy4 else 8
            schedule = build_axy(n, timings, tau, 1, phase_order)
            return train_propagator(schedule.events, params, schedule.total_time)
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


def propagator_distance(u: np.ndarray, reference: np.ndarray) -> float:
    """Distance of u from `reference` up to a global phase.

    With V = W / sqrt(det W), W = reference^dagger u, returns
    sqrt(|V10|^2 + Im(V00)^2) = |sin(rotation angle / 2)|, free of the
    cancellation in sqrt(1 - |Tr V|^2 / 4).
    """
    w = reference.conj().T @ u
    v = w / np.sqrt(np.linalg.det(w))
    return float(np.sqrt(abs(v[1, 0]) ** 2 + v[0, 0].imag ** 2))


def fit_slope(etas: Sequence[float], distances: Sequence[float]) -> float | None:
    """Slope of log distance against log eta over points above the floor."""
    eta = np.asarray(etas, dtype=float)
    d = np.asarray(distances, dtype=float)
    keep = d >= DISTANCE_FLOOR
    if np.count_nonzero(keep) < 2:
        logger.warning(
            "degenerate order fit: %d of %d distances above %.0e",
            np.count_nonzero(keep),
            d.size,
            DISTANCE_FLOOR,
        )
        return None
    slope, _ = np.polyfit(np.log(eta[keep]), np.log(d[keep]), 1)
    return float(slope)


def _check_etas(etas: Sequence[float]) -> None:
    eta = np.asarray(etas, dtype=float)
    if eta.size < 2 or np.any(eta <= 0.0) or np.any(eta > MAX_ETA):
        raise DomainError(f"eta grid must hold at least two values in (0, {MAX_ETA}]")
    if eta.max() < 10.0 * eta.min():
        raise DomainError("eta grid must span at least a decade")


def order_scaling_fit(
    kind: SequenceErrorKind,
    timings: CompositeTimings,
    tau: float,
    template: ErrorParams,
    etas: Sequence[float] = DEFAULT_ETAS,
    phase_order: PhaseOrder = PhaseOrder.xyxy_yxyx,
) -> OrderScalingResult:
    """Fit the order in eta at which the sequence departs from its ideal form."""
    _check_etas(etas)
    reference = sequence_propagator(kind, timings, tau, template.ideal(), phase_order)
    distances = [
        propagator_distance(
            sequence_propagator(kind, timings, tau, template.at(eta), phase_order),
            reference,
        )
        for eta in etas
    ]
    slope = fit_slope(etas, distances)
    logger.info("order scaling of %s: slope %s", kind, slope)
    return OrderScalingResult(
        kind=kind, etas=list(etas), distances=distances, slope=slope
    )


def expansion_scaling_fit(
    phi: float, template: ErrorParams, etas: Sequence[float] = DEFAULT_ETAS
) -> float | None:
    """Order in eta of the gap between a rotation and its second-order expansion."""
    _check_etas(etas)
    residuals = [
        float(
            np.linalg.norm(
                imperfect_rotation(phi, template.at(eta))
                - rotation_expansion(phi, template.at(eta)),
                2,
            )
        )
        for eta in etas
    ]
    return fit_slope(etas, residuals)


def composite_delays(timings: CompositeTimings) -> np.ndarray:
    """The four inter-pulse delays of a composite, in units of the period."""
    return np.diff(np.asarray(timings.x))


def symmetry_delay_check(timings: CompositeTimings) -> bool:
    """True when the delays mirror about the central pulse and that pulse sits at 1/4."""
    d1, d2, d3, d4 = composite_delays(timings)
    return bool(
        abs(d4 - d1) <= SYMMETRY_TOLERANCE
        and abs(d3 - d2) <= SYMMETRY_TOLERANCE
        and abs(timings.x[2] - 0.25) <= SYMMETRY_TOLERANCE
    )
