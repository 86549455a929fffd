"""Resonant effective model H_int = (m_s / 4) f sz (a . I) for one addressed spin."""

import numpy as np

from axy_dd.backends.propagators import SIGMA, evolve
from axy_dd.models.bath import NuclearSpin
from axy_dd.spin_bath import effective_frame

X_PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)
X_MINUS = np.array([-1.0, 1.0]) / np.sqrt(2.0)


def interaction_hamiltonian(a_perp: np.ndarray, f_kdd: float, m_s: int) -> np.ndarray:
    nuclear = sum(0.5 * a * s for a, s in zip(a_perp, SIGMA))
    return 0.25 * m_s * f_kdd * np.kron(SIGMA[2], nuclear)


def effective_prediction(
    spin: NuclearSpin, f_kdd: float, m_s: int, total_time: float, b_z: float = 200.0
) -> float:
    """Transition probability after `total_time` under the effective model.

    Evolves NV and spin exactly (4x4); equals [1 - cos(m_s f |a_perp| T / 4)] / 2.
    """
    frame = spin.frame or effective_frame(spin, b_z, m_s)
    u = evolve(interaction_hamiltonian(np.asarray(frame.a_perp), f_kdd, m_s), total_time)
    block = np.kron(X_MINUS, np.eye(2)) @ u @ np.kron(X_PLUS, np.eye(2)).T
    return float(np.sum(np.abs(block) ** 2) / 2.0)


def effective_prediction_closed_form(
    a_perp_norm: float, f_kdd: float, m_s: int, total_time: float
) -> float:
    return 0.5 * (1.0 - np.cos(m_s * f_kdd * a_perp_norm * total_time / 4.0))
