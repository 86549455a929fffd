import numpy as np
from scipy.signal import lfilter

from axy_dd.exceptions import DomainError
from axy_dd.models.simulation import OUParams

UNIFORM_STEP_TOLERANCE = 1e-12


def ou_trajectory(
    params: OUParams,
    times: np.ndarray,
    omega: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Drive-amplitude fluctuation samples with the exact OU update.

    dOmega(t + dt) = dOmega(t) exp(-dt/tau) + n sqrt(c tau / 2 (1 - exp(-2 dt/tau))),
    starting from the stationary distribution of std delta_omega * omega.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return np.empty(0)
    steps = np.diff(times)
    if np.any(steps <= 0.0):
        raise DomainError("noise sample times must be strictly increasing")
    sigma = params.stationary_std(omega)
    normal = rng.standard_normal(times.size)
    decay = np.exp(-steps / params.tau_mw_us)
    kicks = np.concatenate([[sigma * normal[0]], sigma * np.sqrt(1.0 - decay**2) * normal[1:]])
    if steps.size and np.ptp(steps) <= UNIFORM_STEP_TOLERANCE * steps[0]:
        return lfilter([1.0], [1.0, -decay[0]], kicks)
    out = np.empty_like(kicks)
    out[0] = kicks[0]
    for i in range(1, kicks.size):
        out[i] = out[i - 1] * decay[i - 1] + kicks[i]
    return out
