from collections.abc import Hashable, Sequence
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh

from axy_dd.models.bath import DipolarMode, NuclearSpin
from axy_dd.spin_bath import dipolar_coupling

# durations are rounded before caching so that gaps which differ only by
# floating-point noise share one propagator
DURATION_DECIMALS = 12

SIGMA = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)


@lru_cache(maxsize=16)
def spin_operators(n: int) -> tuple[tuple[np.ndarray, np.ndarray, np.ndarray], ...]:
    """(Ix, Iy, Iz) of each of n spin-1/2 in the 2**n product space."""
    ops = []
    for site in range(n):
        left = np.eye(2**site)
        right = np.eye(2 ** (n - site - 1))
        ops.append(tuple(np.kron(np.kron(left, 0.5 * s), right) for s in SIGMA))
    return tuple(ops)


def cluster_hamiltonians(
    spins: Sequence[NuclearSpin],
    b_z: float,
    m_s: int,
    dipolar: DipolarMode = DipolarMode.full,
    coupling_groups: Sequence[Sequence[int]] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Nuclear Hamiltonians conditioned on the NV in |0> and in |m_s>.

    `coupling_groups` restricts dipolar couplings to pairs inside one group.
    """
    n = len(spins)
    ops = spin_operators(n)
    h0 = np.zeros((2**n, 2**n), dtype=complex)
    hyperfine = np.zeros_like(h0)
    for spin, (ix, iy, iz) in zip(spins, ops):
        h0 -= spin.gamma * b_z * iz
        hyperfine += sum(a * op for a, op in zip(spin.hyperfine, (ix, iy, iz)))
    for i, j in _coupled_pairs(n, coupling_groups):
        tensor = dipolar_coupling(spins[i], spins[j], dipolar)
        for a in range(3):
            for b in range(3):
                if tensor[a, b] != 0.0:
                    h0 += tensor[a, b] * ops[i][a] @ ops[j][b]
    return h0, h0 + m_s * hyperfine


def _coupled_pairs(
    n: int, groups: Sequence[Sequence[int]] | None
) -> list[tuple[int, int]]:
    if groups is None:
        groups = [range(n)]
    return [(i, j) for group in groups for i in group for j in group if i < j]


class PropagatorCache:
    """Eigendecomposition per Hamiltonian key, propagator per (key, duration).

    One cache per worker; periodic schedules reuse a handful of segments
    thousands of times.
    """

    def __init__(self) -> None:
        self._spectra: dict[Hashable, tuple[np.ndarray, np.ndarray]] = {}
        self._propagators: dict[tuple[Hashable, float], np.ndarray] = {}

    def add(self, key: Hashable, hamiltonian: np.ndarray) -> None:
        if key not in self._spectra:
            self._spectra[key] = eigh(hamiltonian)

    def __contains__(self, key: Hashable) -> bool:
        return key in self._spectra

    def __call__(self, key: Hashable, duration: float) -> np.ndarray:
        t = round(duration, DURATION_DECIMALS)
        cached = self._propagators.get((key, t))
        if cached is None:
            cached = hermitian_propagator(*self._spectra[key], t)
            self._propagators[(key, t)] = cached
        return cached

    def __len__(self) -> int:
        return len(self._propagators)


def hermitian_propagator(
    energies: np.ndarray, vectors: np.ndarray, duration: float
) -> np.ndarray:
    """exp(-i H t) from the eigendecomposition of H."""
    return (vectors * np.exp(-1j * energies * duration)) @ vectors.conj().T


def evolve(hamiltonian: np.ndarray, duration: float) -> np.ndarray:
    return hermitian_propagator(*eigh(hamiltonian), duration)


def unitarity_error(u: np.ndarray) -> float:
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))
