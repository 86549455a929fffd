"""Nuclear-spin environment of the NV centre.

Positions are in nm with the NV at the origin and its symmetry axis along z.
Couplings come out in rad/µs.
"""

import logging

import numpy as np
from scipy.spatial.transform import Rotation

from axy_dd.constants import CONSTANTS, TWO_PI, PhysicalConstants
from axy_dd.exceptions import (
    ConfigError,
    DegenerateFrameError,
    SingularGeometryError,
)
from axy_dd.models.bath import (
    AddressabilityReport,
    BathModel,
    DipolarMode,
    EffectiveFrame,
    NuclearSpin,
    SpinAddressability,
)
from axy_dd.rng import stream

logger = logging.getLogger(__name__)

Z_HAT = np.array([0.0, 0.0, 1.0])
EXCLUSION_RADIUS_NM = 0.25
DEFAULT_MARGIN = 10.0

_FCC = np.array([[0.0, 0.0, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])
DIAMOND_BASIS = np.concatenate([_FCC, _FCC + 0.25])

_NV_AXIS = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
# turns the crystal [111] bond direction onto z
NV_ROTATION = Rotation.from_rotvec(
    np.cross(_NV_AXIS, Z_HAT)
    / np.linalg.norm(np.cross(_NV_AXIS, Z_HAT))
    * np.arccos(_NV_AXIS @ Z_HAT)
).as_matrix()


def hyperfine_from_position(
    r: np.ndarray, gamma: float = CONSTANTS.gamma_c13, constants: PhysicalConstants = CONSTANTS
) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    distance = np.linalg.norm(r)
    if distance == 0.0:
        raise SingularGeometryError("nucleus placed on the NV site")
    prefactor = constants.dipolar_prefactor * constants.gamma_e * gamma / distance**3
    return prefactor * (Z_HAT - 3.0 * r[2] * r / distance**2)


def effective_frame(spin: NuclearSpin, b_z: float, m_s: int) -> EffectiveFrame:
    hyperfine = np.asarray(spin.hyperfine)
    omega_vec = spin.gamma * b_z * Z_HAT - 0.5 * m_s * hyperfine
    omega = float(np.linalg.norm(omega_vec))
    if omega == 0.0:
        raise DegenerateFrameError(
            f"Zeeman and hyperfine fields cancel for the spin at {spin.position}"
        )
    omega_hat = omega_vec / omega
    a_perp = hyperfine - (hyperfine @ omega_hat) * omega_hat
    return EffectiveFrame(
        omega_vec=omega_vec, omega_hat=omega_hat, omega=omega, a_perp=a_perp
    )


def with_frame(spin: NuclearSpin, b_z: float, m_s: int) -> NuclearSpin:
    return spin.model_copy(update={"frame": effective_frame(spin, b_z, m_s)})


def make_spin(
    position: np.ndarray,
    b_z: float,
    m_s: int,
    hyperfine: np.ndarray | None = None,
    gamma: float = CONSTANTS.gamma_c13,
) -> NuclearSpin:
    if hyperfine is None:
        hyperfine = hyperfine_from_position(position, gamma)
    spin = NuclearSpin(position=position, hyperfine=hyperfine, gamma=gamma)
    return with_frame(spin, b_z, m_s)


def diamond_sites(
    radius_nm: float,
    lattice_constant: float = CONSTANTS.lattice_constant_nm,
    exclusion_nm: float = EXCLUSION_RADIUS_NM,
) -> np.ndarray:
    """Carbon sites within `radius_nm` of the NV, NV axis rotated onto z."""
    cells = int(np.ceil(radius_nm / lattice_constant)) + 1
    index = np.arange(-cells, cells + 1)
    grid = np.stack(np.meshgrid(index, index, index, indexing="ij"), axis=-1)
    points = (grid.reshape(-1, 1, 3) + DIAMOND_BASIS).reshape(-1, 3) * lattice_constant
    points = points @ NV_ROTATION.T
    distance = np.linalg.norm(points, axis=1)
    return points[(distance > exclusion_nm) & (distance <= radius_nm)]


def generate_lattice_bath(
    seed: int,
    radius_nm: float,
    abundance: float = 0.011,
    b_z: float = 200.0,
    m_s: int = 1,
    max_cluster: int = 6,
    dipolar: DipolarMode = DipolarMode.full,
) -> BathModel:
    if not 0.0 <= abundance <= 1.0:
        raise ConfigError(f"abundance {abundance} outside [0, 1]")
    if radius_nm <= 0.0:
        raise ConfigError(f"radius {radius_nm} nm must be positive")
    sites = diamond_sites(radius_nm)
    occupied = sites[stream(seed, "bath").random(len(sites)) < abundance]
    if not len(occupied):
        logger.warning(
            "no carbon-13 within %.3g nm at abundance %.3g, bath is empty",
            radius_nm,
            abundance,
        )
    logger.info("placed %d spins on %d lattice sites", len(occupied), len(sites))
    bath = BathModel(
        spins=tuple(make_spin(r, b_z, m_s) for r in occupied),
        seed=seed,
        b_z_gauss=b_z,
        m_s=m_s,
        abundance=abundance,
        radius_nm=radius_nm,
        max_cluster=max_cluster,
        dipolar=dipolar,
    )
    return bath.model_copy(update={"clusters": cluster_partition(bath, max_cluster)})


def dipolar_coupling(
    spin_i: NuclearSpin,
    spin_j: NuclearSpin,
    mode: DipolarMode = DipolarMode.full,
    constants: PhysicalConstants = CONSTANTS,
) -> np.ndarray:
    """Tensor T acting as sum_ab I_i^a T_ab I_j^b."""
    r = np.asarray(spin_j.position) - np.asarray(spin_i.position)
    distance = np.linalg.norm(r)
    if distance == 0.0:
        raise SingularGeometryError("two nuclei share one position")
    if mode is DipolarMode.off:
        return np.zeros((3, 3))
    b = constants.dipolar_prefactor * spin_i.gamma * spin_j.gamma / distance**3
    n = r / distance
    if mode is DipolarMode.secular:
        return b * (1.0 - 3.0 * n[2] ** 2) * np.diag([-0.5, -0.5, 1.0])
    return b * (np.eye(3) - 3.0 * np.outer(n, n))


def coupling_strengths(spins: list[NuclearSpin] | tuple[NuclearSpin, ...]) -> np.ndarray:
    """|gamma_i gamma_j| / r_ij^3 for every pair, as a symmetric matrix."""
    positions = np.array([s.position for s in spins], dtype=float).reshape(-1, 3)
    gammas = np.array([s.gamma for s in spins])
    distance = np.linalg.norm(positions[:, None, :] - positions[None, :, :], axis=-1)
    np.fill_diagonal(distance, np.inf)
    return np.abs(np.outer(gammas, gammas)) / distance**3


def cluster_partition(bath: BathModel, max_size: int) -> tuple[tuple[int, ...], ...]:
    """Greedy union of the most strongly coupled pairs up to `max_size` spins."""
    if max_size < 1:
        raise ConfigError("cluster size must be at least 1")
    n = len(bath.spins)
    parent = list(range(n))
    size = [1] * n

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if n > 1 and max_size > 1:
        strength = coupling_strengths(bath.spins)
        iu, ju = np.triu_indices(n, k=1)
        for pair in np.lexsort((ju, iu, -strength[iu, ju])):
            a, b = find(int(iu[pair])), find(int(ju[pair]))
            if a != b and size[a] + size[b] <= max_size:
                parent[b] = a
                size[a] += size[b]

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(sorted(tuple(g) for g in groups.values()))


def addressability_report(
    bath: BathModel,
    target_index: int,
    k_dd: int,
    f_kdd: float,
    margin: float = DEFAULT_MARGIN,
) -> AddressabilityReport:
    if not 0 <= target_index < len(bath.spins):
        raise ConfigError(f"no spin with index {target_index}")
    frames = [
        s.frame or effective_frame(s, bath.b_z_gauss, bath.m_s) for s in bath.spins
    ]
    target_omega = frames[target_index].omega
    rows = []
    for j, (spin, frame) in enumerate(zip(bath.spins, frames)):
        a = frame.a_perp_norm
        zeeman = _ratio(abs(spin.gamma * bath.b_z_gauss), k_dd * a)
        separation = (
            None
            if j == target_index
            else _ratio(abs(frame.omega - target_omega), abs(f_kdd) * a)
        )
        rows.append(
            SpinAddressability(
                index=j,
                larmor_mhz=frame.omega / TWO_PI,
                a_perp_mhz=a / TWO_PI,
                zeeman_ratio=zeeman,
                separation_ratio=separation,
                flagged=zeeman < margin or (separation is not None and separation < margin),
            )
        )
    return AddressabilityReport(
        target_index=target_index, k_dd=k_dd, f_kdd=f_kdd, margin=margin, spins=rows
    )


def _ratio(numerator: float, denominator: float) -> float:
    if denominator == 0.0:
        return np.inf
    return numerator / denominator
