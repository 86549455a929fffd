"""Composite timings that reach target Fourier coefficients.

Closed forms are tried first and accepted only when the modulation-function
oracle confirms them; otherwise a multi-start root search over (x1, x2), or
over all five times, takes over.
"""

import logging
from collections.abc import Iterator

import numpy as np
from returns.maybe import Maybe, Nothing, Some
from scipy.optimize import least_squares, root

from axy_dd.constants import (
    EQUALLY_SPACED,
    FIRST_HARMONIC_BOUND,
    MAX_COEFFICIENT,
    RESIDUAL_TOLERANCE,
)
from axy_dd.exceptions import ConfigError, InfeasibleTargetError, TargetRangeError
from axy_dd.modfunc import max_residual
from axy_dd.models.timings import (
    CompositeTimings,
    DesignResult,
    HarmonicTarget,
    SolverPath,
)

logger = logging.getLogger(__name__)

SEED_GRID = 8
MIN_SEPARATION = 1e-9
SIGNS = np.array([1.0, -1.0, 1.0, -1.0, 1.0])
# maps (x1, x2) onto the five symmetric times
SYMMETRIC_OFFSET = np.array([0.0, 0.0, 0.25, 0.5, 0.5])
SYMMETRIC_MAP = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [0.0, -1.0], [-1.0, 0.0]])


def first_harmonic_target(f1: float) -> HarmonicTarget:
    return HarmonicTarget(k_dd=1, f_target=f1, zeroed=(2, 3, 4))


def third_harmonic_target(f3: float) -> HarmonicTarget:
    return HarmonicTarget(k_dd=3, f_target=f3, zeroed=(1, 2, 4))


def _check_range(value: float, bound: float) -> None:
    if not abs(value) < bound:
        raise TargetRangeError(value, (-bound, bound))


def _is_ordered(x: np.ndarray) -> bool:
    return bool(
        np.all(np.isfinite(x))
        and x[0] > MIN_SEPARATION
        and np.all(np.diff(x) > MIN_SEPARATION)
        and x[-1] < 0.5 - MIN_SEPARATION
    )


def _design(
    x: np.ndarray, target: HarmonicTarget, path: SolverPath, symmetric: bool
) -> tuple[float, Maybe[DesignResult]]:
    """Oracle residual of a candidate and, when it passes, the design."""
    if not _is_ordered(x):
        return np.inf, Nothing
    if symmetric:
        timings = CompositeTimings.from_pair(float(x[0]), float(x[1]))
    else:
        timings = CompositeTimings(x=tuple(float(v) for v in x))
    constraints = target.constraints()
    if not symmetric and 0 not in target.zeroed:
        constraints.append((0, 0.0))
    residual = max_residual(timings, constraints)
    if residual >= RESIDUAL_TOLERANCE:
        return residual, Nothing
    return residual, Some(
        DesignResult(timings=timings, path=path, target=target, residual=residual)
    )


def _symmetric_candidate(
    x1: float, x2: float, target: HarmonicTarget
) -> Maybe[DesignResult]:
    x = SYMMETRIC_OFFSET + SYMMETRIC_MAP @ np.array([x1, x2])
    return _design(x, target, SolverPath.closed_form, symmetric=True)[1]


def first_harmonic_closed_form(f1: float) -> Maybe[DesignResult]:
    """Published closed form for f1 tuned with f3 = 0, evaluated as printed."""
    fp = f1 * np.pi
    w1 = 4.0 - fp
    w2 = w1 * (960.0 - 144.0 * fp - 12.0 * fp**2 + fp**3)
    pair = []
    with np.errstate(all="ignore"):
        for sign in (1.0, -1.0):
            numerator = sign * (3.0 * fp - 12.0) * w1 + np.sqrt(3.0) * w2
            radicand = np.float64(w2 - 96.0 * f1 * w1 * np.pi + sign * w1**2)
            denominator = np.sqrt(6.0) * np.sqrt(radicand) * np.sqrt(3.0) * w2
            pair.append(float(np.arctan(numerator / denominator) / (2.0 * np.pi)))
    return _symmetric_candidate(pair[0], pair[1], first_harmonic_target(f1))


def third_harmonic_closed_form(f3: float) -> Maybe[DesignResult]:
    root5 = np.sqrt(5.0 + np.pi * f3)
    pair = []
    with np.errstate(all="ignore"):
        for j in (1, 2):
            q = 4.0 / (root5 + (-1.0) ** j)
            pair.append(float(0.25 - np.arctan(np.sqrt(q * q - 1.0)) / (2.0 * np.pi)))
    return _symmetric_candidate(pair[0], pair[1], third_harmonic_target(f3))


def mirrored_coefficients(x: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """f_k of the mirrored ten-pulse period for five composite times x."""
    out = np.empty(len(ks))
    for i, k in enumerate(ks):
        if k == 0:
            out[i] = 8.0 * SIGNS @ x - 2.0
        else:
            out[i] = 4.0 / (np.pi * k) * (SIGNS @ np.sin(2.0 * np.pi * k * x))
    return out


def mirrored_jacobian(x: np.ndarray, ks: np.ndarray) -> np.ndarray:
    return 8.0 * SIGNS * np.cos(2.0 * np.pi * np.outer(ks, x))


class HarmonicSystem:
    """Residual equations of one target, over (x1, x2) or all five times."""

    def __init__(self, target: HarmonicTarget, symmetric: bool) -> None:
        constraints = target.constraints()
        if symmetric:
            # even harmonics and f0 vanish identically under the symmetric construction
            constraints = [(k, f) for k, f in constraints if k % 2]
        elif 0 not in target.zeroed:
            constraints.append((0, 0.0))
        self.target = target
        self.symmetric = symmetric
        self.ks = np.array([k for k, _ in constraints], dtype=float)
        self.values = np.array([f for _, f in constraints])

    @property
    def size(self) -> int:
        return 2 if self.symmetric else 5

    @property
    def reference(self) -> np.ndarray:
        x = np.array(EQUALLY_SPACED)
        return x[:2] if self.symmetric else x

    def expand(self, p: np.ndarray) -> np.ndarray:
        if self.symmetric:
            return SYMMETRIC_OFFSET + SYMMETRIC_MAP @ p
        return p

    def residuals(self, p: np.ndarray) -> np.ndarray:
        return mirrored_coefficients(self.expand(p), self.ks) - self.values

    def jacobian(self, p: np.ndarray) -> np.ndarray:
        jac = mirrored_jacobian(self.expand(p), self.ks)
        return jac @ SYMMETRIC_MAP if self.symmetric else jac

    def seeds(self) -> Iterator[np.ndarray]:
        yield self.reference
        grid = (np.arange(SEED_GRID) + 0.5) * 0.25 / SEED_GRID
        for x1 in grid:
            for x2 in grid[grid > x1]:
                pair = np.array([x1, x2])
                yield pair if self.symmetric else SYMMETRIC_OFFSET + SYMMETRIC_MAP @ pair

    def refine(self, seed: np.ndarray) -> np.ndarray:
        if len(self.ks) == self.size:
            return root(self.residuals, seed, jac=self.jacobian, method="hybr").x
        upper = 0.25 if self.symmetric else 0.5
        return least_squares(
            self.residuals,
            seed,
            jac=self.jacobian,
            bounds=(0.0, upper),
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
        ).x


def _numeric(system: HarmonicSystem) -> DesignResult:
    best_residual = np.inf
    found: list[tuple[float, DesignResult]] = []
    for seed in system.seeds():
        p = system.refine(seed)
        residual, design = _design(
            system.expand(p), system.target, SolverPath.numeric, system.symmetric
        )
        best_residual = min(best_residual, residual)
        match design:
            case Some(result):
                found.append((float(np.linalg.norm(p - system.reference)), result))
            case Maybe.empty:
                pass
            case x:
                raise AssertionError(f"Expected code to be unreachable {x}")
    if not found:
        raise InfeasibleTargetError(
            f"no timings reach f_{system.target.k_dd} = {system.target.f_target:g} "
            f"with harmonics {sorted(set(system.target.zeroed))} zeroed",
            best_residual,
        )
    return min(found, key=lambda item: item[0])[1]


def _closed_form_or_numeric(
    attempt: Maybe[DesignResult], target: HarmonicTarget
) -> DesignResult:
    match attempt:
        case Some(result):
            logger.info("closed form accepted, residual %.3e", result.residual)
            return result
        case Maybe.empty:
            logger.info(
                "closed form rejected for f_%d = %g, solving numerically",
                target.k_dd,
                target.f_target,
            )
            return _numeric(HarmonicSystem(target, symmetric=True))
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


def solve_first_harmonic(f1: float) -> DesignResult:
    _check_range(f1, FIRST_HARMONIC_BOUND)
    return _closed_form_or_numeric(
        first_harmonic_closed_form(f1), first_harmonic_target(f1)
    )


def solve_third_harmonic(f3: float) -> DesignResult:
    _check_range(f3, MAX_COEFFICIENT)
    return _closed_form_or_numeric(
        third_harmonic_closed_form(f3), third_harmonic_target(f3)
    )


def _fits_symmetric(target: HarmonicTarget) -> bool:
    return target.k_dd % 2 == 1 and len(target.odd_zeroed) <= 1


def solve_general(target: HarmonicTarget, symmetric: bool | None = None) -> DesignResult:
    """Numeric multi-start solve of an arbitrary harmonic target.

    `symmetric=None` picks the two-variable symmetric problem whenever the
    target fits it (odd tuned harmonic, at most one zeroed odd harmonic).
    """
    if len(target.odd_zeroed) > 3:
        raise ConfigError("at most three odd harmonics can be zeroed")
    if symmetric is None:
        symmetric = _fits_symmetric(target)
    elif symmetric and target.k_dd % 2 == 0:
        logger.info("even harmonic %d vanishes when symmetric", target.k_dd)
        symmetric = False
    return _numeric(HarmonicSystem(target, symmetric))


def solve(target: HarmonicTarget) -> DesignResult:
    """Closed form where one exists for the target, numeric otherwise."""
    odd = set(target.odd_zeroed)
    if target.k_dd == 1 and odd == {3}:
        return solve_first_harmonic(target.f_target)
    if target.k_dd == 3 and odd == {1}:
        return solve_third_harmonic(target.f_target)
    return solve_general(target)
