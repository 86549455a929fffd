"""From a sweep configuration to a spectrum with its manifest."""

import logging
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from axy_dd.analysis import spin_lines
from axy_dd.dynamics import deviation_map, family_for, sweep
from axy_dd.exceptions import ConfigError
from axy_dd.formats import build_manifest, read_bath
from axy_dd.models.bath import BathModel
from axy_dd.models.config import GridSection, SequenceSection, SweepConfig
from axy_dd.models.reports import DeviationCell
from axy_dd.models.simulation import Spectrum
from axy_dd.models.timings import CompositeTimings
from axy_dd.sequence_builder import ScheduleFamily
from axy_dd.spin_bath import cluster_partition, generate_lattice_bath, make_spin
from axy_dd.timing_solver import solve
from axy_dd.types import FrequencyGrid, check_grid

logger = logging.getLogger(__name__)


def resolve_timings(sequence: SequenceSection) -> CompositeTimings | None:
    if sequence.timings is not None:
        return sequence.timings
    target = sequence.harmonic_target
    if target is None:
        return None
    result = solve(target)
    logger.info("designed %s timings %s", result.path, result.timings.x)
    return result.timings


def schedule_family(config: SweepConfig) -> ScheduleFamily:
    sequence = config.sequence
    return ScheduleFamily(
        kind=sequence.kind,
        n=sequence.n,
        phase_order=sequence.phase_order,
        timings=resolve_timings(sequence),
        k_dd=sequence.k_dd,
        repeats=sequence.repeats,
    )


def resolve_bath(config: SweepConfig, base_dir: Path = Path(".")) -> BathModel:
    section = config.bath
    b_z, m_s = config.field.b_z_gauss, config.field.m_s
    if section.file is not None:
        return read_bath(base_dir / section.file)
    if section.generate is not None:
        generate = section.generate
        seed = config.run.seed if generate.seed is None else generate.seed
        return generate_lattice_bath(
            seed,
            generate.radius_nm,
            generate.abundance,
            b_z,
            m_s,
            generate.max_cluster,
            config.engine.dipolar,
        )
    spins = tuple(
        make_spin(entry.position, b_z, m_s, entry.hyperfine)
        for entry in section.spins or ()
    )
    bath = BathModel(spins=spins, b_z_gauss=b_z, m_s=m_s, dipolar=config.engine.dipolar)
    return bath.model_copy(update={"clusters": cluster_partition(bath, bath.max_cluster)})


def _window(grid: GridSection, bath: BathModel) -> tuple[float, float, int]:
    if grid.start_mhz is not None and grid.stop_mhz is not None:
        return (grid.start_mhz, grid.stop_mhz, grid.points)
    index, span = grid.center_on_spin, grid.span_mhz or 0.0
    if index is None or not 0 <= index < len(bath):
        raise ConfigError(f"center_on_spin {index} is not a spin of the bath")
    center = float(spin_lines(bath)[index])
    if center - 0.5 * span <= 0.0:
        raise ConfigError(f"span {span} MHz reaches below zero around {center} MHz")
    return (center - 0.5 * span, center + 0.5 * span, grid.points)


def resolve_grid(grid: GridSection, bath: BathModel) -> FrequencyGrid:
    """Explicit window, or a window of span_mhz centred on one spin's line."""
    window = _window(grid, bath)
    try:
        return check_grid(window)
    except ValidationError as e:
        raise ConfigError(f"grid {window}: {e.errors()[0]['msg']}") from e


def run_sweep(config: SweepConfig, base_dir: Path = Path(".")) -> Spectrum:
    bath = resolve_bath(config, base_dir)
    family = schedule_family(config)
    grid = resolve_grid(config.grid, bath)
    simulation = config.simulation_config()
    spectrum = sweep(bath, family, grid, simulation, config.run.threads)
    manifest = build_manifest(
        config.reproducible_dump(),
        config.run.seed,
        family_for(family, simulation).describe(),
        len(spectrum),
        family.k_dd,
    )
    return spectrum.model_copy(update={"manifest": manifest})


def run_deviation_map(
    config: SweepConfig,
    detunings_mhz: Sequence[float],
    amplitude_errors: Sequence[float],
    base_dir: Path = Path("."),
    window: tuple[float, float] | None = None,
) -> list[DeviationCell]:
    bath = resolve_bath(config, base_dir)
    return deviation_map(
        schedule_family(config),
        bath,
        detunings_mhz,
        amplitude_errors,
        resolve_grid(config.grid, bath),
        config.simulation_config(),
        window,
        config.run.threads,
    )
