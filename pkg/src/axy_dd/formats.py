"""On-disk formats: bath files, schedule dumps, spectra and run manifests."""

import csv
import hashlib
import io
import json
import logging
from collections.abc import Callable, Iterator
from pathlib import Path
from typing import Any

import numpy as np

from axy_dd.constants import TWO_PI
from axy_dd.exceptions import ConfigError, SingularGeometryError
from axy_dd.models.bath import BathModel, NuclearSpin
from axy_dd.models.reports import DeviationCell
from axy_dd.models.schedule import PulseEvent, PulseSchedule
from axy_dd.models.simulation import RunManifest, Spectrum
from axy_dd.spin_bath import cluster_partition, hyperfine_from_position, with_frame

logger = logging.getLogger(__name__)

BATH_COLUMNS = ("index", "x_nm", "y_nm", "z_nm", "ax_mhz", "ay_mhz", "az_mhz")
SCHEDULE_COLUMNS = ("center_time_us", "phase_rad", "duration_us")
DEVIATION_COLUMNS = ("detuning_mhz", "amplitude_error", "deviation")
HYPERFINE_RTOL = 1e-12

BATH_HEADER: dict[str, Callable[[str], Any]] = {
    "seed": int,
    "b_z_gauss": float,
    "abundance": float,
    "radius_nm": float,
    "m_s": int,
    "dipolar": str,
    "max_cluster": int,
}
SCHEDULE_HEADER: dict[str, Callable[[str], Any]] = {
    "kind": str,
    "label": str,
    "period_us": float,
    "repetitions": int,
    "unit_periods": int,
}


def _header_lines(values: dict[str, Any]) -> list[str]:
    return [f"# {key} = {value}" for key, value in values.items() if value is not None]


def _split_header(
    text: str, fields: dict[str, Callable[[str], Any]]
) -> tuple[dict[str, Any], list[list[str]]]:
    """Parse `# key = value` lines, return them with the CSV rows after them."""
    header: dict[str, Any] = {}
    body = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.startswith("#"):
            body.append(line)
            continue
        key, sep, value = line.lstrip("#").partition("=")
        key = key.strip()
        if not sep or key not in fields:
            raise ConfigError(f"line {number}: unknown header entry {line!r}")
        header[key] = fields[key](value.strip())
    return header, list(csv.reader(body))


def _format(value: float) -> str:
    return repr(float(value))


def bath_to_text(bath: BathModel) -> str:
    buffer = io.StringIO()
    buffer.writelines(
        line + "\n"
        for line in _header_lines(
            {
                "seed": bath.seed,
                "b_z_gauss": _format(bath.b_z_gauss),
                "abundance": bath.abundance,
                "radius_nm": bath.radius_nm,
                "m_s": bath.m_s,
                "dipolar": bath.dipolar.value,
                "max_cluster": bath.max_cluster,
            }
        )
    )
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(BATH_COLUMNS)
    for i, spin in enumerate(bath.spins):
        hyperfine_mhz = np.asarray(spin.hyperfine) / TWO_PI
        writer.writerow(
            [i, *map(_format, spin.position), *map(_format, hyperfine_mhz)]
        )
    return buffer.getvalue()


def _hyperfine(position: np.ndarray, stored: np.ndarray) -> np.ndarray:
    """Geometry-derived hyperfine when it matches the stored value, else the stored one."""
    try:
        derived = hyperfine_from_position(position)
    except SingularGeometryError:
        return stored
    scale = float(np.linalg.norm(stored)) or 1.0
    if np.allclose(derived, stored, rtol=HYPERFINE_RTOL, atol=HYPERFINE_RTOL * scale):
        return derived
    return stored


def _bath_rows(rows: list[list[str]]) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    if not rows or tuple(rows[0]) != BATH_COLUMNS:
        raise ConfigError(f"bath file must start with columns {','.join(BATH_COLUMNS)}")
    for row in rows[1:]:
        if len(row) != len(BATH_COLUMNS):
            raise ConfigError(f"bath row {row[:1]} has {len(row)} columns")
        values = np.array([float(v) for v in row[1:]])
        yield values[:3], TWO_PI * values[3:]


def bath_from_text(text: str) -> BathModel:
    header, rows = _split_header(text, BATH_HEADER)
    b_z = header.get("b_z_gauss", 200.0)
    m_s = header.get("m_s", 1)
    spins = tuple(
        with_frame(
            NuclearSpin(position=position, hyperfine=_hyperfine(position, stored)),
            b_z,
            m_s,
        )
        for position, stored in _bath_rows(rows)
    )
    bath = BathModel.model_validate({**header, "spins": spins})
    return bath.model_copy(update={"clusters": cluster_partition(bath, bath.max_cluster)})


def write_bath(path: Path, bath: BathModel) -> None:
    path.write_text(bath_to_text(bath))


def read_bath(path: Path) -> BathModel:
    if not path.is_file():
        raise ConfigError(f"bath file {path} does not exist")
    return bath_from_text(path.read_text())


def schedule_to_text(schedule: PulseSchedule) -> str:
    buffer = io.StringIO()
    buffer.writelines(
        line + "\n"
        for line in _header_lines(
            {
                "kind": schedule.kind.value,
                "label": schedule.label,
                "period_us": _format(schedule.period),
                "repetitions": schedule.repetitions,
                "unit_periods": schedule.unit_periods,
            }
        )
    )
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SCHEDULE_COLUMNS)
    for event in schedule.events:
        writer.writerow(map(_format, (event.center_time, event.phase, event.duration)))
    return buffer.getvalue()


def schedule_from_dump(text: str) -> PulseSchedule:
    header, rows = _split_header(text, SCHEDULE_HEADER)
    if not rows or tuple(rows[0]) != SCHEDULE_COLUMNS:
        raise ConfigError(f"schedule dump must have columns {','.join(SCHEDULE_COLUMNS)}")
    events = tuple(
        PulseEvent(center_time=float(t), phase=float(phi), duration=float(width))
        for t, phi, width in rows[1:]
    )
    return PulseSchedule(
        kind=header["kind"],
        label=header["label"],
        events=events,
        period=header["period_us"],
        repetitions=header["repetitions"],
        unit_periods=header.get("unit_periods", 1),
    )


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(config: dict[str, Any]) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()


def build_manifest(
    config: dict[str, Any], seed: int, schedule: str, points: int, k_dd: int
) -> RunManifest:
    return RunManifest(
        config=config,
        config_hash=config_hash(config),
        seed=seed,
        schedule=schedule,
        points=points,
        k_dd=k_dd,
    )


def sidecar_paths(out: Path) -> tuple[Path, Path]:
    """Manifest and wall-time files written next to a spectrum CSV."""
    return out.with_suffix(".manifest.json"), out.with_suffix(".timing.json")


def write_spectrum(out: Path, spectrum: Spectrum, wall_time_s: float | None = None) -> None:
    out.write_text(spectrum.to_csv())
    manifest_path, timing_path = sidecar_paths(out)
    if spectrum.manifest is not None:
        manifest = spectrum.manifest.model_dump(mode="json")
        manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    if wall_time_s is not None:
        timing_path.write_text(json.dumps({"wall_time_s": wall_time_s}) + "\n")
    logger.info("wrote %d points to %s", len(spectrum), out)


def read_spectrum(path: Path, k_dd: int | None = None) -> Spectrum:
    """Spectrum CSV, with k_dd and manifest taken from the sidecar when present."""
    if not path.is_file():
        raise ConfigError(f"spectrum file {path} does not exist")
    manifest_path, _ = sidecar_paths(path)
    manifest = None
    if manifest_path.is_file():
        manifest = RunManifest.model_validate_json(manifest_path.read_text())
    k = k_dd or (manifest.k_dd if manifest else 1)
    try:
        spectrum = Spectrum.from_csv(path.read_text(), k_dd=k)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e
    return spectrum.model_copy(update={"manifest": manifest})


def deviation_map_to_text(cells: list[DeviationCell]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(DEVIATION_COLUMNS)
    writer.writerows(
        (_format(c.detuning_mhz), _format(c.amplitude_error), _format(c.deviation))
        for c in cells
    )
    return buffer.getvalue()


def write_deviation_map(path: Path, cells: list[DeviationCell]) -> None:
    path.write_text(deviation_map_to_text(cells))
    logger.info("wrote %d deviation cells to %s", len(cells), path)
