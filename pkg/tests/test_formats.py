import json
from pathlib import Path

import numpy as np
from pytest import approx, raises

from axy_dd.exceptions import ConfigError
from axy_dd.formats import (
    bath_from_text,
    bath_to_text,
    build_manifest,
    config_hash,
    deviation_map_to_text,
    read_bath,
    read_spectrum,
    schedule_from_dump,
    schedule_to_text,
    sidecar_paths,
    write_bath,
    write_spectrum,
)
from axy_dd.models.reports import DeviationCell
from axy_dd.models.simulation import Spectrum
from axy_dd.models.timings import CompositeTimings
from axy_dd.sequence_builder import apply_finite_width, build_axy
from axy_dd.spin_bath import generate_lattice_bath

from .shared import bath_of, weak_spin


def test_bath_file_round_trip(tmp_path: Path) -> None:
    bath = generate_lattice_bath(3, 1.0, abundance=0.05, max_cluster=3)
    assert len(bath) > 0
    path = tmp_path / "bath.csv"
    write_bath(path, bath)
    assert read_bath(path) == bath


def test_bath_file_layout() -> None:
    text = bath_to_text(generate_lattice_bath(3, 1.0, abundance=0.05))
    lines = text.splitlines()
    assert lines[0] == "# seed = 3"
    assert "# b_z_gauss = 200.0" in lines
    assert "index,x_nm,y_nm,z_nm,ax_mhz,ay_mhz,az_mhz" in lines


def test_explicit_hyperfine_survives() -> None:
    bath = bath_of([weak_spin()])
    restored = bath_from_text(bath_to_text(bath))
    assert restored.spins[0].hyperfine == approx(bath.spins[0].hyperfine, rel=1e-14)
    assert restored.spins[0].frame.omega == approx(bath.spins[0].frame.omega)


def test_bath_header_is_checked() -> None:
    with raises(ConfigError):
        bath_from_text("# colour = blue\nindex,x_nm,y_nm,z_nm,ax_mhz,ay_mhz,az_mhz\n")
    with raises(ConfigError):
        bath_from_text("index,x,y,z\n")
    with raises(ConfigError):
        bath_from_text("index,x_nm,y_nm,z_nm,ax_mhz,ay_mhz,az_mhz\n0,1.0,2.0\n")


def test_missing_bath_file(tmp_path: Path) -> None:
    with raises(ConfigError):
        read_bath(tmp_path / "absent.csv")


def test_schedule_dump_round_trip(f1_timings: CompositeTimings, tau: float) -> None:
    schedule = apply_finite_width(build_axy(8, f1_timings, tau, 2), 2 * np.pi * 40.0)
    assert schedule_from_dump(schedule_to_text(schedule)) == schedule


def test_schedule_dump_layout(f1_timings: CompositeTimings, tau: float) -> None:
    text = schedule_to_text(build_axy(4, f1_timings, tau, 1))
    lines = text.splitlines()
    assert lines[:5] == [
        "# kind = axy",
        "# label = AXY-4",
        f"# period_us = {tau!r}",
        "# repetitions = 2",
        "# unit_periods = 2",
    ]
    assert lines[5] == "center_time_us,phase_rad,duration_us"
    assert len(lines) == 6 + 20


def test_config_hash_is_canonical() -> None:
    a = {"run": {"seed": 1}, "grid": {"points": 10, "start_mhz": 0.2}}
    b = {"grid": {"start_mhz": 0.2, "points": 10}, "run": {"seed": 1}}
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash({**a, "run": {"seed": 2}})
    assert len(config_hash(a)) == 64


def test_spectrum_with_sidecars(tmp_path: Path) -> None:
    spectrum = Spectrum(
        freq_mhz=[0.2, 0.25, 0.3],
        tau_us=[15.0, 12.0, 10.0],
        probability=[0.0, 0.123456789012345, 1.0],
        k_dd=3,
        manifest=build_manifest({"run": {"seed": 4}}, 4, "axy-8 k_dd=3", 3, 3),
    )
    out = tmp_path / "spectrum.csv"
    write_spectrum(out, spectrum, wall_time_s=1.5)
    manifest_path, timing_path = sidecar_paths(out)
    assert manifest_path.name == "spectrum.manifest.json"
    assert json.loads(timing_path.read_text()) == {"wall_time_s": 1.5}

    restored = read_spectrum(out)
    assert restored == spectrum
    assert restored.k_dd == 3


def test_spectrum_without_manifest(tmp_path: Path) -> None:
    out = tmp_path / "bare.csv"
    out.write_text("freq_MHz,tau_us,probability\n0.2,5.0,0.1\n0.3,3.3333333333333335,0.2\n")
    spectrum = read_spectrum(out)
    assert spectrum.manifest is None
    assert spectrum.k_dd == 1
    assert len(spectrum) == 2


def test_malformed_spectrum(tmp_path: Path) -> None:
    out = tmp_path / "bad.csv"
    out.write_text("f,p\n0.2,0.1\n")
    with raises(ConfigError):
        read_spectrum(out)
    with raises(ConfigError):
        read_spectrum(tmp_path / "absent.csv")


def test_deviation_map_layout() -> None:
    cells = [
        DeviationCell(detuning_mhz=0.0, amplitude_error=0.0, deviation=0.0),
        DeviationCell(detuning_mhz=1.0, amplitude_error=0.05, deviation=0.125),
    ]
    assert deviation_map_to_text(cells).splitlines() == [
        "detuning_mhz,amplitude_error,deviation",
        "0.0,0.0,0.0",
        "1.0,0.05,0.125",
    ]
