from pathlib import Path

from pydantic import ValidationError
from pytest import approx, raises

from axy_dd.analysis import spin_lines
from axy_dd.exceptions import ConfigError
from axy_dd.formats import config_hash, write_bath
from axy_dd.models.config import GridSection, SweepConfig
from axy_dd.models.schedule import SequenceKind
from axy_dd.models.simulation import PulseMode
from axy_dd.pipeline import (
    resolve_bath,
    resolve_grid,
    resolve_timings,
    run_sweep,
    schedule_family,
)

from .shared import bath_of, weak_spin

SWEEP_TOML = """
[run]
seed = 11
threads = 2

[field]
b_z_gauss = 200.0

[sequence]
kind = "axy"
n = 8
f1 = 0.1273
repeats = 3

[engine]
pulse_mode = "finite"
rabi_mhz = 50.0

[grid]
start_mhz = 0.2
stop_mhz = 0.3
points = 5
"""


def test_toml_is_read() -> None:
    config = SweepConfig.from_toml(SWEEP_TOML)
    assert config.run.seed == 11
    assert config.run.threads == 2
    assert config.sequence.repeats == 3
    assert config.engine.pulse_mode is PulseMode.finite
    assert config.bath.spins is None

    simulation = config.simulation_config()
    assert simulation.seed == 11
    assert simulation.rabi_mhz == 50.0
    assert simulation.noise.enabled is False


def test_load_from_file(tmp_path: Path) -> None:
    path = tmp_path / "sweep.toml"
    path.write_text(SWEEP_TOML)
    assert SweepConfig.load(path) == SweepConfig.from_toml(SWEEP_TOML)


def test_unknown_keys_are_rejected() -> None:
    with raises(ValidationError):
        SweepConfig.from_toml(SWEEP_TOML + "\n[extra]\nvalue = 1\n")
    with raises(ValidationError):
        SweepConfig.from_toml(SWEEP_TOML.replace("repeats = 3", "repeat = 3"))


def test_one_timing_source() -> None:
    with raises(ValidationError, match="give one timing source"):
        SweepConfig.from_toml(SWEEP_TOML.replace("f1 = 0.1273", "f1 = 0.1\nf3 = 0.2"))
    with raises(ValidationError, match="need timings"):
        SweepConfig.from_toml(SWEEP_TOML.replace("f1 = 0.1273", ""))
    with raises(ValidationError, match="harmonic and target go together"):
        SweepConfig.from_toml(SWEEP_TOML.replace("f1 = 0.1273", "target = 0.5"))


def test_cpmg_needs_no_timings() -> None:
    config = SweepConfig.from_toml(
        SWEEP_TOML.replace('kind = "axy"', 'kind = "cpmg"').replace("f1 = 0.1273", "")
    )
    assert resolve_timings(config.sequence) is None
    assert schedule_family(config).kind is SequenceKind.cpmg


def test_timings_as_a_list() -> None:
    config = SweepConfig.from_toml(
        SWEEP_TOML.replace("f1 = 0.1273", "timings = [0.05, 0.15, 0.25, 0.35, 0.45]")
    )
    assert config.sequence.timings.x == approx((0.05, 0.15, 0.25, 0.35, 0.45))
    assert resolve_timings(config.sequence) is config.sequence.timings


def test_designed_timings() -> None:
    config = SweepConfig.from_toml(SWEEP_TOML.replace("f1 = 0.1273", "f3 = 0.0"))
    timings = resolve_timings(config.sequence)
    assert timings.x[:2] == approx((0.05, 0.15), abs=1e-9)


def test_grid_needs_one_window() -> None:
    with raises(ValidationError):
        GridSection(start_mhz=0.2, points=10)
    with raises(ValidationError):
        GridSection(start_mhz=0.2, stop_mhz=0.3, center_on_spin=0, span_mhz=0.01)
    with raises(ValidationError):
        GridSection(start_mhz=0.2, stop_mhz=0.3, points=1)


def test_bath_sources_are_exclusive() -> None:
    text = SWEEP_TOML + (
        '\n[bath]\nfile = "bath.csv"\n[[bath.spins]]\nposition = [1.0, 0.0, 1.0]\n'
    )
    with raises(ValidationError, match="at most one"):
        SweepConfig.from_toml(text)


def test_overrides_and_reproducible_dump() -> None:
    config = SweepConfig.from_toml(SWEEP_TOML)
    changed = config.with_overrides(seed=3, threads=8, out="spectrum.csv")
    assert changed.run.seed == 3
    assert changed.run.threads == 8
    assert changed.run.out == "spectrum.csv"
    assert config.with_overrides() == config

    dump = changed.reproducible_dump()
    assert dump["run"] == {"seed": 3}
    assert config_hash(dump) == config_hash(
        config.with_overrides(seed=3, threads=1).reproducible_dump()
    )


def test_inline_spins() -> None:
    text = SWEEP_TOML + (
        "\n[[bath.spins]]\nposition = [1.0, 0.0, 1.0]\n"
        "hyperfine = [0.025, 0.0, 0.0125]\n"
        "\n[[bath.spins]]\nposition = [0.0, 1.2, 0.8]\n"
    )
    bath = resolve_bath(SweepConfig.from_toml(text))
    assert len(bath) == 2
    assert bath.spins[0].hyperfine == approx((0.025, 0.0, 0.0125))
    assert bath.spins[1].frame is not None
    assert sorted(i for c in bath.groups for i in c) == [0, 1]


def test_bath_file_is_relative_to_the_config(tmp_path: Path) -> None:
    bath = bath_of([weak_spin()])
    write_bath(tmp_path / "bath.csv", bath)
    config = SweepConfig.from_toml(SWEEP_TOML + '\n[bath]\nfile = "bath.csv"\n')
    restored = resolve_bath(config, tmp_path)
    assert len(restored) == 1
    assert restored.spins[0].hyperfine == approx(bath.spins[0].hyperfine, rel=1e-14)
    with raises(ConfigError):
        resolve_bath(config, tmp_path / "elsewhere")


def test_generated_bath_takes_the_run_seed() -> None:
    config = SweepConfig.from_toml(
        SWEEP_TOML + "\n[bath.generate]\nradius_nm = 0.8\nabundance = 0.1\n"
    )
    assert resolve_bath(config).seed == 11
    assert resolve_bath(config) == resolve_bath(config)


def test_grid_centred_on_a_spin() -> None:
    bath = bath_of([weak_spin()])
    line = float(spin_lines(bath)[0])
    grid = GridSection(center_on_spin=0, span_mhz=0.01, points=21)
    start, stop, points = resolve_grid(grid, bath)
    assert (start + stop) / 2 == approx(line)
    assert stop - start == approx(0.01)
    assert points == 21

    with raises(ConfigError):
        resolve_grid(GridSection(center_on_spin=1, span_mhz=0.01), bath)
    with raises(ConfigError):
        resolve_grid(GridSection(center_on_spin=0, span_mhz=1.0), bath)


def test_explicit_grid_passes_through(empty_bath) -> None:
    grid = GridSection(start_mhz=0.2, stop_mhz=0.3, points=5)
    assert resolve_grid(grid, empty_bath) == (0.2, 0.3, 5)


def test_sweep_of_an_empty_bath_carries_its_manifest() -> None:
    config = SweepConfig.from_toml(SWEEP_TOML)
    spectrum = run_sweep(config)
    assert spectrum.probability == approx([0.0] * 5, abs=1e-9)
    manifest = spectrum.manifest
    assert manifest.seed == 11
    assert manifest.points == 5
    assert manifest.k_dd == 1
    assert manifest.schedule == "axy-8 k_dd=1 pulses=120 rabi 50.0 MHz"
    assert manifest.config_hash == config_hash(config.reproducible_dump())
    assert "threads" not in manifest.config["run"]


def test_grid_must_increase() -> None:
    with raises(ValidationError, match="strictly increasing"):
        GridSection(start_mhz=0.3, stop_mhz=0.2, points=50)
    with raises(ValidationError, match="strictly increasing"):
        SweepConfig.from_toml(
            SWEEP_TOML.replace("start_mhz = 0.2", "start_mhz = 0.3").replace(
                "stop_mhz = 0.3", "stop_mhz = 0.2"
            )
        )
    with raises(ValidationError):
        GridSection(start_mhz=0.2, stop_mhz=0.2, points=5)


def test_resolved_grid_is_checked(empty_bath) -> None:
    grid = GridSection.model_construct(
        start_mhz=0.3, stop_mhz=0.2, points=50, center_on_spin=None, span_mhz=None
    )
    with raises(ConfigError, match="strictly increasing"):
        resolve_grid(grid, empty_bath)
