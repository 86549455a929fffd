"""Command-line entry point: `axy-dd <command> ...`.

Exit status 0 on success, 2 for configuration errors, 3 for infeasible
timing targets and 4 when a cluster exceeds the simulation capacity.
"""

import argparse
import csv
import logging
import sys
import time
import tomllib
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from axy_dd.analysis import detect_peaks, spectrum_deviation
from axy_dd.constants import MAX_COEFFICIENT, TWO_PI
from axy_dd.exceptions import AxyException, ConfigError
from axy_dd.formats import (
    deviation_map_to_text,
    read_bath,
    read_spectrum,
    schedule_to_text,
    write_bath,
    write_deviation_map,
    write_spectrum,
)
from axy_dd.models.bath import DipolarMode
from axy_dd.models.config import GridSection, SweepConfig
from axy_dd.models.design import DesignRequest, ScheduleRequest
from axy_dd.models.errors import ErrorParams, SequenceErrorKind
from axy_dd.models.schedule import PhaseOrder, SequenceKind
from axy_dd.models.timings import CompositeTimings
from axy_dd.pipeline import run_deviation_map, run_sweep
from axy_dd.pulse_error_analysis import order_scaling_fit
from axy_dd.service import build_schedule, coefficient_table, run_design
from axy_dd.spin_bath import addressability_report, generate_lattice_bath
from axy_dd.timing_solver import solve_first_harmonic

logger = logging.getLogger(__name__)

CONFIG_EXIT = 2
DEFAULT_F1 = 0.1 * MAX_COEFFICIENT
DEFAULT_TAU_US = 4.67


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _harmonics(value: str) -> tuple[int, ...]:
    return tuple(int(k) for k in value.split(",") if k.strip())


def _timings(args: argparse.Namespace) -> CompositeTimings | None:
    if args.timings is not None:
        return CompositeTimings(x=tuple(args.timings))
    if args.f1 is not None:
        return solve_first_harmonic(args.f1).timings
    return None


def cmd_design(args: argparse.Namespace) -> None:
    if args.f1 is not None:
        request = DesignRequest(k_dd=1, f_target=args.f1, zeroed=(2, 3, 4))
    elif args.f3 is not None:
        request = DesignRequest(k_dd=3, f_target=args.f3, zeroed=(1, 2, 4))
    else:
        request = DesignRequest(
            k_dd=args.harmonic,
            f_target=args.target,
            zeroed=args.zero,
            symmetric=args.symmetric,
        )
    result = run_design(request)
    lines = [
        f"path: {result.path}",
        f"residual: {result.residual:.3e}",
        "x: " + " ".join(f"{x:.12f}" for x in result.timings.x),
        "k,f_k",
        *(f"{row.k},{row.f_k:.12f}" for row in coefficient_table(result.timings)),
    ]
    _emit("\n".join(lines) + "\n", args.out)


def cmd_bath_gen(args: argparse.Namespace) -> None:
    if args.out is None:
        raise ConfigError("bath gen needs --out")
    bath = generate_lattice_bath(
        args.seed,
        args.radius_nm,
        args.abundance,
        args.b_z,
        args.m_s,
        args.max_cluster,
        args.dipolar,
    )
    write_bath(args.out, bath)


def cmd_bath_inspect(args: argparse.Namespace) -> None:
    bath = read_bath(args.bath)
    sizes = [len(c) for c in bath.groups]
    lines = [
        f"spins: {len(bath)}",
        f"clusters: {len(sizes)}",
        f"largest cluster: {max(sizes, default=0)}",
    ]
    if args.target is not None:
        report = addressability_report(
            bath, args.target, args.k_dd, args.f_kdd, args.margin
        )
        lines.append("index,larmor_mhz,a_perp_mhz,zeeman_ratio,separation_ratio,flagged")
        lines.extend(
            f"{s.index},{s.larmor_mhz:.9f},{s.a_perp_mhz:.9f},{s.zeeman_ratio:.6g},"
            f"{'' if s.separation_ratio is None else format(s.separation_ratio, '.6g')},"
            f"{int(s.flagged)}"
            for s in report.spins
        )
    _emit("\n".join(lines) + "\n", args.out)


def _sweep_config(args: argparse.Namespace) -> SweepConfig:
    config = SweepConfig.load(args.config).with_overrides(
        seed=args.seed, threads=args.threads
    )
    if args.center_on_spin is None:
        return config
    grid = GridSection(
        center_on_spin=args.center_on_spin,
        span_mhz=args.span,
        points=args.points or config.grid.points,
    )
    return config.model_copy(update={"grid": grid})


def cmd_sweep(args: argparse.Namespace) -> None:
    config = _sweep_config(args)
    started = time.perf_counter()
    spectrum = run_sweep(config, args.config.parent)
    wall_time = time.perf_counter() - started
    out = args.out or (Path(config.run.out) if config.run.out else None)
    if out is None:
        sys.stdout.write(spectrum.to_csv())
    else:
        write_spectrum(out, spectrum, wall_time)


def cmd_deviation(args: argparse.Namespace) -> None:
    a, b = read_spectrum(args.spectrum_a), read_spectrum(args.spectrum_b)
    window = tuple(args.window) if args.window else None
    _emit(f"{spectrum_deviation(a, b, window):.12g}\n", args.out)


def cmd_deviation_map(args: argparse.Namespace) -> None:
    config = _sweep_config(args)
    window = tuple(args.window) if args.window else None
    cells = run_deviation_map(
        config, args.detuning, args.amplitude, args.config.parent, window
    )
    if args.out is None:
        sys.stdout.write(deviation_map_to_text(cells))
    else:
        write_deviation_map(args.out, cells)


def cmd_peaks(args: argparse.Namespace) -> None:
    report = detect_peaks(
        read_spectrum(args.spectrum), read_bath(args.bath), args.k_dd, args.prominence
    )
    _emit(report.model_dump_json(indent=2) + "\n", args.out)


def cmd_order_scaling(args: argparse.Namespace) -> None:
    timings = _timings(args) or solve_first_harmonic(DEFAULT_F1).timings
    template = ErrorParams(
        delta_tilde=args.delta_tilde,
        epsilon_tilde=args.epsilon_tilde,
        omega=TWO_PI * args.rabi_mhz,
        free_detuning=TWO_PI * args.free_detuning_mhz,
    )
    etas = np.logspace(np.log10(args.eta_min), np.log10(args.eta_max), args.eta_points)
    results = [
        order_scaling_fit(kind, timings, args.tau, template, list(etas), args.phase_order)
        for kind in args.kind or list(SequenceErrorKind)
    ]
    rows = [("eta", "distance", "sequence_kind")]
    rows.extend(
        (repr(eta), repr(d), str(r.kind))
        for r in results
        for eta, d in zip(r.etas, r.distances)
    )
    slopes = [f"# slope {r.kind} = {r.slope}" for r in results]
    if args.out is None:
        csv.writer(sys.stdout, lineterminator="\n").writerows(rows)
    else:
        with args.out.open("w", newline="") as handle:
            csv.writer(handle, lineterminator="\n").writerows(rows)
    sys.stdout.write("\n".join(slopes) + "\n")


def cmd_schedule_dump(args: argparse.Namespace) -> None:
    request = ScheduleRequest(
        kind=args.kind,
        n=args.n,
        phase_order=args.phase_order,
        timings=_timings(args) if args.kind is not SequenceKind.cpmg else None,
        tau_us=args.tau,
        k_dd=args.k_dd,
        freq_mhz=args.freq_mhz,
        repeats=args.repeats,
        rabi_mhz=args.rabi_mhz,
    )
    _, built = build_schedule(request)
    _emit(schedule_to_text(built), args.out)


def _add_timing_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--f1", type=float, help="first-harmonic target")
    source.add_argument("--timings", type=float, nargs=5, metavar="X")


def _design_parser(sub: argparse._SubParsersAction) -> None:
    design = sub.add_parser("design", help="solve composite pulse timings")
    target = design.add_mutually_exclusive_group(required=True)
    target.add_argument("--f1", type=float)
    target.add_argument("--f3", type=float)
    target.add_argument("--harmonic", type=int)
    design.add_argument("--target", type=float, default=0.0)
    design.add_argument("--zero", type=_harmonics, default=(2, 3, 4))
    design.add_argument(
        "--symmetric", action=argparse.BooleanOptionalAction, default=None
    )
    design.set_defaults(func=cmd_design)


def _bath_parser(sub: argparse._SubParsersAction) -> None:
    bath = sub.add_parser("bath", help="generate or inspect nuclear baths")
    bath_sub = bath.add_subparsers(dest="bath_command", required=True)
    gen = bath_sub.add_parser("gen")
    gen.add_argument("--radius-nm", type=float, required=True)
    gen.add_argument("--abundance", type=float, default=0.011)
    gen.add_argument("--b-z", type=float, default=200.0)
    gen.add_argument("--m-s", type=int, choices=(-1, 1), default=1)
    gen.add_argument("--max-cluster", type=int, default=6)
    gen.add_argument("--dipolar", type=DipolarMode, default=DipolarMode.full)
    gen.set_defaults(func=cmd_bath_gen)
    inspect = bath_sub.add_parser("inspect")
    inspect.add_argument("bath", type=Path)
    inspect.add_argument("--target", type=int)
    inspect.add_argument("--k-dd", type=int, default=1)
    inspect.add_argument("--f-kdd", type=float, default=DEFAULT_F1)
    inspect.add_argument("--margin", type=float, default=10.0)
    inspect.set_defaults(func=cmd_bath_inspect)


def _add_grid_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", type=Path)
    parser.add_argument("--center-on-spin", type=int, metavar="INDEX")
    parser.add_argument("--span", type=float, default=0.01, metavar="MHZ")
    parser.add_argument("--points", type=int)


def _analysis_parsers(sub: argparse._SubParsersAction) -> None:
    sweep = sub.add_parser("sweep", help="run a spectrum sweep from a TOML config")
    _add_grid_arguments(sweep)
    sweep.set_defaults(func=cmd_sweep)

    deviation = sub.add_parser("deviation", help="mean |p_a - p_b| of two spectra")
    deviation.add_argument("spectrum_a", type=Path)
    deviation.add_argument("spectrum_b", type=Path)
    deviation.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))
    deviation.set_defaults(func=cmd_deviation)

    deviation_map = sub.add_parser(
        "deviation-map", help="spectrum deviation over detuning and amplitude errors"
    )
    _add_grid_arguments(deviation_map)
    deviation_map.add_argument(
        "--detuning", type=float, nargs="+", required=True, metavar="MHZ"
    )
    deviation_map.add_argument("--amplitude", type=float, nargs="+", required=True)
    deviation_map.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))
    deviation_map.set_defaults(func=cmd_deviation_map)

    peaks = sub.add_parser("peaks", help="detect and assign resonances")
    peaks.add_argument("spectrum", type=Path)
    peaks.add_argument("bath", type=Path)
    peaks.add_argument("--k-dd", type=int)
    peaks.add_argument("--prominence", type=float, default=0.02)
    peaks.set_defaults(func=cmd_peaks)


def _order_scaling_parser(sub: argparse._SubParsersAction) -> None:
    order = sub.add_parser("order-scaling", help="fit pulse-error cancellation orders")
    order.add_argument("--kind", type=SequenceErrorKind, action="append")
    _add_timing_source(order)
    order.add_argument("--tau", type=float, default=DEFAULT_TAU_US)
    order.add_argument("--delta-tilde", type=float, default=1.0)
    order.add_argument("--epsilon-tilde", type=float, default=1.0)
    order.add_argument("--rabi-mhz", type=float, default=40.0)
    order.add_argument("--free-detuning-mhz", type=float, default=1.0)
    order.add_argument("--eta-min", type=float, default=1e-3)
    order.add_argument("--eta-max", type=float, default=1e-2)
    order.add_argument("--eta-points", type=int, default=8)
    order.add_argument("--phase-order", type=PhaseOrder, default=PhaseOrder.xyxy_yxyx)
    order.set_defaults(func=cmd_order_scaling)


def _schedule_parser(sub: argparse._SubParsersAction) -> None:
    schedule = sub.add_parser("schedule", help="pulse schedules")
    schedule_sub = schedule.add_subparsers(dest="schedule_command", required=True)
    dump = schedule_sub.add_parser("dump")
    dump.add_argument("--kind", type=SequenceKind, default=SequenceKind.axy)
    dump.add_argument("--n", type=int, default=8)
    dump.add_argument("--phase-order", type=PhaseOrder, default=PhaseOrder.xyxy_yxyx)
    _add_timing_source(dump)
    period = dump.add_mutually_exclusive_group(required=True)
    period.add_argument("--tau", type=float)
    period.add_argument("--freq-mhz", type=float)
    dump.add_argument("--k-dd", type=int, default=1)
    dump.add_argument("--repeats", type=int, default=1)
    dump.add_argument("--rabi-mhz", type=float)
    dump.set_defaults(func=cmd_schedule_dump)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="axy-dd", description="Adaptive XY dynamical decoupling toolkit"
    )
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--out", type=Path)
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)
    _design_parser(sub)
    _bath_parser(sub)
    _analysis_parsers(sub)
    _order_scaling_parser(sub)
    _schedule_parser(sub)
    return parser


def _validation_message(e: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in error['loc']) or '<root>'}: {error['msg']}"
        for error in e.errors()
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sweeping = args.command in ("sweep", "deviation-map")
    if sweeping and args.points is not None and args.center_on_spin is None:
        parser.error("--points needs --center-on-spin; set grid.points in the config")
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
    )
    if args.command == "bath" and args.seed is None:
        args.seed = 0
    try:
        args.func(args)
    except AxyException as e:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(f"error: {e.detail}\n")
        return e.exit_code
    except ValidationError as e:
        sys.stderr.write(f"error: {_validation_message(e)}\n")
        return CONFIG_EXIT
    except tomllib.TOMLDecodeError as e:
        sys.stderr.write(f"error: {e}\n")
        return CONFIG_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
