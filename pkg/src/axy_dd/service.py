"""Design-side operations as `ResultE` values, shared by the CLI and the router."""

from returns.result import safe

from axy_dd.models.design import (
    TABLE_K_MAX,
    DesignRequest,
    DesignResponse,
    HarmonicValue,
    OrderScalingRequest,
    ScheduleRequest,
    ScheduleResponse,
)
from axy_dd.models.errors import OrderScalingResult
from axy_dd.models.schedule import PulseSchedule
from axy_dd.models.timings import CompositeTimings, DesignResult
from axy_dd.modfunc import fourier_coeff_numeric
from axy_dd.pulse_error_analysis import order_scaling_fit
from axy_dd.sequence_builder import ScheduleFamily
from axy_dd.timing_solver import solve, solve_general


def coefficient_table(
    timings: CompositeTimings, k_max: int = TABLE_K_MAX
) -> list[HarmonicValue]:
    return [
        HarmonicValue(k=k, f_k=fourier_coeff_numeric(timings, k))
        for k in range(k_max + 1)
    ]


def run_design(request: DesignRequest) -> DesignResult:
    if request.symmetric is None:
        return solve(request.target)
    return solve_general(request.target, request.symmetric)


@safe
def design(request: DesignRequest) -> DesignResponse:
    result = run_design(request)
    return DesignResponse(
        timings=result.timings,
        path=result.path,
        residual=result.residual,
        coefficients=coefficient_table(result.timings),
    )


def schedule_family(request: ScheduleRequest) -> ScheduleFamily:
    return ScheduleFamily(
        kind=request.kind,
        n=request.n,
        phase_order=request.phase_order,
        timings=request.timings,
        k_dd=request.k_dd,
        repeats=request.repeats,
        rabi_mhz=request.rabi_mhz,
    )


def build_schedule(request: ScheduleRequest) -> tuple[ScheduleFamily, PulseSchedule]:
    family = schedule_family(request)
    if request.tau_us is not None:
        return family, family.build(request.tau_us)
    return family, family.for_frequency(request.freq_mhz or 0.0)


@safe
def schedule(request: ScheduleRequest) -> ScheduleResponse:
    family, built = build_schedule(request)
    return ScheduleResponse(
        summary=family.describe(),
        pulse_count=len(built),
        total_time_us=built.total_time,
        schedule=built,
    )


@safe
def order_scaling(request: OrderScalingRequest) -> OrderScalingResult:
    return order_scaling_fit(
        request.kind,
        request.timings,
        request.tau_us,
        request.errors,
        request.etas,
        request.phase_order,
    )
