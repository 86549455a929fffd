from typing import Any

from fastapi import status


class AxyException(Exception):
    exit_code: int = 2
    status_code: int = status.HTTP_422_UNPROCESSABLE_ENTITY

    def __init__(self, detail: Any) -> None:
        super().__init__(detail)
        self.detail = detail


class ConfigError(AxyException):
    pass


class DomainError(AxyException):
    pass


class TargetRangeError(AxyException):
    def __init__(self, value: float, interval: tuple[float, float]) -> None:
        super().__init__(
            f"target {value:g} outside the validity interval "
            f"({interval[0]:.4f}, {interval[1]:.4f})"
        )
        self.value = value
        self.interval = interval


class InfeasibleTargetError(AxyException):
    exit_code = 3

    def __init__(self, detail: Any, best_residual: float) -> None:
        super().__init__(f"{detail} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


class CapacityError(AxyException):
    exit_code = 4


class ScheduleOverlapError(AxyException):
    def __init__(self, first: int, second: int, gap: float) -> None:
        super().__init__(
            f"pulses {first} and {second} overlap by {-gap:.6g} µs after widening"
        )
        self.pair = (first, second)


class SingularGeometryError(AxyException):
    pass


class DegenerateFrameError(AxyException):
    pass


class ModeError(AxyException):
    pass


class GridMismatchError(AxyException):
    pass
