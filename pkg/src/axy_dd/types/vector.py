from typing import Annotated, Any, Callable

import numpy as np
from pydantic import (
    AfterValidator,
    BeforeValidator,
    WithJsonSchema,
    WrapSerializer,
)


def validate_before(value: Any) -> tuple[float, float, float]:
    if isinstance(value, np.ndarray):
        value = value.tolist()
    return value


def validate_after(value: tuple[float, float, float]):
    if not all(np.isfinite(value)):
        raise ValueError("vector components must be finite")
    return value


def serialize(
    value: tuple[float, float, float],
    serializer: Callable[[tuple[float, float, float]], Any],
) -> list[float]:
    del serializer  # unused
    return [float(v) for v in value]


type Vector3 = Annotated[
    tuple[float, float, float],
    BeforeValidator(validate_before),
    AfterValidator(validate_after),
    WrapSerializer(serialize, return_type=list[float]),
    WithJsonSchema(
        {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
    ),
]


def check_fraction(value: float) -> float:
    if not 0.0 < value < 0.5:
        raise ValueError(f"{value} is not inside the half period (0, 1/2)")
    return value


type HalfPeriodFraction = Annotated[float, AfterValidator(check_fraction)]
