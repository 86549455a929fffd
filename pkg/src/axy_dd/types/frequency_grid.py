from typing import Annotated, Any, Callable

from pydantic import (
    AfterValidator,
    BeforeValidator,
    TypeAdapter,
    WithJsonSchema,
    WrapSerializer,
)


def validate_before(value: Any) -> tuple[float, float, int]:
    if isinstance(value, str):
        start, stop, points = value.split(":", 2)
        return (float(start), float(stop), int(points))
    if isinstance(value, dict):
        return (value["start_mhz"], value["stop_mhz"], value["points"])
    return value


def validate_after(value: tuple[float, float, int]):
    start, stop, points = value
    if points < 2:
        raise ValueError("a frequency grid needs at least two points")
    if not 0.0 < start < stop:
        raise ValueError("grid must be strictly increasing and positive")
    return value


def serialize(
    value: tuple[float, float, int],
    serializer: Callable[[tuple[float, float, int]], Any],
) -> str:
    del serializer  # unused
    return f"{value[0]!r}:{value[1]!r}:{value[2]}"


type FrequencyGrid = Annotated[
    tuple[float, float, int],
    BeforeValidator(validate_before),
    AfterValidator(validate_after),
    WrapSerializer(serialize, return_type=str),
    WithJsonSchema({"type": "string"}, mode="serialization"),
]
"""(start MHz, stop MHz, points), also accepted as "start:stop:points"."""

frequency_grid_adapter: TypeAdapter[FrequencyGrid] = TypeAdapter(FrequencyGrid)


def check_grid(value: Any) -> tuple[float, float, int]:
    """Validate a bare (start, stop, points) value outside of a model."""
    return frequency_grid_adapter.validate_python(value)
