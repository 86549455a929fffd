from pydantic import BaseModel, Field

CORE = "https://axy-dd.example.com/v0.1.0/core"
DESIGN = "https://axy-dd.example.com/v0.1.0/design"
SCHEDULES = "https://axy-dd.example.com/v0.1.0/schedules"
ORDER_SCALING = "https://axy-dd.example.com/v0.1.0/order-scaling"

ALL = [CORE, DESIGN, SCHEDULES, ORDER_SCALING]


class Conformance(BaseModel):
    conforms_to: list[str] = Field(
        default_factory=list, serialization_alias="conformsTo"
    )
