from typing import Any, Literal

from pydantic import (
    AnyUrl,
    BaseModel,
    ConfigDict,
    SerializerFunctionWrapHandler,
    model_serializer,
)

from axy_dd.constants import TYPE_JSON


class Link(BaseModel):
    """Hypermedia link; `method` is only set on links to POST endpoints."""

    href: AnyUrl
    rel: str
    type: str = TYPE_JSON
    title: str | None = None
    method: Literal["GET", "POST"] | None = None

    model_config = ConfigDict(extra="forbid")

    @model_serializer(mode="wrap", when_used="json")
    def drop_unset(self, handler: SerializerFunctionWrapHandler) -> dict[str, Any]:
        return {k: v for k, v in handler(self).items() if v is not None}
