import logging
import traceback

from fastapi import APIRouter, HTTPException, Request, status
from returns.result import Failure, Success

from axy_dd.constants import TYPE_JSON
from axy_dd.exceptions import AxyException
from axy_dd.models.conformance import ALL, CORE, Conformance
from axy_dd.models.design import (
    DesignRequest,
    DesignResponse,
    OrderScalingRequest,
    ScheduleRequest,
    ScheduleResponse,
)
from axy_dd.models.errors import OrderScalingResult
from axy_dd.models.root import RootResponse
from axy_dd.models.shared import Link
from axy_dd.routers.route_names import (
    CONFORMANCE,
    CREATE_DESIGN,
    CREATE_ORDER_SCALING,
    CREATE_SCHEDULE,
    ROOT,
)
from axy_dd.service import design, order_scaling, schedule

logger = logging.getLogger(__name__)


def http_error(e: Exception, action: str) -> HTTPException:
    """422 for rejected inputs, 500 (logged) for anything unexpected."""
    match e:
        case AxyException():
            return HTTPException(status_code=e.status_code, detail=e.detail)
        case ValueError():
            return HTTPException(
                status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e)
            )
        case _:
            logger.error(
                "An error occurred while %s: %s", action, traceback.format_exception(e)
            )
            return HTTPException(
                status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
                detail=f"Error {action}",
            )


class RootRouter(APIRouter):
    def __init__(
        self,
        conformances: list[str] = ALL,
        name: str = "root",
        openapi_endpoint_name: str = "openapi",
        docs_endpoint_name: str = "swagger_ui_html",
        *args,
        **kwargs,
    ) -> None:
        super().__init__(*args, **kwargs)

        if CORE not in conformances:
            raise ValueError("the core conformance class is required")

        self.conformances = conformances
        self.name = name
        self.openapi_endpoint_name = openapi_endpoint_name
        self.docs_endpoint_name = docs_endpoint_name

        self.add_api_route(
            "/",
            self.get_root,
            methods=["GET"],
            name=f"{self.name}:{ROOT}",
            tags=["Root"],
        )

        self.add_api_route(
            "/conformance",
            self.get_conformance,
            methods=["GET"],
            name=f"{self.name}:{CONFORMANCE}",
            tags=["Conformance"],
        )

        self.add_api_route(
            "/designs",
            self.create_design,
            methods=["POST"],
            name=f"{self.name}:{CREATE_DESIGN}",
            summary="Solve composite pulse timings for a harmonic target",
            tags=["Design"],
        )

        self.add_api_route(
            "/schedules",
            self.create_schedule,
            methods=["POST"],
            name=f"{self.name}:{CREATE_SCHEDULE}",
            summary="Build the pulse schedule of a sequence",
            tags=["Design"],
        )

        self.add_api_route(
            "/order-scaling",
            self.create_order_scaling,
            methods=["POST"],
            name=f"{self.name}:{CREATE_ORDER_SCALING}",
            summary="Fit the order of pulse-error cancellation",
            tags=["Errors"],
        )

    def get_root(self, request: Request) -> RootResponse:
        links = [
            Link(
                href=str(request.url_for(f"{self.name}:{ROOT}")),
                rel="self",
                type=TYPE_JSON,
            ),
            Link(
                href=str(request.url_for(self.openapi_endpoint_name)),
                rel="service-description",
                type=TYPE_JSON,
            ),
            Link(
                href=str(request.url_for(self.docs_endpoint_name)),
                rel="service-docs",
                type="text/html",
            ),
            Link(
                href=str(request.url_for(f"{self.name}:{CONFORMANCE}")),
                rel="conformance",
                type=TYPE_JSON,
            ),
            self.post_link(request, CREATE_DESIGN, "designs"),
            self.post_link(request, CREATE_SCHEDULE, "schedules"),
            self.post_link(request, CREATE_ORDER_SCALING, "order-scaling"),
        ]

        return RootResponse(
            id="AXY-DD API",
            title="Adaptive XY dynamical decoupling design",
            conformsTo=self.conformances,
            links=links,
        )

    def get_conformance(self) -> Conformance:
        return Conformance(conforms_to=self.conformances)

    def create_design(self, payload: DesignRequest, request: Request) -> DesignResponse:
        """
        Solve the composite timings x1..x5 for the requested harmonic target.
        """
        match design(payload):
            case Success(response):
                response.links.append(
                    self.post_link(request, CREATE_SCHEDULE, "schedules")
                )
                return response
            case Failure(e):
                raise http_error(e, "designing timings")
            case x:
                raise AssertionError(f"Expected code to be unreachable {x}")

    def create_schedule(
        self, payload: ScheduleRequest, request: Request
    ) -> ScheduleResponse:
        match schedule(payload):
            case Success(response):
                response.links.append(
                    self.post_link(request, CREATE_SCHEDULE, "self")
                )
                return response
            case Failure(e):
                raise http_error(e, "building the schedule")
            case x:
                raise AssertionError(f"Expected code to be unreachable {x}")

    def create_order_scaling(self, payload: OrderScalingRequest) -> OrderScalingResult:
        match order_scaling(payload):
            case Success(result):
                return result
            case Failure(e):
                raise http_error(e, "fitting the error order")
            case x:
                raise AssertionError(f"Expected code to be unreachable {x}")

    def post_link(self, request: Request, route: str, rel: str) -> Link:
        return Link(
            href=str(request.url_for(f"{self.name}:{route}")),
            rel=rel,
            type=TYPE_JSON,
            method="POST",
        )
