from collections.abc import Callable, Generator, Iterator
from typing import Any
from urllib.parse import urljoin

import numpy as np
import pytest
from fastapi import FastAPI
from fastapi.testclient import TestClient

from axy_dd.constants import MAX_COEFFICIENT
from axy_dd.models.bath import BathModel, NuclearSpin
from axy_dd.models.conformance import ALL
from axy_dd.models.timings import CompositeTimings
from axy_dd.routers.root_router import RootRouter
from axy_dd.spin_bath import make_spin
from axy_dd.timing_solver import solve_first_harmonic

from .shared import find_link, weak_spin


@pytest.fixture(scope="session")
def base_url() -> Iterator[str]:
    yield "http://axyserver"


@pytest.fixture
def axy_client(base_url: str) -> Generator[TestClient, None, None]:
    root_router = RootRouter(conformances=ALL)

    app = FastAPI()
    app.include_router(root_router, prefix="")

    with TestClient(app, base_url=f"{base_url}") as client:
        yield client


@pytest.fixture(scope="session")
def url_for(base_url: str) -> Iterator[Callable[[str], str]]:
    def with_trailing_slash(value: str) -> str:
        return value if value.endswith("/") else f"{value}/"

    def url_for(value: str) -> str:
        return urljoin(with_trailing_slash(base_url), f"./{value.lstrip('/')}")

    yield url_for


@pytest.fixture
def assert_link(url_for) -> Callable:
    def _assert_link(
        req: str,
        body: dict[str, Any],
        rel: str,
        path: str,
        media_type: str = "application/json",
        method: str | None = None,
    ):
        link = find_link(body["links"], rel)
        assert link, f"{req} Link[rel={rel}] should exist"
        assert link["type"] == media_type
        assert link["href"] == url_for(path)
        if method:
            assert link["method"] == method

    return _assert_link


@pytest.fixture(scope="session")
def f1_timings() -> CompositeTimings:
    """Symmetric timings with f1 = 0.1 * 4/pi and f2 = f3 = f4 = 0."""
    return solve_first_harmonic(0.1 * MAX_COEFFICIENT).timings


@pytest.fixture(scope="session")
def tau() -> float:
    return 4.67


@pytest.fixture
def resonant_spin() -> NuclearSpin:
    return weak_spin()


@pytest.fixture
def lattice_spins() -> list[NuclearSpin]:
    """Six nuclei a few bonds from the NV, in two groups of three."""
    positions = [
        (0.45, 0.10, 0.30),
        (0.52, -0.20, 0.05),
        (0.30, 0.35, -0.25),
        (-0.60, 0.15, 0.40),
        (-0.40, -0.45, 0.20),
        (-0.55, 0.30, -0.35),
    ]
    return [make_spin(np.array(p), 200.0, 1) for p in positions]


@pytest.fixture
def empty_bath() -> BathModel:
    return BathModel()
