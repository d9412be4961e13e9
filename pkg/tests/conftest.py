"""
Pytest configuration and fixtures for tests.

This module provides shared generating sets, bounding boxes and diagrams
used across test modules.
"""

import json
import math

import numpy as np
import pytest

from src.geometry.polygon import ConvexPolygon
from src.geometry.primitives import Point
from src.voronoi.builder import build_diagram
from src.voronoi.diagram import BoundingBox, GeneratingSet


SQRT3 = math.sqrt(3.0)


def make_sites(coordinates):
    return GeneratingSet.from_coordinates(coordinates)


def random_generating_set(rng: np.random.Generator, n: int) -> GeneratingSet:
    """``n`` sites uniform in the open unit square."""
    return make_sites(rng.uniform(0.001, 0.999, size=(n, 2)))


@pytest.fixture
def unit_square():
    """Counter-clockwise unit square."""
    return ConvexPolygon.rectangle(0.0, 0.0, 1.0, 1.0)


@pytest.fixture
def unit_bbox():
    return BoundingBox(0.0, 0.0, 1.0, 1.0)


@pytest.fixture
def two_sites():
    """(0,0) and (2,0) in [-1,3] x [-1,1]."""
    return make_sites([(0.0, 0.0), (2.0, 0.0)]), BoundingBox(-1.0, -1.0, 3.0, 1.0)


@pytest.fixture
def equilateral_sites():
    """Equilateral triangle with circumcenter (1, sqrt(3)/3), in [-2,4]^2."""
    return make_sites([(0.0, 0.0), (2.0, 0.0), (1.0, SQRT3)]), BoundingBox(-2.0, -2.0, 4.0, 4.0)


@pytest.fixture
def square_sites():
    """Four cocircular sites at the unit square's corners, in [-1,2]^2."""
    return (
        make_sites([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
        BoundingBox(-1.0, -1.0, 2.0, 2.0),
    )


@pytest.fixture
def collinear_three():
    """Sites 0, 1, 2 on the x-axis, in [-1,3] x [-1,1]."""
    return make_sites([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]), BoundingBox(-1.0, -1.0, 3.0, 1.0)


@pytest.fixture
def collinear_four():
    """Sites 0..3 on the x-axis, in [-1,4] x [-1,1]."""
    return (
        make_sites([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]),
        BoundingBox(-1.0, -1.0, 4.0, 1.0),
    )


@pytest.fixture
def jittered_grid():
    """3x3 grid of sites, each nudged by at most 0.05, in the unit square."""
    rng = np.random.default_rng(7)
    base = [((i + 0.5) / 3.0, (j + 0.5) / 3.0) for j in range(3) for i in range(3)]
    jitter = rng.uniform(-0.05, 0.05, size=(9, 2))
    return make_sites(np.array(base) + jitter), BoundingBox(0.0, 0.0, 1.0, 1.0)


@pytest.fixture
def random_sites():
    """Factory for seeded random generating sets in the unit square."""
    def factory(n: int, seed: int = 0) -> GeneratingSet:
        return random_generating_set(np.random.default_rng(seed), n)
    return factory


@pytest.fixture
def two_site_diagram(two_sites):
    return build_diagram(*two_sites)


@pytest.fixture
def equilateral_diagram(equilateral_sites):
    return build_diagram(*equilateral_sites)


@pytest.fixture
def square_diagram(square_sites):
    return build_diagram(*square_sites)


@pytest.fixture
def collinear_three_diagram(collinear_three):
    return build_diagram(*collinear_three)


@pytest.fixture
def collinear_four_diagram(collinear_four):
    return build_diagram(*collinear_four)


@pytest.fixture
def sites_file(tmp_path):
    """Factory writing a sites document and returning its path."""
    def factory(sites, bbox=None, name="sites.json"):
        document = {"sites": [list(s) for s in sites]}
        if bbox is not None:
            document["bbox"] = list(bbox)
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return path
    return factory


def assert_close(point: Point, expected, tol: float = 1e-9) -> None:
    assert math.hypot(point.x - expected[0], point.y - expected[1]) <= tol, f"{point} != {expected}"
