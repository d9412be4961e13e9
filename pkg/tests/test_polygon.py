"""
Test convex polygons: invariants, clipping, containment and centroids.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.geometry.polygon import (
    ConvexPolygon,
    clip_polygon,
    contains_point,
    contains_points,
    intersect_convex,
    polygon_area,
    polygon_centroid,
    polygon_second_moment,
    simplify_vertices,
)
from src.geometry.primitives import HalfPlane, Point
from src.utils.error_handler import DegenerateGeometryError
from tests.conftest import assert_close


def regular_polygon(center, radius, sides, phase=0.0):
    return ConvexPolygon(tuple(
        Point(center[0] + radius * math.cos(phase + 2 * math.pi * k / sides),
              center[1] + radius * math.sin(phase + 2 * math.pi * k / sides))
        for k in range(sides)
    ))


class TestConvexPolygon:
    """Test construction invariants."""

    def test_rectangle_is_counter_clockwise(self, unit_square):
        assert polygon_area(unit_square) == pytest.approx(1.0)
        assert unit_square.closed_region

    def test_too_few_vertices(self):
        with pytest.raises(DegenerateGeometryError):
            ConvexPolygon((Point(0, 0), Point(1, 0)))

    def test_clockwise_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            ConvexPolygon((Point(0, 0), Point(0, 1), Point(1, 1), Point(1, 0)))

    def test_duplicate_consecutive_vertices_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            ConvexPolygon((Point(0, 0), Point(0, 0), Point(1, 0), Point(0, 1)))

    def test_half_planes_describe_polygon(self, unit_square):
        for hp in unit_square.half_planes:
            assert all(hp.signed_distance(v) <= 1e-12 for v in unit_square.vertices)
        assert len(unit_square.edges) == 4
        assert unit_square.bounds == (0.0, 0.0, 1.0, 1.0)


class TestClipPolygon:
    """Test one-half-plane clipping."""

    def test_axis_aligned_cut(self, unit_square):
        clipped = clip_polygon(unit_square, HalfPlane(1.0, 0.0, 0.5))
        assert clipped.vertices == (Point(0, 0), Point(0.5, 0), Point(0.5, 1), Point(0, 1))

    def test_containing_half_plane_returns_polygon(self, unit_square):
        assert clip_polygon(unit_square, HalfPlane(1.0, 0.0, 2.0)) is unit_square

    def test_disjoint_half_plane_is_empty(self, unit_square):
        assert clip_polygon(unit_square, HalfPlane(1.0, 0.0, -1.0)) is None

    def test_touching_along_edge_is_empty(self, unit_square):
        assert clip_polygon(unit_square, HalfPlane(1.0, 0.0, 0.0)) is None

    def test_diagonal_cut_is_triangle(self, unit_square):
        clipped = clip_polygon(unit_square, HalfPlane(1.0, 1.0, 1.0))
        assert len(clipped.vertices) == 3
        assert polygon_area(clipped) == pytest.approx(0.5)

    @pytest.mark.property
    @settings(max_examples=150, deadline=None)
    @given(
        st.floats(min_value=0.0, max_value=2 * math.pi),
        st.floats(min_value=-0.9, max_value=0.9),
    )
    def test_clip_preserves_convexity_and_membership(self, angle, offset):
        poly = regular_polygon((0.0, 0.0), 1.0, 7)
        hp = HalfPlane(math.cos(angle), math.sin(angle), offset)
        clipped = clip_polygon(poly, hp)
        assert clipped is not None

        rng = np.random.default_rng(0)
        for x, y in rng.uniform(-1.2, 1.2, size=(200, 2)):
            point = Point(float(x), float(y))
            if abs(hp.signed_distance(point)) < 1e-6:
                continue
            if any(abs(plane.signed_distance(point)) < 1e-6 for plane in poly.half_planes):
                continue
            expected = contains_point(poly, point, 0.0) and hp.contains(point, 0.0)
            assert contains_point(clipped, point, 1e-9) == expected


class TestSimplifyVertices:
    """Test the final simplification pass."""

    def test_merges_duplicates_and_collinear(self):
        ring = [Point(0, 0), Point(0.5, 0), Point(1, 0), Point(1, 1), Point(1, 1 + 1e-12), Point(0, 1)]
        assert simplify_vertices(ring, 1e-9) == [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)]

    def test_wrap_around_duplicate(self):
        ring = [Point(0, 0), Point(1, 0), Point(0, 1), Point(1e-12, 0)]
        assert simplify_vertices(ring, 1e-9) == [Point(0, 0), Point(1, 0), Point(0, 1)]


class TestContainsPoint:
    """Test closed-region membership."""

    def test_interior(self, unit_square):
        assert contains_point(unit_square, Point(0.5, 0.5), 1e-9)

    def test_boundary_included(self, unit_square):
        assert contains_point(unit_square, Point(1.0, 0.5), 1e-9)

    def test_outside(self, unit_square):
        assert not contains_point(unit_square, Point(1.1, 0.5), 1e-9)

    def test_vectorised_matches_scalar(self, unit_square):
        xs, ys = np.meshgrid(np.linspace(-0.5, 1.5, 9), np.linspace(-0.5, 1.5, 9))
        mask = contains_points(unit_square, xs, ys, 1e-9)
        for (row, col), inside in np.ndenumerate(mask):
            assert inside == contains_point(unit_square, Point(xs[row, col], ys[row, col]), 1e-9)


class TestIntersectConvex:
    """Test degenerate intersections."""

    def test_shared_edge(self, unit_square):
        right = ConvexPolygon.rectangle(1.0, 0.0, 2.0, 1.0)
        points = intersect_convex(unit_square, right, 1e-9)
        assert sorted(p.as_tuple() for p in points) == [(1.0, 0.0), (1.0, 1.0)]

    def test_shared_corner(self, unit_square):
        corner = ConvexPolygon.rectangle(1.0, 1.0, 2.0, 2.0)
        assert intersect_convex(unit_square, corner, 1e-9) == [Point(1.0, 1.0)]

    def test_apart(self, unit_square):
        assert intersect_convex(unit_square, ConvexPolygon.rectangle(3.0, 3.0, 4.0, 4.0), 1e-9) == []


class TestPolygonCentroid:
    """Test area centroid."""

    def test_unit_square(self, unit_square):
        assert_close(polygon_centroid(unit_square), (0.5, 0.5))

    def test_triangle(self):
        triangle = ConvexPolygon((Point(0, 0), Point(3, 0), Point(0, 3)))
        assert_close(polygon_centroid(triangle), (1.0, 1.0))

    def test_regular_hexagon(self):
        assert_close(polygon_centroid(regular_polygon((2.0, -1.0), 1.5, 6)), (2.0, -1.0))

    def test_vertex_rotation_invariance(self):
        poly = ConvexPolygon((Point(0, 0), Point(4, 0), Point(5, 2), Point(1, 3)))
        reference = polygon_centroid(poly)
        for shift in range(1, 4):
            rotated = ConvexPolygon(poly.vertices[shift:] + poly.vertices[:shift])
            assert_close(polygon_centroid(rotated), reference.as_tuple())

    @pytest.mark.property
    @settings(max_examples=100, deadline=None)
    @given(
        st.floats(min_value=-50.0, max_value=50.0),
        st.floats(min_value=-50.0, max_value=50.0),
        st.floats(min_value=0.0, max_value=2 * math.pi),
    )
    def test_rigid_motion_equivariance(self, dx, dy, theta):
        poly = ConvexPolygon((Point(0, 0), Point(4, 0), Point(5, 2), Point(1, 3)))
        c, s = math.cos(theta), math.sin(theta)

        def move(p):
            return Point(c * p.x - s * p.y + dx, s * p.x + c * p.y + dy)

        moved = ConvexPolygon(tuple(move(v) for v in poly.vertices))
        assert_close(polygon_centroid(moved), move(polygon_centroid(poly)).as_tuple())

    def test_degenerate_area(self):
        sliver = ConvexPolygon((Point(0, 0), Point(1, 0), Point(1, 1e-12)), tol=1e-13)
        with pytest.raises(DegenerateGeometryError):
            polygon_centroid(sliver, tol=1e-5)


class TestSecondMoment:
    """Test the polar second moment."""

    def test_unit_square_about_centre(self, unit_square):
        # (1/12 + 1/12) for a unit square about its centroid
        assert polygon_second_moment(unit_square, Point(0.5, 0.5)) == pytest.approx(1.0 / 6.0)

    def test_parallel_axis(self, unit_square):
        offset = Point(2.0, -1.0)
        shift = (2.0 - 0.5) ** 2 + (-1.0 - 0.5) ** 2
        assert polygon_second_moment(unit_square, offset) == pytest.approx(1.0 / 6.0 + shift)
