"""
Test planar primitives: points, half-planes, segments and orientation.
"""

import math

import pytest
from hypothesis import given, settings, strategies as st

from src.geometry.primitives import (
    HalfPlane,
    Point,
    Segment,
    bisector_half_plane,
    orientation,
    point_segment_distance,
)
from src.utils.error_handler import CoincidentPointsError, DegenerateGeometryError, GeometryError


coordinate = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False, allow_infinity=False)


def check_bisector_side(p: Point, q: Point, point: Point) -> None:
    if p.distance_to(q) <= 1e-3:
        return
    hp = bisector_half_plane(p, q)
    gap = point.distance_to(p) - point.distance_to(q)
    # Stay clear of the rounding band around the bisector
    if abs(gap) <= 1e-6:
        return
    assert hp.contains(point, 0.0) == (gap < 0)


class TestPoint:
    """Test point construction and distances."""

    def test_distance(self):
        assert Point(0.0, 0.0).distance_to(Point(3.0, 4.0)) == pytest.approx(5.0)

    @pytest.mark.parametrize("x, y", [(math.nan, 0.0), (0.0, math.inf), (-math.inf, 1.0)])
    def test_rejects_non_finite(self, x, y):
        with pytest.raises(GeometryError):
            Point(x, y)

    def test_points_are_hashable_values(self):
        assert {Point(1.0, 2.0), Point(1.0, 2.0)} == {Point(1.0, 2.0)}


class TestHalfPlane:
    """Test half-plane normalization and membership."""

    def test_normal_is_unit_length(self):
        hp = HalfPlane(3.0, 4.0, 10.0)
        assert math.hypot(hp.normal_x, hp.normal_y) == pytest.approx(1.0)
        assert hp.offset == pytest.approx(2.0)

    def test_signed_distance_is_euclidean(self):
        hp = HalfPlane(0.0, 2.0, 2.0)  # y <= 1
        assert hp.signed_distance(Point(5.0, 3.0)) == pytest.approx(2.0)
        assert hp.signed_distance(Point(5.0, -1.0)) == pytest.approx(-2.0)

    def test_contains_boundary(self):
        hp = HalfPlane(1.0, 0.0, 1.0)
        assert hp.contains(Point(1.0, 7.0), 1e-9)
        assert not hp.contains(Point(1.1, 7.0), 1e-9)

    def test_zero_normal_rejected(self):
        with pytest.raises(GeometryError):
            HalfPlane(0.0, 0.0, 1.0)


class TestBisectorHalfPlane:
    """Test H_pq construction."""

    def test_horizontal_pair(self):
        hp = bisector_half_plane(Point(0.0, 0.0), Point(2.0, 0.0))
        assert (hp.normal_x, hp.normal_y) == pytest.approx((1.0, 0.0))
        assert hp.offset == pytest.approx(1.0)

    def test_vertical_pair(self):
        hp = bisector_half_plane(Point(0.0, 0.0), Point(0.0, 2.0))
        assert (hp.normal_x, hp.normal_y) == pytest.approx((0.0, 1.0))
        assert hp.offset == pytest.approx(1.0)

    def test_coincident_points(self):
        with pytest.raises(CoincidentPointsError):
            bisector_half_plane(Point(1.0, 1.0), Point(1.0, 1.0))

    def test_generator_strictly_inside(self):
        p, q = Point(0.3, -2.0), Point(4.0, 1.5)
        hp = bisector_half_plane(p, q)
        assert hp.signed_distance(p) == pytest.approx(-p.distance_to(q) / 2.0)

    @pytest.mark.property
    @settings(max_examples=200, deadline=None)
    @given(coordinate, coordinate, coordinate, coordinate, coordinate, coordinate)
    def test_matches_distance_comparison(self, px, py, qx, qy, x, y):
        check_bisector_side(Point(px, py), Point(qx, qy), Point(x, y))

    @pytest.mark.slow
    @pytest.mark.property
    @settings(max_examples=10_000, deadline=None)
    @given(coordinate, coordinate, coordinate, coordinate, coordinate, coordinate)
    def test_matches_distance_comparison_full(self, px, py, qx, qy, x, y):
        check_bisector_side(Point(px, py), Point(qx, qy), Point(x, y))


class TestSegment:
    """Test segment helpers."""

    def test_length_and_midpoint(self):
        segment = Segment(Point(0.0, 0.0), Point(2.0, 2.0))
        assert segment.length == pytest.approx(math.sqrt(8.0))
        assert segment.midpoint == Point(1.0, 1.0)
        assert segment.point_at(0.25) == Point(0.5, 0.5)

    def test_degenerate_segment(self):
        with pytest.raises(DegenerateGeometryError):
            Segment(Point(1.0, 1.0), Point(1.0, 1.0))


class TestOrientation:
    """Test orientation predicate."""

    def test_left_turn(self):
        assert orientation(Point(0, 0), Point(1, 0), Point(0, 1)) == 1

    def test_collinear(self):
        assert orientation(Point(0, 0), Point(1, 0), Point(2, 0)) == 0

    def test_right_turn(self):
        assert orientation(Point(0, 0), Point(0, 1), Point(1, 0)) == -1

    def test_within_tolerance_is_collinear(self):
        assert orientation(Point(0, 0), Point(1, 0), Point(2, 1e-12), tol=1e-9) == 0


class TestPointSegmentDistance:
    """Test projection distances."""

    def test_interior_projection(self):
        distance, closest = point_segment_distance(Point(1.0, 2.0), Point(0.0, 0.0), Point(2.0, 0.0))
        assert distance == pytest.approx(2.0)
        assert closest == Point(1.0, 0.0)

    def test_clamped_to_endpoint(self):
        distance, closest = point_segment_distance(Point(5.0, 4.0), Point(0.0, 0.0), Point(2.0, 0.0))
        assert distance == pytest.approx(5.0)
        assert closest == Point(2.0, 0.0)
