"""
Planar primitives: points, half-planes and segments.

A half-plane stores a unit normal so that ``signed_distance`` is both the
inequality residual and the Euclidean distance to the boundary line.
"""

import math
from dataclasses import dataclass
from typing import Tuple

from src.utils.error_handler import GeometryError, CoincidentPointsError, DegenerateGeometryError


# Absolute tolerance used when callers do not supply one. Diagram-level code
# passes a tolerance scaled by the bounding-box diagonal instead.
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Point:
    """A point of the plane with finite coordinates."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"Point coordinates must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "Point") -> float:
        """Euclidean distance to another point."""
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)

    def __str__(self) -> str:
        return f"({self.x:g}, {self.y:g})"


@dataclass(frozen=True)
class HalfPlane:
    """
    Closed half-plane ``{ (x, y) : normal_x*x + normal_y*y <= offset }``.

    The normal is rescaled to unit length on construction, together with the
    offset, so the described point set does not change.
    """

    normal_x: float
    normal_y: float
    offset: float

    def __post_init__(self):
        norm = math.hypot(self.normal_x, self.normal_y)
        if norm == 0.0 or not math.isfinite(norm) or not math.isfinite(self.offset):
            raise GeometryError(
                f"Half-plane needs a finite non-zero normal, got "
                f"({self.normal_x}, {self.normal_y}) with offset {self.offset}"
            )
        object.__setattr__(self, "normal_x", self.normal_x / norm)
        object.__setattr__(self, "normal_y", self.normal_y / norm)
        object.__setattr__(self, "offset", self.offset / norm)

    def signed_distance(self, point: Point) -> float:
        """Residual ``n·x - offset``; negative inside, zero on the boundary."""
        return self.normal_x * point.x + self.normal_y * point.y - self.offset

    def contains(self, point: Point, tol: float = DEFAULT_TOLERANCE) -> bool:
        """True if the point satisfies the inequality within ``tol``."""
        return self.signed_distance(point) <= tol


@dataclass(frozen=True)
class Segment:
    """A closed line segment with distinct endpoints."""

    endpoint_a: Point
    endpoint_b: Point

    def __post_init__(self):
        if self.endpoint_a.distance_to(self.endpoint_b) == 0.0:
            raise DegenerateGeometryError(f"Segment endpoints coincide at {self.endpoint_a}")

    @property
    def length(self) -> float:
        return self.endpoint_a.distance_to(self.endpoint_b)

    @property
    def midpoint(self) -> Point:
        return Point(
            (self.endpoint_a.x + self.endpoint_b.x) / 2.0,
            (self.endpoint_a.y + self.endpoint_b.y) / 2.0,
        )

    def point_at(self, t: float) -> Point:
        """Point ``a + t (b - a)``."""
        return Point(
            self.endpoint_a.x + t * (self.endpoint_b.x - self.endpoint_a.x),
            self.endpoint_a.y + t * (self.endpoint_b.y - self.endpoint_a.y),
        )


def bisector_half_plane(p: Point, q: Point, tol: float = DEFAULT_TOLERANCE) -> HalfPlane:
    """
    Closed half-plane of points at least as close to ``p`` as to ``q``.

    Its boundary is the perpendicular bisector of ``pq`` and ``p`` lies strictly
    inside, at distance ``|pq| / 2`` from the boundary.

    Raises:
        CoincidentPointsError: If ``|p - q| <= tol``
    """
    dx = q.x - p.x
    dy = q.y - p.y
    length = math.hypot(dx, dy)
    if length <= tol:
        raise CoincidentPointsError(p, q, tol)

    nx = dx / length
    ny = dy / length
    mid_x = (p.x + q.x) / 2.0
    mid_y = (p.y + q.y) / 2.0
    return HalfPlane(nx, ny, nx * mid_x + ny * mid_y)


def orientation(p: Point, q: Point, r: Point, tol: float = DEFAULT_TOLERANCE) -> int:
    """
    Sign of the cross product ``(q - p) x (r - p)``.

    Returns +1 for a left (counter-clockwise) turn, -1 for a right turn and 0
    when the absolute cross product is at most ``tol``.
    """
    cross = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if abs(cross) <= tol:
        return 0
    return 1 if cross > 0 else -1


def point_segment_distance(x: Point, a: Point, b: Point) -> Tuple[float, Point]:
    """
    Distance from ``x`` to the closed segment ``ab`` and the closest point.

    A zero-length segment degrades to the point ``a``.
    """
    dx = b.x - a.x
    dy = b.y - a.y
    length_sq = dx * dx + dy * dy
    if length_sq == 0.0:
        return x.distance_to(a), a

    t = ((x.x - a.x) * dx + (x.y - a.y) * dy) / length_sq
    if t <= 0.0:
        closest = a
    elif t >= 1.0:
        closest = b
    else:
        closest = Point(a.x + t * dx, a.y + t * dy)
    return x.distance_to(closest), closest
