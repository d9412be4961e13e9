"""
Convex polygons as finite intersections of closed half-planes.

Clipping keeps collinear vertices while cutting and runs one simplification
pass at the end, so results do not depend on the order of the cuts.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.geometry.primitives import (
    DEFAULT_TOLERANCE,
    HalfPlane,
    Point,
    Segment,
    point_segment_distance,
)
from src.utils.error_handler import DegenerateGeometryError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvexPolygon:
    """
    Closed convex polygon with counter-clockwise vertices.

    ``tol`` is the merge tolerance the invariants were checked with; it is not
    part of the polygon's identity.
    """

    vertices: Tuple[Point, ...]
    tol: float = field(default=DEFAULT_TOLERANCE, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        n = len(self.vertices)
        if n < 3:
            raise DegenerateGeometryError(f"Convex polygon needs at least 3 vertices, got {n}")

        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            c = self.vertices[(i + 2) % n]
            edge_length = a.distance_to(b)
            if edge_length <= self.tol:
                raise DegenerateGeometryError(
                    f"Consecutive vertices {i} and {(i + 1) % n} closer than {self.tol:g}"
                )
            # Signed distance of c from the line through a, b
            turn = ((b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x)) / edge_length
            if turn < -self.tol:
                raise DegenerateGeometryError(
                    f"Vertices {i}..{(i + 2) % n} turn clockwise (residual {turn:.3e})"
                )

    @property
    def closed_region(self) -> bool:
        return True

    @cached_property
    def edges(self) -> Tuple[Segment, ...]:
        """Boundary segments in counter-clockwise order."""
        n = len(self.vertices)
        return tuple(Segment(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n))

    @cached_property
    def half_planes(self) -> Tuple[HalfPlane, ...]:
        """Outward-normal half-planes whose intersection is the polygon."""
        planes = []
        for edge in self.edges:
            a, b = edge.endpoint_a, edge.endpoint_b
            dx = b.x - a.x
            dy = b.y - a.y
            planes.append(HalfPlane(dy, -dx, dy * a.x - dx * a.y))
        return tuple(planes)

    @cached_property
    def bounds(self) -> Tuple[float, float, float, float]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    @classmethod
    def rectangle(
        cls,
        min_x: float,
        min_y: float,
        max_x: float,
        max_y: float,
        tol: float = DEFAULT_TOLERANCE
    ) -> "ConvexPolygon":
        return cls(
            (Point(min_x, min_y), Point(max_x, min_y), Point(max_x, max_y), Point(min_x, max_y)),
            tol=tol,
        )


def orientation_residual(a: Point, b: Point, c: Point) -> float:
    """Signed distance of ``c`` from the directed line ``ab`` (positive to the left)."""
    length = a.distance_to(b)
    if length == 0.0:
        return 0.0
    return ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)) / length


def simplify_vertices(points: Sequence[Point], tol: float) -> List[Point]:
    """
    Final simplification pass over a closed vertex ring.

    Merges consecutive points within ``tol`` (including the wrap-around pair)
    and drops middle vertices lying within ``tol`` of the segment joining
    their neighbours. Repeats until nothing changes.
    """
    ring = list(points)
    changed = True
    while changed and len(ring) >= 2:
        changed = False

        merged: List[Point] = []
        for point in ring:
            if merged and merged[-1].distance_to(point) <= tol:
                continue
            merged.append(point)
        while len(merged) > 1 and merged[-1].distance_to(merged[0]) <= tol:
            merged.pop()
        if len(merged) != len(ring):
            changed = True
        ring = merged

        i = 0
        while len(ring) >= 3 and i < len(ring):
            prev_point = ring[i - 1]
            point = ring[i]
            next_point = ring[(i + 1) % len(ring)]
            distance, _ = point_segment_distance(point, prev_point, next_point)
            if distance <= tol:
                del ring[i]
                changed = True
            else:
                i += 1
    return ring


def clip_vertices(points: Sequence[Point], hp: HalfPlane, tol: float) -> List[Point]:
    """
    One reentrant clipping stage over a vertex ring, without simplification.

    A vertex is kept when its residual is at most ``tol``; crossing points are
    interpolated from the two residuals and lie on the boundary line.
    """
    if not points:
        return []

    distances = [hp.signed_distance(p) for p in points]
    result: List[Point] = []
    n = len(points)
    for i in range(n):
        current, d_current = points[i], distances[i]
        nxt, d_next = points[(i + 1) % n], distances[(i + 1) % n]

        if d_current <= tol:
            result.append(current)

        crosses = (d_current > tol and d_next < 0.0) or (d_current < 0.0 and d_next > tol)
        if crosses:
            t = d_current / (d_current - d_next)
            result.append(Point(
                current.x + t * (nxt.x - current.x),
                current.y + t * (nxt.y - current.y),
            ))
    return result


def clip_polygon(poly: ConvexPolygon, hp: HalfPlane, tol: Optional[float] = None) -> Optional[ConvexPolygon]:
    """
    Intersect a convex polygon with a closed half-plane.

    Args:
        poly: Polygon to clip
        hp: Half-plane to keep
        tol: Merge tolerance; defaults to the polygon's own

    Returns:
        The clipped polygon, or None when the intersection has no area
        (disjoint, or touching only along an edge or at a vertex)
    """
    tol = poly.tol if tol is None else tol

    if all(hp.signed_distance(v) <= tol for v in poly.vertices):
        return poly

    ring = simplify_vertices(clip_vertices(poly.vertices, hp, tol), tol)
    if len(ring) < 3:
        return None
    return ConvexPolygon(tuple(ring), tol=tol)


def intersect_convex(first: ConvexPolygon, second: ConvexPolygon, tol: float) -> List[Point]:
    """
    Points spanning ``first ∩ second``, possibly degenerate.

    The result is a vertex ring with near-duplicates merged: empty when the
    polygons are apart, a single point when they touch at a vertex, the two
    ends of a segment (plus interior collinear points) when they share an
    edge, and a full polygon ring when they overlap.
    """
    ring: List[Point] = list(first.vertices)
    for hp in second.half_planes:
        ring = clip_vertices(ring, hp, tol)
        if not ring:
            return []

    unique: List[Point] = []
    for point in ring:
        if all(point.distance_to(kept) > tol for kept in unique):
            unique.append(point)
    return unique


def contains_point(poly: ConvexPolygon, x: Point, tol: float = DEFAULT_TOLERANCE) -> bool:
    """True iff ``x`` lies in the closed polygon or within ``tol`` of its boundary."""
    return all(hp.signed_distance(x) <= tol for hp in poly.half_planes)


def contains_points(poly: ConvexPolygon, xs: np.ndarray, ys: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Vectorised ``contains_point`` over coordinate arrays of equal shape."""
    inside = np.ones(np.shape(xs), dtype=bool)
    for hp in poly.half_planes:
        inside &= (hp.normal_x * xs + hp.normal_y * ys - hp.offset) <= tol
    return inside


def polygon_area(poly: ConvexPolygon) -> float:
    """Shoelace area, computed relative to the first vertex."""
    origin = poly.vertices[0]
    twice_area = 0.0
    for i in range(1, len(poly.vertices) - 1):
        a = poly.vertices[i]
        b = poly.vertices[i + 1]
        twice_area += (a.x - origin.x) * (b.y - origin.y) - (a.y - origin.y) * (b.x - origin.x)
    return twice_area / 2.0


def polygon_centroid(poly: ConvexPolygon, tol: Optional[float] = None) -> Point:
    """
    Area centroid of a convex polygon.

    Raises:
        DegenerateGeometryError: If the area is at most ``tol**2``
    """
    tol = poly.tol if tol is None else tol
    origin = poly.vertices[0]
    twice_area = 0.0
    cx = 0.0
    cy = 0.0
    for i in range(1, len(poly.vertices) - 1):
        ax = poly.vertices[i].x - origin.x
        ay = poly.vertices[i].y - origin.y
        bx = poly.vertices[i + 1].x - origin.x
        by = poly.vertices[i + 1].y - origin.y
        cross = ax * by - ay * bx
        twice_area += cross
        # Fan triangle (origin, a, b) has centroid (a + b) / 3 relative to origin
        cx += cross * (ax + bx)
        cy += cross * (ay + by)

    if twice_area / 2.0 <= tol * tol:
        raise DegenerateGeometryError(f"Polygon area {twice_area / 2.0:.3e} is degenerate")

    return Point(origin.x + cx / (3.0 * twice_area), origin.y + cy / (3.0 * twice_area))


def polygon_second_moment(poly: ConvexPolygon, about: Point) -> float:
    """Polar second moment ``∫ ‖x - about‖² dA`` over the polygon."""
    total = 0.0
    n = len(poly.vertices)
    for i in range(n):
        ax = poly.vertices[i].x - about.x
        ay = poly.vertices[i].y - about.y
        bx = poly.vertices[(i + 1) % n].x - about.x
        by = poly.vertices[(i + 1) % n].y - about.y
        cross = ax * by - ay * bx
        total += cross * (ax * ax + ax * bx + bx * bx + ay * ay + ay * by + by * by)
    return total / 12.0
