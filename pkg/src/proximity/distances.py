"""
Point-to-set and Čech distances for closed convex cells.

``point_set_distance`` is d(x, A) = inf ‖x − a‖ over a ∈ A and
``cech_distance`` is D(A, B) = inf ‖a − b‖ over a ∈ A, b ∈ B.
"""

import logging
from typing import Tuple, Union

from src.geometry.primitives import Point, point_segment_distance
from src.geometry.polygon import ConvexPolygon, contains_point
from src.voronoi.diagram import VoronoiCell


logger = logging.getLogger(__name__)


Region = Union[VoronoiCell, ConvexPolygon]


def _polygon(region: Region) -> ConvexPolygon:
    return region.polygon if isinstance(region, VoronoiCell) else region


def point_set_distance(x: Point, region: Region) -> float:
    """
    Distance from ``x`` to a closed convex cell; 0 when ``x`` is inside.

    Computed as the minimum over the cell's edges of the projection distance.
    """
    polygon = _polygon(region)
    if contains_point(polygon, x, 0.0):
        return 0.0
    return min(point_segment_distance(x, e.endpoint_a, e.endpoint_b)[0] for e in polygon.edges)


def polygons_overlap(first: Region, second: Region) -> bool:
    """
    Separating-axis test for closed convex polygons.

    The polygons are disjoint iff some edge normal of either one strictly
    separates them; touching polygons count as overlapping.
    """
    a = _polygon(first)
    b = _polygon(second)
    for own, other in ((a, b), (b, a)):
        for hp in own.half_planes:
            if all(hp.signed_distance(v) > 0.0 for v in other.vertices):
                return False
    return True


def closest_points(first: Region, second: Region) -> Tuple[float, Point, Point]:
    """
    Čech distance together with a realising pair of points.

    Returns:
        (distance, point of first, point of second); for overlapping polygons
        the distance is 0 and both points are the same common point
    """
    a = _polygon(first)
    b = _polygon(second)

    best = None
    # Vertex of a against edges of b, then vertex of b against edges of a
    for vertices, edges, flipped in ((a.vertices, b.edges, False), (b.vertices, a.edges, True)):
        for vertex in vertices:
            for edge in edges:
                distance, closest = point_segment_distance(vertex, edge.endpoint_a, edge.endpoint_b)
                if best is None or distance < best[0]:
                    best = (distance, closest, vertex) if flipped else (distance, vertex, closest)

    distance, on_first, on_second = best
    if distance > 0.0 and polygons_overlap(a, b):
        common = _common_point(a, b)
        return 0.0, common, common
    return distance, on_first, on_second


def _common_point(a: ConvexPolygon, b: ConvexPolygon) -> Point:
    """A point of ``a ∩ b`` for polygons known to overlap."""
    for vertex in a.vertices:
        if contains_point(b, vertex, 0.0):
            return vertex
    for vertex in b.vertices:
        if contains_point(a, vertex, 0.0):
            return vertex
    # Edges cross without either polygon holding a vertex of the other
    for e in a.edges:
        for f in b.edges:
            crossing = _segment_crossing(e.endpoint_a, e.endpoint_b, f.endpoint_a, f.endpoint_b)
            if crossing is not None:
                return crossing
    return a.vertices[0]


def _segment_crossing(p: Point, p2: Point, q: Point, q2: Point):
    rx, ry = p2.x - p.x, p2.y - p.y
    sx, sy = q2.x - q.x, q2.y - q.y
    denominator = rx * sy - ry * sx
    if denominator == 0.0:
        return None
    t = ((q.x - p.x) * sy - (q.y - p.y) * sx) / denominator
    u = ((q.x - p.x) * ry - (q.y - p.y) * rx) / denominator
    if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
        return Point(p.x + t * rx, p.y + t * ry)
    return None


def cech_distance(first: Region, second: Region) -> float:
    """
    Čech distance between two closed convex cells.

    Zero iff the closures intersect; otherwise the minimum over vertex-to-edge
    projections of both polygons. Symmetric in its arguments.
    """
    distance, _, _ = closest_points(first, second)
    return distance


def bounds_gap(first: Region, second: Region) -> float:
    """
    Gap between the axis-aligned bounds of two cells.

    A lower bound of the Čech distance, used to skip far-apart pairs.
    """
    a = _polygon(first).bounds
    b = _polygon(second).bounds
    return max(a[0] - b[2], b[0] - a[2], a[1] - b[3], b[1] - a[3], 0.0)
