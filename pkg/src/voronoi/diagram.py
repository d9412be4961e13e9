"""
Diagram data types: generating sets, bounding boxes, cells and diagrams.

All types are frozen; a finished diagram can be shared between threads.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from src.geometry.primitives import DEFAULT_TOLERANCE, Point, Segment
from src.geometry.polygon import ConvexPolygon
from src.utils.error_handler import (
    DuplicateSiteError,
    EmptySitesError,
    InvalidBoundingBoxError,
)


@dataclass(frozen=True)
class GeneratingSet:
    """Ordered sites; a site's index is its id."""

    sites: Tuple[Point, ...]
    tol: float = field(default=DEFAULT_TOLERANCE, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))
        if not self.sites:
            raise EmptySitesError()

        coords = self.as_array()
        for i in range(len(coords) - 1):
            gaps = np.hypot(coords[i + 1:, 0] - coords[i, 0], coords[i + 1:, 1] - coords[i, 1])
            close = np.flatnonzero(gaps <= self.tol)
            if close.size:
                raise DuplicateSiteError(i, i + 1 + int(close[0]))

    @classmethod
    def from_coordinates(
        cls,
        coordinates: Iterable[Sequence[float]],
        tol: float = DEFAULT_TOLERANCE
    ) -> "GeneratingSet":
        return cls(tuple(Point(float(x), float(y)) for x, y in coordinates), tol=tol)

    def __len__(self) -> int:
        return len(self.sites)

    def __getitem__(self, site_id: int) -> Point:
        return self.sites[site_id]

    def as_array(self) -> np.ndarray:
        """Sites as an ``(n, 2)`` float array."""
        return np.array([[p.x, p.y] for p in self.sites], dtype=float)


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned window that every cell is clipped to."""

    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        values = (self.min_x, self.min_y, self.max_x, self.max_y)
        if not all(math.isfinite(v) for v in values):
            raise InvalidBoundingBoxError(f"Bounding box coordinates must be finite, got {values}")
        if not (self.max_x > self.min_x and self.max_y > self.min_y):
            raise InvalidBoundingBoxError(
                f"Bounding box needs max > min on both axes, got {values}"
            )

    @classmethod
    def from_sites(cls, sites: Sequence[Point], margin: float = 0.2) -> "BoundingBox":
        """
        Tight bounds of the sites expanded on every side.

        The slack is ``margin`` times the tight-bounds diagonal; a single
        point (zero diagonal) gets ``margin`` absolute units instead.
        """
        xs = [p.x for p in sites]
        ys = [p.y for p in sites]
        min_x, max_x = min(xs), max(xs)
        min_y, max_y = min(ys), max(ys)
        diagonal = math.hypot(max_x - min_x, max_y - min_y)
        slack = margin * diagonal if diagonal > 0.0 else margin
        return cls(min_x - slack, min_y - slack, max_x + slack, max_y + slack)

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> Point:
        return Point((self.min_x + self.max_x) / 2.0, (self.min_y + self.max_y) / 2.0)

    def contains_strictly(self, point: Point) -> bool:
        return self.min_x < point.x < self.max_x and self.min_y < point.y < self.max_y

    def to_polygon(self, tol: float = DEFAULT_TOLERANCE) -> ConvexPolygon:
        return ConvexPolygon.rectangle(self.min_x, self.min_y, self.max_x, self.max_y, tol=tol)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.min_x, self.min_y, self.max_x, self.max_y)

    def __str__(self) -> str:
        return f"[{self.min_x:g}, {self.max_x:g}] x [{self.min_y:g}, {self.max_y:g}]"


@dataclass(frozen=True)
class VoronoiCell:
    """
    The closed region of one site, clipped to the bounding box.

    ``touches_boundary`` marks cells with an edge on the bounding box, i.e.
    the cells that were unbounded before clipping.
    """

    site_id: int
    polygon: ConvexPolygon
    touches_boundary: bool


@dataclass(frozen=True)
class VoronoiEdge:
    """Shared boundary interval of two cells; ``site_pair`` is ascending."""

    site_pair: Tuple[int, int]
    segment: Segment


@dataclass(frozen=True)
class VoronoiVertex:
    """Point shared by three or more closed cells; ``site_ids`` ascending."""

    point: Point
    site_ids: Tuple[int, ...]


@dataclass(frozen=True)
class VoronoiDiagram:
    """One cell per site plus the extracted edges and vertices."""

    generating_set: GeneratingSet
    bbox: BoundingBox
    cells: Tuple[VoronoiCell, ...]
    edges: Tuple[VoronoiEdge, ...] = ()
    vertices: Tuple[VoronoiVertex, ...] = ()
    tol: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def site_count(self) -> int:
        return len(self.generating_set)

    def cell(self, site_id: int) -> VoronoiCell:
        return self.cells[site_id]

    def site(self, site_id: int) -> Point:
        return self.generating_set[site_id]

    def edge_between(self, p_id: int, q_id: int) -> Optional[VoronoiEdge]:
        pair = (min(p_id, q_id), max(p_id, q_id))
        for edge in self.edges:
            if edge.site_pair == pair:
                return edge
        return None
