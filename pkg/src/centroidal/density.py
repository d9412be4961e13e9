"""
Density grids and label grids mapped onto a bounding box.

Pixel (column i, row j) covers the world rectangle whose centre is
``(min_x + (i + 0.5) * w / width, max_y - (j + 0.5) * h / height)``:
row 0 is the top of the image, as in grey-map files.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.geometry.primitives import Point
from src.geometry.polygon import contains_points, polygon_centroid
from src.voronoi.builder import nearest_site_grid
from src.voronoi.diagram import BoundingBox, GeneratingSet, VoronoiCell
from src.utils.error_handler import DensityGridError, EmptySupportError


logger = logging.getLogger(__name__)


def _pixel_centers(bbox: BoundingBox, width: int, height: int) -> Tuple[np.ndarray, np.ndarray]:
    columns = bbox.min_x + (np.arange(width) + 0.5) * (bbox.width / width)
    rows = bbox.max_y - (np.arange(height) + 0.5) * (bbox.height / height)
    return np.meshgrid(columns, rows)


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """
    Non-negative per-pixel weights, ``values[row, column]``, over a bounding box.
    """

    values: np.ndarray
    bbox: BoundingBox
    _centers: Tuple[np.ndarray, np.ndarray] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.size == 0:
            raise DensityGridError(f"Density grid must be a non-empty 2-D array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DensityGridError("Density values must be finite")
        if np.any(values < 0):
            raise DensityGridError("Density values must be non-negative")
        if not np.any(values > 0):
            raise DensityGridError("Density grid needs at least one positive value")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_centers", _pixel_centers(self.bbox, values.shape[1], values.shape[0]))

    @classmethod
    def uniform(cls, bbox: BoundingBox, width: int, height: int) -> "DensityGrid":
        return cls(np.ones((height, width)), bbox)

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def pixel_area(self) -> float:
        return (self.bbox.width / self.width) * (self.bbox.height / self.height)

    @property
    def pixel_diagonal(self) -> float:
        return float(np.hypot(self.bbox.width / self.width, self.bbox.height / self.height))

    def pixel_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        """World coordinates of pixel centres as ``(xs, ys)`` arrays shaped like ``values``."""
        return self._centers

    def world_point(self, column: int, row: int) -> Point:
        xs, ys = self._centers
        return Point(float(xs[row, column]), float(ys[row, column]))


def weighted_cell_centroid(
    cell: VoronoiCell,
    density: Optional[DensityGrid] = None,
    tol: Optional[float] = None
) -> Point:
    """
    Centroid of a cell, density-weighted when a grid is given.

    Without a grid this is the polygon's area centroid. With a grid it is the
    weighted mean of the pixel centres that fall inside the closed cell, so
    a pixel on a shared side counts for both cells. Lloyd iteration uses
    ``assign_pixels`` instead, which gives every pixel to exactly one site.

    Raises:
        DegenerateGeometryError: If the cell has no area
        EmptySupportError: If no positive-density pixel centre lies in the cell
    """
    if density is None:
        return polygon_centroid(cell.polygon, tol)

    tol = cell.polygon.tol if tol is None else tol
    xs, ys = density.pixel_centers()
    inside = contains_points(cell.polygon, xs, ys, tol)
    weights = np.where(inside, density.values, 0.0)
    total = float(weights.sum())
    if total <= 0.0:
        raise EmptySupportError(cell.site_id)

    return Point(float((weights * xs).sum() / total), float((weights * ys).sum() / total))


def assign_pixels(sites: GeneratingSet, density: DensityGrid, tol: Optional[float] = None) -> np.ndarray:
    """
    Site id owning each pixel: the nearest site, ties within ``tol`` to the
    lowest id. Shaped like ``density.values``.
    """
    xs, ys = density.pixel_centers()
    nearest, _ = nearest_site_grid(sites, xs, ys, tol)
    return nearest


def assigned_centroids(
    sites: GeneratingSet,
    density: DensityGrid,
    tol: Optional[float] = None
) -> List[Optional[Point]]:
    """
    Density-weighted centroid of the pixels assigned to each site.

    Returns:
        One entry per site id; None where the site owns no positive weight
    """
    owner = assign_pixels(sites, density, tol).ravel()
    xs, ys = density.pixel_centers()
    weights = density.values.ravel()
    count = len(sites)
    totals = np.bincount(owner, weights=weights, minlength=count)
    sum_x = np.bincount(owner, weights=weights * xs.ravel(), minlength=count)
    sum_y = np.bincount(owner, weights=weights * ys.ravel(), minlength=count)

    return [
        Point(float(sum_x[k] / totals[k]), float(sum_y[k] / totals[k])) if totals[k] > 0.0 else None
        for k in range(count)
    ]


def seed_sites_from_labels(
    labels: np.ndarray,
    bbox: BoundingBox,
    background: Optional[int] = 0,
    tol: float = 0.0
) -> GeneratingSet:
    """
    One site per segment of a pre-segmented label grid.

    Each label other than ``background`` contributes the mean of its pixel
    centres; sites are ordered by ascending label.
    """
    labels = np.asarray(labels)
    if labels.ndim != 2 or labels.size == 0:
        raise DensityGridError(f"Label grid must be a non-empty 2-D array, got shape {labels.shape}")

    xs, ys = _pixel_centers(bbox, labels.shape[1], labels.shape[0])
    sites = []
    for label in np.unique(labels):
        if background is not None and label == background:
            continue
        mask = labels == label
        sites.append(Point(float(xs[mask].mean()), float(ys[mask].mean())))

    logger.info(f"Seeded {len(sites)} sites from label grid {labels.shape[1]}x{labels.shape[0]}")
    return GeneratingSet(tuple(sites), tol=tol)
