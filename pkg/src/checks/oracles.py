"""
Brute-force oracles for a built diagram.

Each oracle recomputes a property independently of the construction and
returns the offending entities. None of them raise for a violated property;
an empty result means the property holds on this instance.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from src.geometry.polygon import contains_points, orientation_residual
from src.geometry.primitives import Point
from src.proximity.distances import cech_distance, point_set_distance
from src.proximity.relation import (
    ProximityGraph,
    RegionKind,
    SiteMapping,
    are_proximal,
    check_uniform_continuity,
    proximal_region,
    region_closeness_witness,
    site_closeness_implies_region_closeness,
)
from src.voronoi.builder import RESIDUAL_FACTOR, nearest_site_grid
from src.voronoi.diagram import VoronoiDiagram
from src.utils.error_handler import DimensionError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridOracleResult:
    """Counts from one grid sweep over the bounding box."""

    points: int
    decisive_points: int
    disagreements: int
    uncovered: int
    overlaps: int
    first_disagreement: Optional[Tuple[float, float]] = None

    def to_dict(self) -> dict:
        return {
            "points": self.points,
            "decisive_points": self.decisive_points,
            "disagreements": self.disagreements,
            "uncovered": self.uncovered,
            "overlaps": self.overlaps,
        }


def grid_oracle(
    diagram: VoronoiDiagram,
    resolution: int = 200,
    margin: Optional[float] = None
) -> GridOracleResult:
    """
    Compare cell membership with brute-force nearest site on a grid.

    Grid points are the centres of a ``resolution`` x ``resolution`` raster
    of the bounding box. A point is decisive when its second-nearest site is
    more than ``margin`` farther than its nearest; every decisive point must
    lie in its nearest site's cell and in no other cell. Every point must lie
    in at least one cell.
    """
    bbox = diagram.bbox
    margin = RESIDUAL_FACTOR * diagram.tol if margin is None else margin
    xs_axis = bbox.min_x + (np.arange(resolution) + 0.5) * (bbox.width / resolution)
    ys_axis = bbox.min_y + (np.arange(resolution) + 0.5) * (bbox.height / resolution)
    xs, ys = np.meshgrid(xs_axis, ys_axis)

    nearest, gaps = nearest_site_grid(diagram.generating_set, xs, ys, diagram.tol)
    membership = np.stack([contains_points(cell.polygon, xs, ys, diagram.tol) for cell in diagram.cells])

    decisive = gaps > margin
    in_nearest = np.take_along_axis(membership, nearest[None, ...], axis=0)[0]
    disagree = decisive & ~in_nearest
    counts = membership.sum(axis=0)
    uncovered = counts == 0
    overlaps = decisive & (counts > 1)

    first = None
    if disagree.any():
        row, col = np.argwhere(disagree)[0]
        first = (float(xs[row, col]), float(ys[row, col]))

    return GridOracleResult(
        points=int(xs.size),
        decisive_points=int(decisive.sum()),
        disagreements=int(disagree.sum()),
        uncovered=int(uncovered.sum()),
        overlaps=int(overlaps.sum()),
        first_disagreement=first,
    )


def convexity_violations(diagram: VoronoiDiagram, tol: Optional[float] = None) -> List[int]:
    """Site ids whose cell has a right turn beyond ``tol``."""
    tol = diagram.tol if tol is None else tol
    bad = []
    for cell in diagram.cells:
        vertices = cell.polygon.vertices
        n = len(vertices)
        if n < 3 or any(
            orientation_residual(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) < -tol
            for i in range(n)
        ):
            bad.append(cell.site_id)
    return bad


def proximity_inconsistencies(diagram: VoronoiDiagram, tol: Optional[float] = None) -> List[Tuple[int, int]]:
    """
    Pairs where ``are_proximal``, ``cech_distance <= tol`` and a non-empty
    proximal region do not all agree, or where the region is two-dimensional.
    """
    tol = diagram.tol if tol is None else tol
    bad = []
    for a, b in combinations(diagram.cells, 2):
        pair = (a.site_id, b.site_id)
        try:
            region_nonempty = proximal_region(a, b, tol).kind is not RegionKind.EMPTY
        except DimensionError:
            bad.append(pair)
            continue
        if not (are_proximal(a, b, tol) == (cech_distance(a, b) <= tol) == region_nonempty):
            bad.append(pair)
    return bad


def isolated_cells(graph: ProximityGraph) -> List[int]:
    """Cells without a proximal neighbour; a single cell is never isolated."""
    if graph.node_count < 2:
        return []
    return graph.isolated_nodes()


def site_closeness_failures(
    diagram: VoronoiDiagram,
    samples_per_site: int = 10,
    seed: int = 0,
    tol: Optional[float] = None
) -> List[Tuple[int, Tuple[float, float]]]:
    """
    Sampled points ``y`` within ``tol`` of a site ``p`` that are farther than
    ``tol`` from ``V_p``.
    """
    tol = diagram.tol if tol is None else tol
    rng = np.random.default_rng(seed)
    failures = []
    for p_id in range(diagram.site_count):
        site = diagram.site(p_id)
        angles = rng.uniform(0.0, 2.0 * np.pi, samples_per_site)
        radii = tol * np.sqrt(rng.uniform(0.0, 1.0, samples_per_site))
        for angle, radius in zip(angles, radii):
            y = Point(site.x + radius * np.cos(angle), site.y + radius * np.sin(angle))
            if not site_closeness_implies_region_closeness(y, p_id, diagram, tol):
                failures.append((p_id, y.as_tuple()))
    return failures


def witness_failures(diagram: VoronoiDiagram, tol: Optional[float] = None) -> List[Tuple[int, int]]:
    """
    Ordered pairs where a witness exists but the cells are not proximal, the
    cells are proximal without a witness, or the witness is not within ``tol``
    of both cells.
    """
    tol = diagram.tol if tol is None else tol
    limit = RESIDUAL_FACTOR * tol
    failures = []
    for a in diagram.cells:
        for b in diagram.cells:
            witness = region_closeness_witness(a, b, tol)
            proximal = a.site_id == b.site_id or are_proximal(a, b, tol)
            if (witness is not None) != proximal:
                failures.append((a.site_id, b.site_id))
            elif witness is not None and (
                point_set_distance(witness, a) > limit or point_set_distance(witness, b) > limit
            ):
                failures.append((a.site_id, b.site_id))
    return failures


def trivial_mapping_failures(diagram: VoronoiDiagram, tol: Optional[float] = None) -> List[str]:
    """Identity and constant self-mappings that are reported as not uniformly continuous."""
    failures = []
    identity = check_uniform_continuity(SiteMapping.identity(diagram.site_count), diagram, diagram, tol)
    if not identity.uniformly_continuous:
        failures.append("identity")
    constant = check_uniform_continuity(SiteMapping.constant(diagram.site_count, 0), diagram, diagram, tol)
    if not constant.uniformly_continuous:
        failures.append("constant")
    return failures
