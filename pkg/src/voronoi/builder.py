"""
Voronoi diagram construction by iterated half-plane clipping.

Each cell starts as the bounding box and is cut by the bisector half-plane of
every competing site, nearest first. Edges and vertices are then extracted
from the finished cells by pairwise boundary overlap and corner clustering.

CONSTRUCTION ORDER:
1. Validate sites against the tolerance and the bounding box
2. Build cells (independent per site, optionally on a thread pool)
3. Extract edges (shared boundary intervals on a pair's bisector)
4. Extract vertices (points shared by three or more closed cells)
"""

import logging
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.geometry.primitives import Point, Segment, bisector_half_plane
from src.geometry.polygon import clip_polygon, contains_point
from src.voronoi.diagram import (
    BoundingBox,
    GeneratingSet,
    VoronoiCell,
    VoronoiDiagram,
    VoronoiEdge,
    VoronoiVertex,
)
from src.utils.error_handler import (
    ErrorContext,
    GeometryError,
    InvalidParameterError,
    SiteOutsideBoundingBoxError,
)


logger = logging.getLogger(__name__)


DEFAULT_RELATIVE_TOLERANCE = 1e-9

# Residual checks on extracted edges and vertices allow this many tolerances
RESIDUAL_FACTOR = 10.0


def resolve_tolerance(bbox: BoundingBox, relative: float = DEFAULT_RELATIVE_TOLERANCE) -> float:
    """Absolute tolerance in length units: ``relative`` times the box diagonal."""
    if relative <= 0:
        raise InvalidParameterError(f"Relative tolerance must be positive, got {relative}")
    return relative * bbox.diagonal


def validate_sites_in_bbox(sites: GeneratingSet, bbox: BoundingBox) -> None:
    """
    Raises:
        SiteOutsideBoundingBoxError: For the first site not strictly inside
    """
    for site_id, site in enumerate(sites.sites):
        if not bbox.contains_strictly(site):
            raise SiteOutsideBoundingBoxError(site_id, site, bbox)


def nearest_site(sites: GeneratingSet, x: Point, tol: Optional[float] = None) -> int:
    """
    Index of the site closest to ``x``.

    Distances within ``tol`` (the generating set's tolerance by default) of
    the minimum count as ties; ties go to the lowest index.
    """
    tol = sites.tol if tol is None else tol
    distances = [x.distance_to(site) for site in sites.sites]
    best = min(distances)
    for site_id, distance in enumerate(distances):
        if distance <= best + tol:
            return site_id
    return 0


def nearest_site_grid(
    sites: GeneratingSet,
    xs: np.ndarray,
    ys: np.ndarray,
    tol: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorised nearest site over coordinate arrays, with the tie rule of
    ``nearest_site``.

    Returns:
        (index array, margin array) where margin is the second-nearest
        distance minus the nearest distance (infinite for a single site)
    """
    coords = sites.as_array()
    tol = sites.tol if tol is None else tol
    distances = np.hypot(xs[..., None] - coords[:, 0], ys[..., None] - coords[:, 1])
    best = distances.min(axis=-1)
    nearest = np.argmax(distances <= best[..., None] + tol, axis=-1)
    if len(coords) == 1:
        return nearest, np.full(np.shape(xs), np.inf)
    two_smallest = np.partition(distances, 1, axis=-1)[..., :2]
    return nearest, two_smallest[..., 1] - two_smallest[..., 0]


def _touches_bbox(cell_vertices: Sequence[Point], bbox: BoundingBox, tol: float) -> bool:
    """True if some polygon edge runs along a side of the box."""
    n = len(cell_vertices)
    for i in range(n):
        a = cell_vertices[i]
        b = cell_vertices[(i + 1) % n]
        if abs(a.x - bbox.min_x) <= tol and abs(b.x - bbox.min_x) <= tol:
            return True
        if abs(a.x - bbox.max_x) <= tol and abs(b.x - bbox.max_x) <= tol:
            return True
        if abs(a.y - bbox.min_y) <= tol and abs(b.y - bbox.min_y) <= tol:
            return True
        if abs(a.y - bbox.max_y) <= tol and abs(b.y - bbox.max_y) <= tol:
            return True
    return False


def build_cell(
    sites: GeneratingSet,
    p_id: int,
    bbox: BoundingBox,
    tol: Optional[float] = None
) -> VoronoiCell:
    """
    Build the cell of one site as ``bbox ∩ (⋂ H_pq)`` over all other sites.

    Competitors are visited nearest first; once half the distance to the next
    competitor exceeds the cell's radius around the site, no later bisector can
    cut the cell and the loop stops.

    Args:
        sites: Generating set
        p_id: Site to build the cell of
        bbox: Clipping window
        tol: Absolute tolerance; defaults to the relative default of the box

    Returns:
        VoronoiCell for ``p_id``
    """
    if not 0 <= p_id < len(sites):
        raise InvalidParameterError(f"Site id {p_id} out of range for {len(sites)} sites")
    tol = resolve_tolerance(bbox) if tol is None else tol

    p = sites[p_id]
    polygon = bbox.to_polygon(tol)
    competitors = sorted(
        (q_id for q_id in range(len(sites)) if q_id != p_id),
        key=lambda q_id: (p.distance_to(sites[q_id]), q_id),
    )

    for q_id in competitors:
        q = sites[q_id]
        radius = max(p.distance_to(v) for v in polygon.vertices)
        if p.distance_to(q) / 2.0 > radius + tol:
            break
        clipped = clip_polygon(polygon, bisector_half_plane(p, q, tol), tol)
        if clipped is None:
            raise GeometryError(f"Cell of site {p_id} vanished when clipped against site {q_id}")
        polygon = clipped

    touches = _touches_bbox(polygon.vertices, bbox, tol)
    logger.debug(f"Built cell {p_id}: {len(polygon.vertices)} vertices, touches_boundary={touches}")
    return VoronoiCell(site_id=p_id, polygon=polygon, touches_boundary=touches)


def build_cells(
    sites: GeneratingSet,
    bbox: BoundingBox,
    tol: Optional[float] = None,
    workers: int = 1
) -> Tuple[VoronoiCell, ...]:
    """Build every cell; ``workers > 1`` runs ``build_cell`` on a thread pool."""
    tol = resolve_tolerance(bbox) if tol is None else tol
    validate_sites_in_bbox(sites, bbox)

    if workers > 1 and len(sites) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return tuple(pool.map(lambda site_id: build_cell(sites, site_id, bbox, tol), range(len(sites))))
    return tuple(build_cell(sites, site_id, bbox, tol) for site_id in range(len(sites)))


def _bounds_overlap(first: VoronoiCell, second: VoronoiCell, slack: float) -> bool:
    a = first.polygon.bounds
    b = second.polygon.bounds
    return not (
        a[2] < b[0] - slack or b[2] < a[0] - slack
        or a[3] < b[1] - slack or b[3] < a[1] - slack
    )


def extract_edges(sites: GeneratingSet, cells: Sequence[VoronoiCell], tol: float) -> Tuple[VoronoiEdge, ...]:
    """
    Shared boundary intervals of cell pairs.

    For each pair the boundary edges of both polygons lying on the pair's
    bisector are projected onto the bisector; the overlap of the two intervals,
    when longer than ``tol``, is the Voronoi edge.
    """
    on_line = RESIDUAL_FACTOR * tol
    edges: List[VoronoiEdge] = []

    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if not _bounds_overlap(cells[i], cells[j], on_line):
                continue

            hp = bisector_half_plane(sites[i], sites[j], tol)
            # Direction along the bisector and the foot of the origin on it
            dx, dy = -hp.normal_y, hp.normal_x
            base_x, base_y = hp.normal_x * hp.offset, hp.normal_y * hp.offset

            intervals = []
            for cell in (cells[i], cells[j]):
                params = []
                for segment in cell.polygon.edges:
                    a, b = segment.endpoint_a, segment.endpoint_b
                    if abs(hp.signed_distance(a)) <= on_line and abs(hp.signed_distance(b)) <= on_line:
                        params.append((a.x - base_x) * dx + (a.y - base_y) * dy)
                        params.append((b.x - base_x) * dx + (b.y - base_y) * dy)
                if not params:
                    break
                intervals.append((min(params), max(params)))
            if len(intervals) < 2:
                continue

            low = max(intervals[0][0], intervals[1][0])
            high = min(intervals[0][1], intervals[1][1])
            if high - low <= tol:
                continue

            start = Point(base_x + low * dx, base_y + low * dy)
            end = Point(base_x + high * dx, base_y + high * dy)
            start, end = sorted((start, end), key=lambda pt: (pt.x, pt.y))
            edges.append(VoronoiEdge(site_pair=(i, j), segment=Segment(start, end)))

    logger.debug(f"Extracted {len(edges)} edges from {len(cells)} cells")
    return tuple(edges)


def extract_vertices(cells: Sequence[VoronoiCell], tol: float) -> Tuple[VoronoiVertex, ...]:
    """
    Points shared by at least three closed cells.

    Polygon corners within ``tol`` of each other are coalesced (grid hashing
    with cell size ``tol``); each cluster's incident set is every cell whose
    closed polygon contains the cluster centre, so cocircular meeting points
    report all of their cells.
    """
    bucket = max(tol, 1e-300)
    grid: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    clusters: List[List[Point]] = []

    for cell in cells:
        for corner in cell.polygon.vertices:
            key = (math.floor(corner.x / bucket), math.floor(corner.y / bucket))
            match = None
            for kx in (key[0] - 1, key[0], key[0] + 1):
                for ky in (key[1] - 1, key[1], key[1] + 1):
                    for cluster_id in grid.get((kx, ky), ()):
                        if clusters[cluster_id][0].distance_to(corner) <= tol:
                            match = cluster_id
                            break
                    if match is not None:
                        break
                if match is not None:
                    break
            if match is None:
                grid[key].append(len(clusters))
                clusters.append([corner])
            else:
                clusters[match].append(corner)

    membership_tol = RESIDUAL_FACTOR * tol
    vertices: List[VoronoiVertex] = []
    for members in clusters:
        if len(members) < 3:
            continue
        centre = Point(
            sum(p.x for p in members) / len(members),
            sum(p.y for p in members) / len(members),
        )
        incident = []
        for cell in cells:
            min_x, min_y, max_x, max_y = cell.polygon.bounds
            if not (min_x - membership_tol <= centre.x <= max_x + membership_tol
                    and min_y - membership_tol <= centre.y <= max_y + membership_tol):
                continue
            if contains_point(cell.polygon, centre, membership_tol):
                incident.append(cell.site_id)
        if len(incident) >= 3:
            vertices.append(VoronoiVertex(point=centre, site_ids=tuple(sorted(incident))))

    vertices.sort(key=lambda v: (v.point.x, v.point.y))
    logger.debug(f"Extracted {len(vertices)} vertices from {len(cells)} cells")
    return tuple(vertices)


def build_diagram(
    sites: GeneratingSet,
    bbox: BoundingBox,
    tol: Optional[float] = None,
    workers: int = 1
) -> VoronoiDiagram:
    """
    Build the full diagram: one cell per site, edges and vertices.

    Args:
        sites: Generating set
        bbox: Clipping window; every site must lie strictly inside
        tol: Absolute tolerance; defaults to 1e-9 of the box diagonal
        workers: Threads for cell construction

    Returns:
        VoronoiDiagram

    Raises:
        DuplicateSiteError: If two sites coincide within ``tol``
        SiteOutsideBoundingBoxError: If a site is not strictly inside ``bbox``
    """
    tol = resolve_tolerance(bbox) if tol is None else tol
    if sites.tol != tol:
        # Re-validate distinctness at the diagram's tolerance
        sites = GeneratingSet(sites.sites, tol=tol)

    with ErrorContext("Building Voronoi diagram", sites=len(sites)):
        cells = build_cells(sites, bbox, tol, workers)
        edges = extract_edges(sites, cells, tol)
        vertices = extract_vertices(cells, tol)

    logger.info(
        f"Built diagram: {len(cells)} cells, {len(edges)} edges, {len(vertices)} vertices "
        f"(tol {tol:.3e})"
    )
    return VoronoiDiagram(
        generating_set=sites,
        bbox=bbox,
        cells=cells,
        edges=edges,
        vertices=vertices,
        tol=tol,
    )


def check_diagram_invariants(diagram: VoronoiDiagram) -> List[str]:
    """
    Violated VoronoiDiagram invariants, as messages; empty when all hold.

    Checks one cell per site in id order, each site inside its own cell, edge
    endpoints on their pair's bisector and vertex equidistance, each within
    ``RESIDUAL_FACTOR`` tolerances.
    """
    problems: List[str] = []
    limit = RESIDUAL_FACTOR * diagram.tol
    sites = diagram.generating_set

    if len(diagram.cells) != len(sites):
        problems.append(f"{len(diagram.cells)} cells for {len(sites)} sites")
    for index, cell in enumerate(diagram.cells):
        if cell.site_id != index:
            problems.append(f"cell at position {index} has site id {cell.site_id}")
        elif not contains_point(cell.polygon, sites[index], diagram.tol):
            problems.append(f"site {index} lies outside its cell")

    for edge in diagram.edges:
        p_id, q_id = edge.site_pair
        if not (0 <= p_id < len(sites) and 0 <= q_id < len(sites)) or p_id == q_id:
            problems.append(f"edge {edge.site_pair} references invalid sites")
            continue
        for endpoint in (edge.segment.endpoint_a, edge.segment.endpoint_b):
            residual = abs(endpoint.distance_to(sites[p_id]) - endpoint.distance_to(sites[q_id]))
            if residual > limit:
                problems.append(f"edge {edge.site_pair} endpoint {endpoint} off bisector by {residual:.3e}")

    for vertex in diagram.vertices:
        if len(vertex.site_ids) < 3:
            problems.append(f"vertex {vertex.point} has only {len(vertex.site_ids)} incident sites")
            continue
        if any(not 0 <= s < len(sites) for s in vertex.site_ids):
            problems.append(f"vertex {vertex.point} references invalid sites")
            continue
        distances = [vertex.point.distance_to(sites[s]) for s in vertex.site_ids]
        if max(distances) - min(distances) > limit:
            problems.append(f"vertex {vertex.point} spread {max(distances) - min(distances):.3e}")

    return problems


def cell_normals(cell: VoronoiCell, site: Point) -> List[Point]:
    """
    Feet of the perpendiculars from the site to each side's supporting line.

    The rays from the site to these points are the outward normals of the
    half-planes that bound the cell.
    """
    feet = []
    for hp in cell.polygon.half_planes:
        distance = hp.signed_distance(site)
        feet.append(Point(site.x - distance * hp.normal_x, site.y - distance * hp.normal_y))
    return feet
