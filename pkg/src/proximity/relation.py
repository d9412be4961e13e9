"""
The proximity relation δ between Voronoi cells.

Two closed cells are proximal when their closures meet; numerically, when
their Čech distance is at most the diagram tolerance. For distinct sites the
meeting set (the proximal region) is empty, a single vertex or an edge.

THEOREM-2 INSTANCE CHECKS:
1. Every cell of a diagram with two or more sites has a proximal neighbour
   (proximity graph has no isolated node)
2. A point within tol of a site is within tol of that site's cell
3. Two cells are proximal iff some point of one is within tol of the other
   (a witness point exists)
4. A site mapping is uniformly continuous iff it maps proximal pairs to
   proximal pairs
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from src.geometry.primitives import Point, Segment
from src.geometry.polygon import intersect_convex
from src.proximity.distances import bounds_gap, cech_distance, closest_points, point_set_distance
from src.voronoi.diagram import VoronoiCell, VoronoiDiagram
from src.utils.error_handler import DimensionError, InvalidMappingError, InvalidParameterError


logger = logging.getLogger(__name__)


class RegionKind(str, Enum):
    """Shape of cl V_p ∩ cl V_z for distinct sites."""

    EMPTY = "empty"
    VERTEX = "vertex"
    EDGE = "edge"


@dataclass(frozen=True)
class ProximalRegion:
    """
    Classified intersection of two closed cells.

    ``point`` is set for VERTEX, ``segment`` for EDGE; both are None for EMPTY.
    """

    kind: RegionKind
    site_pair: Tuple[int, int]
    point: Optional[Point] = None
    segment: Optional[Segment] = None

    @property
    def points(self) -> Tuple[Point, ...]:
        """Extreme points of the region: none, the vertex, or both edge ends."""
        if self.kind is RegionKind.VERTEX:
            return (self.point,)
        if self.kind is RegionKind.EDGE:
            return (self.segment.endpoint_a, self.segment.endpoint_b)
        return ()


def are_proximal(a: VoronoiCell, b: VoronoiCell, tol: float) -> bool:
    """V_a δ V_b: the Čech distance of the two cells is at most ``tol``."""
    return cech_distance(a, b) <= tol


def proximal_region(a: VoronoiCell, b: VoronoiCell, tol: float) -> ProximalRegion:
    """
    Classify cl V_a ∩ cl V_b for two distinct sites.

    The intersection is computed by clipping one polygon with the other's edge
    half-planes. Its extent decides the kind: diameter at most ``tol`` is a
    vertex, otherwise an edge between the two farthest points. A thickness
    (twice the area over the diameter) above ``tol`` means the open cells
    overlap, which distinct sites never do.

    Raises:
        InvalidParameterError: If both cells belong to the same site
        DimensionError: If the intersection is two-dimensional
    """
    if a.site_id == b.site_id:
        raise InvalidParameterError(f"Proximal region needs distinct sites, got {a.site_id} twice")

    pair = (min(a.site_id, b.site_id), max(a.site_id, b.site_id))
    distance, on_a, on_b = closest_points(a, b)
    if distance > tol:
        return ProximalRegion(kind=RegionKind.EMPTY, site_pair=pair)

    points = intersect_convex(a.polygon, b.polygon, tol)
    if not points:
        # Closures within tol without an exact common point
        middle = Point((on_a.x + on_b.x) / 2.0, (on_a.y + on_b.y) / 2.0)
        return ProximalRegion(kind=RegionKind.VERTEX, site_pair=pair, point=middle)

    diameter = 0.0
    ends = (points[0], points[0])
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            gap = points[i].distance_to(points[j])
            if gap > diameter:
                diameter = gap
                ends = (points[i], points[j])

    if diameter <= tol:
        centre = Point(
            sum(p.x for p in points) / len(points),
            sum(p.y for p in points) / len(points),
        )
        return ProximalRegion(kind=RegionKind.VERTEX, site_pair=pair, point=centre)

    twice_area = 0.0
    origin = points[0]
    for i in range(1, len(points) - 1):
        u, v = points[i], points[i + 1]
        twice_area += (u.x - origin.x) * (v.y - origin.y) - (u.y - origin.y) * (v.x - origin.x)
    thickness = abs(twice_area) / diameter
    if thickness > tol:
        raise DimensionError(
            f"Cells {pair[0]} and {pair[1]} overlap with thickness {thickness:.3e}"
        )

    start, end = sorted(ends, key=lambda p: (p.x, p.y))
    return ProximalRegion(kind=RegionKind.EDGE, site_pair=pair, segment=Segment(start, end))


@dataclass(frozen=True)
class ProximityGraph:
    """
    Simple undirected graph: a node per site, an edge per proximal pair.

    Edges are keyed by ascending site pairs and carry the proximal region.
    """

    node_count: int
    edges: Dict[Tuple[int, int], ProximalRegion] = field(default_factory=dict)

    def __post_init__(self):
        for p_id, q_id in self.edges:
            if p_id == q_id:
                raise InvalidParameterError(f"Proximity graph cannot hold a self-loop at {p_id}")
            if not (0 <= p_id < q_id < self.node_count):
                raise InvalidParameterError(f"Edge {(p_id, q_id)} is not an ascending pair of nodes")

    @property
    def edge_pairs(self) -> List[Tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, p_id: int, q_id: int) -> bool:
        return (min(p_id, q_id), max(p_id, q_id)) in self.edges

    def neighbors(self, p_id: int) -> List[int]:
        result = []
        for a, b in self.edges:
            if a == p_id:
                result.append(b)
            elif b == p_id:
                result.append(a)
        return sorted(result)

    def degree(self, p_id: int) -> int:
        return len(self.neighbors(p_id))

    def isolated_nodes(self) -> List[int]:
        touched = {s for pair in self.edges for s in pair}
        return [s for s in range(self.node_count) if s not in touched]


def build_proximity_graph(diagram: VoronoiDiagram, tol: Optional[float] = None) -> ProximityGraph:
    """
    Proximity graph of a diagram.

    Pairs whose bounding boxes are more than ``tol`` apart are skipped without
    computing their Čech distance.
    """
    tol = diagram.tol if tol is None else tol
    edges: Dict[Tuple[int, int], ProximalRegion] = {}
    cells = diagram.cells

    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if bounds_gap(cells[i], cells[j]) > tol:
                continue
            region = proximal_region(cells[i], cells[j], tol)
            if region.kind is not RegionKind.EMPTY:
                edges[(i, j)] = region

    graph = ProximityGraph(node_count=len(cells), edges=dict(sorted(edges.items())))
    if len(cells) >= 2 and graph.isolated_nodes():
        logger.warning(f"Cells without a proximal neighbour: {graph.isolated_nodes()}")
    logger.debug(f"Proximity graph: {len(cells)} nodes, {len(edges)} edges")
    return graph


def site_closeness_implies_region_closeness(
    y: Point,
    p_id: int,
    diagram: VoronoiDiagram,
    tol: Optional[float] = None
) -> bool:
    """
    Truth of ``{y} δ {p} ⇒ {y} δ V_p`` for this instance.

    Vacuously true when ``y`` is farther than ``tol`` from the site.
    """
    tol = diagram.tol if tol is None else tol
    if y.distance_to(diagram.site(p_id)) > tol:
        return True
    return point_set_distance(y, diagram.cell(p_id)) <= tol


def region_closeness_witness(a: VoronoiCell, b: VoronoiCell, tol: float) -> Optional[Point]:
    """
    A point of ``a`` within ``tol`` of ``b``, or None when the cells are not proximal.

    The witness is the shared vertex, the midpoint of the shared edge, or a
    vertex of ``a`` when both arguments are the same cell.
    """
    if a.site_id == b.site_id:
        return a.polygon.vertices[0]
    region = proximal_region(a, b, tol)
    if region.kind is RegionKind.VERTEX:
        return region.point
    if region.kind is RegionKind.EDGE:
        return region.segment.midpoint
    return None


@dataclass(frozen=True)
class SiteMapping:
    """Total function from source site ids (positions) to destination site ids."""

    images: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))

    @classmethod
    def from_dict(cls, mapping: Dict[int, int], source_count: int) -> "SiteMapping":
        missing = [s for s in range(source_count) if s not in mapping]
        if missing:
            raise InvalidMappingError(f"Mapping is not total; no image for sites {missing}")
        extra = sorted(set(mapping) - set(range(source_count)))
        if extra:
            raise InvalidMappingError(f"Mapping has sources outside 0..{source_count - 1}: {extra}")
        return cls(tuple(mapping[s] for s in range(source_count)))

    @classmethod
    def identity(cls, count: int) -> "SiteMapping":
        return cls(tuple(range(count)))

    @classmethod
    def constant(cls, count: int, target: int) -> "SiteMapping":
        return cls((target,) * count)

    def __call__(self, site_id: int) -> int:
        return self.images[site_id]

    def validate(self, source_count: int, destination_count: int) -> None:
        """
        Raises:
            InvalidMappingError: If not total over the source or an image is out of range
        """
        if len(self.images) != source_count:
            raise InvalidMappingError(
                f"Mapping covers {len(self.images)} sites, source diagram has {source_count}"
            )
        bad = [s for s, image in enumerate(self.images) if not 0 <= image < destination_count]
        if bad:
            raise InvalidMappingError(
                f"Sites {bad} map outside the destination's {destination_count} sites"
            )


@dataclass(frozen=True)
class ContinuityEntry:
    """One source-proximal pair and whether its image pair is proximal."""

    pair: Tuple[int, int]
    image_pair: Tuple[int, int]
    preserved: bool


@dataclass(frozen=True)
class UniformContinuityReport:
    """Every source-proximal pair with its verdict, plus the overall verdict."""

    entries: Tuple[ContinuityEntry, ...]

    @property
    def violations(self) -> List[Tuple[int, int]]:
        return [entry.pair for entry in self.entries if not entry.preserved]

    @property
    def uniformly_continuous(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "uniformly_continuous": self.uniformly_continuous,
            "pairs": [
                {"pair": list(e.pair), "image": list(e.image_pair), "preserved": e.preserved}
                for e in self.entries
            ],
            "violations": [list(pair) for pair in self.violations],
        }


def check_uniform_continuity(
    mapping: SiteMapping,
    source: VoronoiDiagram,
    destination: VoronoiDiagram,
    tol: Optional[float] = None
) -> UniformContinuityReport:
    """
    Check that ``mapping`` sends every proximal pair of ``source`` to a
    proximal pair of ``destination``.

    Pairs mapping onto a single site are preserved since δ is reflexive.

    Raises:
        InvalidMappingError: If the mapping is not total or leaves the destination
    """
    mapping.validate(source.site_count, destination.site_count)
    source_graph = build_proximity_graph(source, tol)
    destination_graph = build_proximity_graph(destination, tol)

    entries = []
    for p_id, q_id in source_graph.edge_pairs:
        image = (mapping(p_id), mapping(q_id))
        preserved = image[0] == image[1] or destination_graph.has_edge(*image)
        entries.append(ContinuityEntry(pair=(p_id, q_id), image_pair=image, preserved=preserved))

    report = UniformContinuityReport(entries=tuple(entries))
    if not report.uniformly_continuous:
        logger.info(f"Mapping breaks proximity for pairs {report.violations}")
    return report
