"""
Diagram file: a built diagram with its proximity graph and, optionally, its
Leader topology, as one JSON document.

Records are ordered by site id; edge and proximity records by ascending site
pair; vertices by (x, y). Two runs on the same input serialize to identical
bytes.
"""

import logging
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from src.formats import json_text
from src.geometry.polygon import ConvexPolygon
from src.geometry.primitives import Point, Segment
from src.proximity.relation import ProximityGraph, RegionKind, build_proximity_graph
from src.topology.leader import LeaderTopology
from src.voronoi.builder import check_diagram_invariants
from src.voronoi.diagram import (
    BoundingBox,
    GeneratingSet,
    VoronoiCell,
    VoronoiDiagram,
    VoronoiEdge,
    VoronoiVertex,
)
from src.utils.error_handler import DiagramFileError, VoronoiError


logger = logging.getLogger(__name__)


Coordinate = Tuple[float, float]


class CellRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    site_id: int
    vertices: List[Coordinate]
    touches_boundary: bool


class EdgeRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sites: Tuple[int, int]
    endpoints: Tuple[Coordinate, Coordinate]


class VertexRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    point: Coordinate
    sites: List[int]


class ProximityRecord(BaseModel):
    """A proximal pair with its region kind and the region's extreme points."""

    model_config = ConfigDict(extra="forbid")

    sites: Tuple[int, int]
    kind: RegionKind
    points: List[Coordinate]


class DiagramFileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sites: List[Coordinate]
    bbox: Tuple[float, float, float, float]
    tolerance: float
    cells: List[CellRecord]
    edges: List[EdgeRecord]
    vertices: List[VertexRecord]
    proximity: List[ProximityRecord]
    topology: Optional[List[List[int]]] = None

    @model_validator(mode="after")
    def check_references(self) -> "DiagramFileModel":
        count = len(self.sites)

        def check_ids(ids, owner: str) -> None:
            bad = [i for i in ids if not 0 <= i < count]
            if bad:
                raise ValueError(f"{owner} references unknown site ids {bad}")

        if [cell.site_id for cell in self.cells] != list(range(count)):
            raise ValueError(f"cells must list site ids 0..{count - 1} in order")
        for edge in self.edges:
            check_ids(edge.sites, f"edge {list(edge.sites)}")
            if edge.sites[0] >= edge.sites[1]:
                raise ValueError(f"edge {list(edge.sites)} is not an ascending pair")
        for vertex in self.vertices:
            check_ids(vertex.sites, f"vertex {list(vertex.point)}")
        for record in self.proximity:
            check_ids(record.sites, f"proximity pair {list(record.sites)}")
            if record.sites[0] >= record.sites[1]:
                raise ValueError(f"proximity pair {list(record.sites)} is not ascending")
        for family in self.topology or []:
            check_ids(family, f"topology family {family}")
        return self


def diagram_to_model(
    diagram: VoronoiDiagram,
    graph: Optional[ProximityGraph] = None,
    topology: Optional[LeaderTopology] = None
) -> DiagramFileModel:
    """File model of a diagram; the proximity graph is built when not given."""
    graph = build_proximity_graph(diagram) if graph is None else graph

    return DiagramFileModel(
        sites=[p.as_tuple() for p in diagram.generating_set.sites],
        bbox=diagram.bbox.as_tuple(),
        tolerance=diagram.tol,
        cells=[
            CellRecord(
                site_id=cell.site_id,
                vertices=[v.as_tuple() for v in cell.polygon.vertices],
                touches_boundary=cell.touches_boundary,
            )
            for cell in diagram.cells
        ],
        edges=[
            EdgeRecord(
                sites=edge.site_pair,
                endpoints=(edge.segment.endpoint_a.as_tuple(), edge.segment.endpoint_b.as_tuple()),
            )
            for edge in sorted(diagram.edges, key=lambda e: e.site_pair)
        ],
        vertices=[
            VertexRecord(point=vertex.point.as_tuple(), sites=list(vertex.site_ids))
            for vertex in diagram.vertices
        ],
        proximity=[
            ProximityRecord(
                sites=pair,
                kind=graph.edges[pair].kind,
                points=[p.as_tuple() for p in graph.edges[pair].points],
            )
            for pair in graph.edge_pairs
        ],
        topology=topology.as_lists() if topology is not None else None,
    )


def serialize_diagram(model: DiagramFileModel) -> str:
    """Deterministic JSON text for a diagram model."""
    return json_text.dumps(model.model_dump(mode="json", exclude_none=True))


def parse_diagram(document: str) -> DiagramFileModel:
    """
    Raises:
        DiagramFileError: Malformed JSON or a record that fails validation
    """
    try:
        return DiagramFileModel.model_validate_json(document)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise DiagramFileError(f"Diagram file error: {location}: {first['msg']}") from e


def model_to_diagram(model: DiagramFileModel) -> VoronoiDiagram:
    """
    Rebuild a diagram from its file model and check its invariants.

    Raises:
        DiagramFileError: If the records do not form a valid diagram
    """
    try:
        tol = model.tolerance
        sites = GeneratingSet(tuple(Point(x, y) for x, y in model.sites), tol=tol)
        cells = tuple(
            VoronoiCell(
                site_id=record.site_id,
                polygon=ConvexPolygon(tuple(Point(x, y) for x, y in record.vertices), tol=tol),
                touches_boundary=record.touches_boundary,
            )
            for record in model.cells
        )
        edges = tuple(
            VoronoiEdge(
                site_pair=record.sites,
                segment=Segment(Point(*record.endpoints[0]), Point(*record.endpoints[1])),
            )
            for record in model.edges
        )
        vertices = tuple(
            VoronoiVertex(point=Point(*record.point), site_ids=tuple(sorted(record.sites)))
            for record in model.vertices
        )
        diagram = VoronoiDiagram(
            generating_set=sites,
            bbox=BoundingBox(*model.bbox),
            cells=cells,
            edges=edges,
            vertices=vertices,
            tol=tol,
        )
    except VoronoiError as e:
        raise DiagramFileError(f"Diagram file does not describe a diagram: {e}") from e

    problems = check_diagram_invariants(diagram)
    if problems:
        raise DiagramFileError(f"Diagram invariants violated: {'; '.join(problems[:5])}")

    logger.debug(f"Reconstructed diagram with {diagram.site_count} cells from file")
    return diagram
