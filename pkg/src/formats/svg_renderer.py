"""
SVG rendering of diagrams.

The document's viewBox is the bounding box in world units; one group flips
the y-axis so +y points up. Cells, edges, vertices, the perpendiculars from
each site to its cell's sides, and the proximity graph are drawn as separate
groups, with sites on top.
"""

import logging
import xml.etree.ElementTree as ET
from typing import Optional

from pydantic import BaseModel, Field

from src.proximity.relation import ProximityGraph
from src.voronoi.builder import cell_normals
from src.voronoi.diagram import VoronoiDiagram


logger = logging.getLogger(__name__)


SVG_NAMESPACE = "http://www.w3.org/2000/svg"

CELL_FILLS = ("#f4e3c1", "#c9e4de", "#dbcdf0", "#f7d9c4", "#c6def1", "#faedcb", "#f2c6de")


class SvgOptions(BaseModel):
    """What to draw on top of the cells and sites."""

    edges: bool = True
    vertices: bool = False
    normals: bool = False
    proximity: bool = False
    width: int = Field(default=800, ge=16)


def _num(value: float) -> str:
    return format(value, ".10g")


def _line(parent: ET.Element, a, b, css_class: str) -> None:
    ET.SubElement(parent, "line", {
        "class": css_class,
        "x1": _num(a.x), "y1": _num(a.y),
        "x2": _num(b.x), "y2": _num(b.y),
    })


def _dot(parent: ET.Element, point, radius: float, css_class: str) -> None:
    ET.SubElement(parent, "circle", {
        "class": css_class,
        "cx": _num(point.x), "cy": _num(point.y),
        "r": _num(radius),
    })


def render_svg(
    diagram: VoronoiDiagram,
    options: Optional[SvgOptions] = None,
    graph: Optional[ProximityGraph] = None
) -> str:
    """
    SVG 1.1 document for a diagram.

    Args:
        diagram: Diagram to draw
        options: Overlays and pixel width; defaults draw edges only
        graph: Proximity graph for the proximity overlay

    Returns:
        Well-formed SVG text
    """
    options = options or SvgOptions()
    bbox = diagram.bbox
    height = max(1, round(options.width * bbox.height / bbox.width))
    marker = bbox.diagonal * 0.006

    root = ET.Element("svg", {
        "xmlns": SVG_NAMESPACE,
        "version": "1.1",
        "width": str(options.width),
        "height": str(height),
        "viewBox": " ".join(_num(v) for v in (bbox.min_x, bbox.min_y, bbox.width, bbox.height)),
    })
    ET.SubElement(root, "style").text = (
        "polygon.cell{stroke:#555;stroke-width:1;vector-effect:non-scaling-stroke}"
        "line{stroke-width:1.5;vector-effect:non-scaling-stroke}"
        "line.edge{stroke:#1f4e79}line.normal{stroke:#999;stroke-dasharray:4 3}"
        "line.proximity{stroke:#c0392b}circle.site{fill:#111}circle.vertex{fill:#c0392b}"
    )
    world = ET.SubElement(root, "g", {
        "transform": f"matrix(1 0 0 -1 0 {_num(bbox.min_y + bbox.max_y)})",
    })

    cells = ET.SubElement(world, "g", {"class": "cells"})
    for cell in diagram.cells:
        ET.SubElement(cells, "polygon", {
            "class": "cell",
            "data-site": str(cell.site_id),
            "fill": CELL_FILLS[cell.site_id % len(CELL_FILLS)],
            "points": " ".join(f"{_num(v.x)},{_num(v.y)}" for v in cell.polygon.vertices),
        })

    if options.normals:
        normals = ET.SubElement(world, "g", {"class": "normals"})
        for cell in diagram.cells:
            site = diagram.site(cell.site_id)
            for foot in cell_normals(cell, site):
                if foot.distance_to(site) > diagram.tol:
                    _line(normals, site, foot, "normal")

    if options.edges:
        edges = ET.SubElement(world, "g", {"class": "edges"})
        for edge in diagram.edges:
            _line(edges, edge.segment.endpoint_a, edge.segment.endpoint_b, "edge")

    if options.proximity and graph is not None:
        proximity = ET.SubElement(world, "g", {"class": "proximity"})
        for p_id, q_id in graph.edge_pairs:
            _line(proximity, diagram.site(p_id), diagram.site(q_id), "proximity")

    if options.vertices:
        vertices = ET.SubElement(world, "g", {"class": "vertices"})
        for vertex in diagram.vertices:
            _dot(vertices, vertex.point, marker * 0.8, "vertex")

    sites = ET.SubElement(world, "g", {"class": "sites"})
    for site in diagram.generating_set.sites:
        _dot(sites, site, marker, "site")

    logger.debug(f"Rendered {diagram.site_count} cells to SVG ({options.width}x{height})")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"
