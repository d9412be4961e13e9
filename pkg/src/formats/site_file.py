"""
Sites file: ``{"sites": [[x, y], ...], "bbox": [x0, y0, x1, y1], "tolerance": t}``.

``bbox`` and ``tolerance`` are optional. A parsed model always has both
filled in: the default box is the tight site bounds grown by 20% of their
diagonal on every side, the default tolerance is 1e-9 of the box diagonal.
"""

import json
import logging
import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from src.formats import json_text
from src.geometry.primitives import DEFAULT_TOLERANCE, Point
from src.voronoi.builder import resolve_tolerance, validate_sites_in_bbox
from src.voronoi.diagram import BoundingBox, GeneratingSet
from src.utils.error_handler import EmptySitesError, SiteFileParseError


logger = logging.getLogger(__name__)


DEFAULT_BBOX_MARGIN = 0.2


class SiteFileModel(BaseModel):
    """Validated content of a sites document."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    sites: List[Tuple[float, float]]
    bbox: Optional[Tuple[float, float, float, float]] = None
    tolerance: Optional[float] = None

    @field_validator("sites")
    @classmethod
    def validate_sites(cls, v: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        for index, (x, y) in enumerate(v):
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError(f"site {index} has a non-finite coordinate")
        return v

    @field_validator("bbox")
    @classmethod
    def validate_bbox(cls, v: Optional[Tuple[float, ...]]) -> Optional[Tuple[float, ...]]:
        if v is None:
            return v
        if not all(math.isfinite(c) for c in v):
            raise ValueError("bbox coordinates must be finite")
        if not (v[2] > v[0] and v[3] > v[1]):
            raise ValueError(f"bbox needs max > min on both axes, got {list(v)}")
        return v

    @field_validator("tolerance")
    @classmethod
    def validate_tolerance(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not (math.isfinite(v) and v > 0):
            raise ValueError(f"tolerance must be a positive number, got {v}")
        return v

    def points(self) -> Tuple[Point, ...]:
        return tuple(Point(x, y) for x, y in self.sites)

    def bounding_box(self) -> BoundingBox:
        if self.bbox is None:
            return BoundingBox.from_sites(self.points(), DEFAULT_BBOX_MARGIN)
        return BoundingBox(*self.bbox)

    def absolute_tolerance(self) -> float:
        relative = DEFAULT_TOLERANCE if self.tolerance is None else self.tolerance
        return resolve_tolerance(self.bounding_box(), relative)

    def generating_set(self) -> GeneratingSet:
        return GeneratingSet(self.points(), tol=self.absolute_tolerance())


def parse_sites(
    document: str,
    margin: float = DEFAULT_BBOX_MARGIN,
    default_tolerance: float = DEFAULT_TOLERANCE,
    bbox: Optional[BoundingBox] = None
) -> SiteFileModel:
    """
    Parse and validate a sites document.

    Args:
        document: JSON text
        margin: Default bounding box slack, as a fraction of the site diagonal
        default_tolerance: Relative tolerance used when the document has none
        bbox: Bounding box replacing the document's own, checked instead of it

    Returns:
        SiteFileModel with ``bbox`` and ``tolerance`` filled in

    Raises:
        SiteFileParseError: Malformed JSON (with line and column) or wrong shape
        EmptySitesError: If the sites list is empty
        DuplicateSiteError: If two sites coincide within the tolerance
        SiteOutsideBoundingBoxError: If a site is not strictly inside the bbox
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as e:
        raise SiteFileParseError(e.msg, e.lineno, e.colno) from e

    try:
        model = SiteFileModel.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise SiteFileParseError(f"{location}: {first['msg']}") from e

    if not model.sites:
        raise EmptySitesError("Sites file contains no sites")

    points = model.points()
    if bbox is None:
        bbox = BoundingBox(*model.bbox) if model.bbox is not None else BoundingBox.from_sites(points, margin)
    tolerance = default_tolerance if model.tolerance is None else model.tolerance
    filled = model.model_copy(update={"bbox": bbox.as_tuple(), "tolerance": tolerance})

    sites = filled.generating_set()
    validate_sites_in_bbox(sites, bbox)

    logger.debug(f"Parsed {len(sites)} sites, bbox {bbox}, tolerance {tolerance:g}")
    return filled


def serialize_sites(model: SiteFileModel) -> str:
    """Sites document for ``model``; ``parse_sites`` reads it back to an equal model."""
    document = {"sites": [[x, y] for x, y in model.sites]}
    if model.bbox is not None:
        document["bbox"] = list(model.bbox)
    if model.tolerance is not None:
        document["tolerance"] = model.tolerance
    return json_text.dumps(document)


def model_from_sites(
    sites: GeneratingSet,
    bbox: BoundingBox,
    tolerance: float = DEFAULT_TOLERANCE
) -> SiteFileModel:
    """Sites model for an in-memory generating set, e.g. Lloyd output."""
    return SiteFileModel(
        sites=[p.as_tuple() for p in sites.sites],
        bbox=bbox.as_tuple(),
        tolerance=tolerance,
    )
