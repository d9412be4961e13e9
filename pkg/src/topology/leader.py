"""
Leader uniform topology over a finite Voronoi diagram.

For every cell the family of cells proximal to it is collected; the collection
of these families, together with the full and the empty family, is closed
under pairwise union and intersection. With finitely many regions the closure
is a finite lattice, reached by a worklist fixed point.

Families are sets of site ids. Two regions are never identified, even when
their polygons are congruent.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from src.proximity.relation import ProximityGraph, are_proximal, build_proximity_graph
from src.voronoi.diagram import VoronoiDiagram
from src.utils.error_handler import InvalidParameterError, TopologySizeError


logger = logging.getLogger(__name__)

# Closure size grows exponentially with the number of regions
DEFAULT_MAX_FAMILIES = 1024


@dataclass(frozen=True)
class RegionFamily:
    """A set of Voronoi regions, named by their site ids."""

    member_ids: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "member_ids", frozenset(int(i) for i in self.member_ids))

    def __contains__(self, site_id: int) -> bool:
        return site_id in self.member_ids

    def __len__(self) -> int:
        return len(self.member_ids)

    def __or__(self, other: "RegionFamily") -> "RegionFamily":
        return RegionFamily(self.member_ids | other.member_ids)

    def __and__(self, other: "RegionFamily") -> "RegionFamily":
        return RegionFamily(self.member_ids & other.member_ids)

    def sorted_ids(self) -> List[int]:
        return sorted(self.member_ids)


def _family_key(family: RegionFamily) -> Tuple[int, List[int]]:
    return (len(family), family.sorted_ids())


@dataclass(frozen=True)
class LeaderTopology:
    """
    Deduplicated collection of region families over a diagram's sites.

    The constructor only checks that ids are valid; closure is the job of
    ``build_leader_topology`` and is verified by ``verify_topology_axioms``.
    """

    families: Tuple[RegionFamily, ...]
    site_count: int
    diagram: Optional[VoronoiDiagram] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        unique = sorted(set(self.families), key=_family_key)
        for family in unique:
            bad = [s for s in family.member_ids if not 0 <= s < self.site_count]
            if bad:
                raise InvalidParameterError(
                    f"Family {family.sorted_ids()} references ids {bad} outside {self.site_count} sites"
                )
        object.__setattr__(self, "families", tuple(unique))

    @property
    def full_family(self) -> RegionFamily:
        return RegionFamily(frozenset(range(self.site_count)))

    @property
    def empty_family(self) -> RegionFamily:
        return RegionFamily(frozenset())

    def __contains__(self, family: RegionFamily) -> bool:
        return family in set(self.families)

    def __len__(self) -> int:
        return len(self.families)

    def as_lists(self) -> List[List[int]]:
        return [family.sorted_ids() for family in self.families]


def neighbor_family(
    diagram: VoronoiDiagram,
    p_id: int,
    tol: Optional[float] = None,
    graph: Optional[ProximityGraph] = None
) -> RegionFamily:
    """
    All regions proximal to V_p, V_p itself included (δ is reflexive).

    A prebuilt proximity graph of the same diagram and tolerance may be passed
    to avoid recomputing distances.
    """
    if not 0 <= p_id < diagram.site_count:
        raise InvalidParameterError(f"Site id {p_id} out of range for {diagram.site_count} sites")
    tol = diagram.tol if tol is None else tol

    if graph is not None:
        return RegionFamily(frozenset([p_id, *graph.neighbors(p_id)]))

    cell_p = diagram.cell(p_id)
    members = {p_id}
    for cell in diagram.cells:
        if cell.site_id != p_id and are_proximal(cell, cell_p, tol):
            members.add(cell.site_id)
    return RegionFamily(frozenset(members))


def close_families(
    families: Iterable[RegionFamily],
    max_families: Optional[int] = None
) -> Set[RegionFamily]:
    """
    Smallest superset closed under pairwise union and intersection.

    Worklist iteration: every newly found family is combined with every
    known family until no new family appears.

    Raises:
        TopologySizeError: more than ``max_families`` families are found
    """
    known: Set[RegionFamily] = set(families)
    if max_families is not None and len(known) > max_families:
        raise TopologySizeError(len(known), max_families)
    worklist: List[RegionFamily] = sorted(known, key=_family_key)

    while worklist:
        current = worklist.pop()
        for other in list(known):
            for combined in (current | other, current & other):
                if combined not in known:
                    known.add(combined)
                    if max_families is not None and len(known) > max_families:
                        raise TopologySizeError(len(known), max_families)
                    worklist.append(combined)
    return known


def build_leader_topology(
    diagram: VoronoiDiagram,
    tol: Optional[float] = None,
    max_families: Optional[int] = DEFAULT_MAX_FAMILIES
) -> LeaderTopology:
    """
    Leader uniform topology of a diagram.

    Base families are the neighbour families of every region plus the full
    and empty families; the result is their union/intersection closure.
    Pass ``max_families=None`` to lift the size limit.

    Raises:
        TopologySizeError: the closure exceeds ``max_families``
    """
    tol = diagram.tol if tol is None else tol
    graph = build_proximity_graph(diagram, tol)

    base = {neighbor_family(diagram, p_id, tol, graph) for p_id in range(diagram.site_count)}
    base.add(RegionFamily(frozenset(range(diagram.site_count))))
    base.add(RegionFamily(frozenset()))

    closed = close_families(base, max_families)
    logger.info(f"Leader topology: {len(base)} base families closed to {len(closed)}")
    return LeaderTopology(families=tuple(closed), site_count=diagram.site_count, diagram=diagram)


@dataclass(frozen=True)
class TopologyAxiomReport:
    """Outcome of checking closure and the presence of the full and empty families."""

    has_full: bool
    has_empty: bool
    missing_unions: Tuple[Tuple[List[int], List[int]], ...]
    missing_intersections: Tuple[Tuple[List[int], List[int]], ...]
    pairs_checked: int

    @property
    def verdict(self) -> bool:
        return self.has_full and self.has_empty and not self.missing_unions and not self.missing_intersections

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "has_full": self.has_full,
            "has_empty": self.has_empty,
            "pairs_checked": self.pairs_checked,
            "missing_unions": [list(map(list, pair)) for pair in self.missing_unions],
            "missing_intersections": [list(map(list, pair)) for pair in self.missing_intersections],
        }


def verify_topology_axioms(topology: LeaderTopology) -> TopologyAxiomReport:
    """
    Check every pair of families for union and intersection membership, and
    the presence of the full and the empty family.
    """
    members = set(topology.families)
    missing_unions = []
    missing_intersections = []
    pairs_checked = 0

    for first, second in combinations(topology.families, 2):
        pairs_checked += 1
        if (first | second) not in members:
            missing_unions.append((first.sorted_ids(), second.sorted_ids()))
        if (first & second) not in members:
            missing_intersections.append((first.sorted_ids(), second.sorted_ids()))

    report = TopologyAxiomReport(
        has_full=topology.full_family in members,
        has_empty=topology.empty_family in members,
        missing_unions=tuple(missing_unions),
        missing_intersections=tuple(missing_intersections),
        pairs_checked=pairs_checked,
    )
    if not report.verdict:
        logger.warning(
            f"Topology axioms fail: full={report.has_full}, empty={report.has_empty}, "
            f"{len(missing_unions)} missing unions, {len(missing_intersections)} missing intersections"
        )
    return report
