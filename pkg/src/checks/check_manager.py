"""
Oracle check orchestrator.
Runs every brute-force check against one diagram and collects the results.
"""

import logging
from datetime import datetime
from typing import Any, Callable, Dict, Optional

from src.checks.oracles import (
    convexity_violations,
    grid_oracle,
    isolated_cells,
    proximity_inconsistencies,
    site_closeness_failures,
    trivial_mapping_failures,
    witness_failures,
)
from src.proximity.relation import build_proximity_graph
from src.topology.leader import build_leader_topology, verify_topology_axioms
from src.voronoi.builder import check_diagram_invariants
from src.voronoi.diagram import VoronoiDiagram
from src.utils.error_handler import ViolationTracker


logger = logging.getLogger(__name__)


# Closure of the Leader topology grows quickly with the number of regions
TOPOLOGY_SITE_LIMIT = 8


class CheckManager:
    """
    Oracle check orchestrator.

    CHECK ORDER:
    1. Grid oracle (nearest-site equivalence, covering, interior disjointness)
    2. Convexity of every cell
    3. Diagram invariants (edge bisector residual, vertex equidistance)
    4. Proximity consistency (δ, Čech distance and proximal region agree)
    5. Proximity instance checks (no isolated cell, site closeness,
       witnesses, identity and constant mappings)
    6. Leader topology axioms (small diagrams only)
    """

    def __init__(
        self,
        diagram: VoronoiDiagram,
        grid_resolution: int = 200,
        samples: int = 1000,
        seed: int = 0,
        topology_limit: int = TOPOLOGY_SITE_LIMIT
    ):
        """
        Initialize check manager.

        Args:
            diagram: Diagram under test
            grid_resolution: Grid points per axis for the oracle sweep
            samples: Total points sampled around sites for the closeness check
            seed: Seed for sampled checks
            topology_limit: Largest site count for the topology check
        """
        self.diagram = diagram
        self.grid_resolution = grid_resolution
        self.samples = samples
        self.seed = seed
        self.topology_limit = topology_limit
        self.tracker = ViolationTracker()

    def _run_phase(self, summary: Dict[str, Any], number: int, name: str, check: Callable[[], Dict[str, Any]]) -> None:
        logger.info("=" * 60)
        logger.info(f"PHASE {number}: {name.upper().replace('_', ' ')}")
        logger.info("=" * 60)
        try:
            result = check()
        except Exception as e:
            logger.error(f"Check {name} failed: {e}", exc_info=True)
            summary['success'] = False
            summary['errors'].append(f"{name}: {str(e)}")
            summary['phases'][name] = {'passed': False, 'error': str(e)}
            return

        summary['phases'][name] = result
        if not result['passed']:
            summary['success'] = False
        logger.info(f"{name}: {'passed' if result['passed'] else 'FAILED'}")

    def check_grid_oracle(self) -> Dict[str, Any]:
        result = grid_oracle(self.diagram, self.grid_resolution)
        if result.disagreements:
            self.tracker.add_violation(
                'grid', result.first_disagreement,
                f"{result.disagreements} grid points outside their nearest site's cell"
            )
        if result.uncovered:
            self.tracker.add_violation('grid', None, f"{result.uncovered} grid points in no cell")
        if result.overlaps:
            self.tracker.add_violation('grid', None, f"{result.overlaps} decisive grid points in two cells")
        passed = not (result.disagreements or result.uncovered or result.overlaps)
        return {'passed': passed, **result.to_dict()}

    def check_convexity(self) -> Dict[str, Any]:
        bad = convexity_violations(self.diagram)
        for site_id in bad:
            self.tracker.add_violation('cell', site_id, "cell is not convex")
        return {'passed': not bad, 'cells': self.diagram.site_count, 'failures': bad}

    def check_invariants(self) -> Dict[str, Any]:
        problems = check_diagram_invariants(self.diagram)
        for problem in problems:
            self.tracker.add_violation('diagram', None, problem)
        return {
            'passed': not problems,
            'edges': len(self.diagram.edges),
            'vertices': len(self.diagram.vertices),
            'failures': problems,
        }

    def check_proximity_consistency(self) -> Dict[str, Any]:
        bad = proximity_inconsistencies(self.diagram)
        for pair in bad:
            self.tracker.add_violation('pair', list(pair), "proximity predicates disagree")
        n = self.diagram.site_count
        return {'passed': not bad, 'pairs': n * (n - 1) // 2, 'failures': [list(p) for p in bad]}

    def check_proximity_instances(self) -> Dict[str, Any]:
        graph = build_proximity_graph(self.diagram)
        per_site = max(1, self.samples // max(1, self.diagram.site_count))

        isolated = isolated_cells(graph)
        closeness = site_closeness_failures(self.diagram, per_site, self.seed)
        witnesses = witness_failures(self.diagram)
        mappings = trivial_mapping_failures(self.diagram)

        for site_id in isolated:
            self.tracker.add_violation('cell', site_id, "cell has no proximal neighbour")
        for site_id, point in closeness[:10]:
            self.tracker.add_violation('site', site_id, f"point {point} near the site is far from its cell")
        for pair in witnesses:
            self.tracker.add_violation('pair', list(pair), "witness does not match proximity")
        for name in mappings:
            self.tracker.add_violation('mapping', name, "mapping reported as not uniformly continuous")

        return {
            'passed': not (isolated or closeness or witnesses or mappings),
            'isolated_cells': isolated,
            'closeness_samples': per_site * self.diagram.site_count,
            'closeness_failures': len(closeness),
            'witness_failures': [list(p) for p in witnesses],
            'mapping_failures': mappings,
        }

    def check_topology(self) -> Dict[str, Any]:
        if self.diagram.site_count > self.topology_limit:
            self.tracker.add_warning(
                'topology', None,
                f"skipped: {self.diagram.site_count} sites exceed the limit of {self.topology_limit}"
            )
            return {'passed': True, 'skipped': True}

        report = verify_topology_axioms(build_leader_topology(self.diagram))
        if not report.verdict:
            self.tracker.add_violation('topology', None, "family collection is not closed")
        return {'passed': report.verdict, 'skipped': False, **report.to_dict()}

    def run_all(self) -> Dict[str, Any]:
        """
        Run every check.

        Returns:
            Summary with per-phase results, the overall verdict and the
            violation tracker contents
        """
        start_time = datetime.now()

        logger.info("=" * 80)
        logger.info(f"STARTING ORACLE CHECKS ({self.diagram.site_count} sites)")
        logger.info("=" * 80)

        summary: Dict[str, Any] = {
            'sites': self.diagram.site_count,
            'tolerance': self.diagram.tol,
            'phases': {},
            'success': True,
            'errors': [],
        }

        phases = (
            ('grid_oracle', self.check_grid_oracle),
            ('convexity', self.check_convexity),
            ('diagram_invariants', self.check_invariants),
            ('proximity_consistency', self.check_proximity_consistency),
            ('proximity_instances', self.check_proximity_instances),
            ('topology_axioms', self.check_topology),
        )
        for number, (name, check) in enumerate(phases, start=1):
            self._run_phase(summary, number, name, check)

        duration = (datetime.now() - start_time).total_seconds()
        summary['duration_seconds'] = duration
        summary['violations'] = self.tracker.get_summary()

        logger.info("=" * 80)
        logger.info("ORACLE CHECKS COMPLETE")
        logger.info(f"Duration: {duration:.2f} seconds")
        logger.info(f"Success: {summary['success']}")
        logger.info("=" * 80)

        return summary


def run_checks(diagram: VoronoiDiagram, settings: Optional[Any] = None, seed: Optional[int] = None) -> Dict[str, Any]:
    """Run all checks with grid size and sampling taken from ``settings``."""
    if settings is None:
        return CheckManager(diagram, seed=seed or 0).run_all()
    return CheckManager(
        diagram,
        grid_resolution=settings.check_grid_resolution,
        samples=settings.check_samples,
        seed=settings.random_seed if seed is None else seed,
    ).run_all()
