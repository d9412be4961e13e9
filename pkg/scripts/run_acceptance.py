#!/usr/bin/env python3
"""
Randomized acceptance suite.

Builds seeded random diagrams in the unit square and runs the brute-force
oracles on each, then runs uniform-density Lloyd iteration on a second
seeded suite.

Usage:
    # Full suite (100 diagrams, 10 Lloyd runs)
    python scripts/run_acceptance.py

    # Smaller, faster run
    python scripts/run_acceptance.py --diagrams 20 --lloyd-runs 3

    # Different seed, report written to a file
    python scripts/run_acceptance.py --seed 7 --output logs/acceptance.json
"""

import sys
import os
import json
import argparse
import time
from typing import Any, Dict, List

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.centroidal.lloyd import energy_is_non_increasing, lloyd_iterate
from src.checks.oracles import (
    convexity_violations,
    grid_oracle,
    isolated_cells,
    proximity_inconsistencies,
    site_closeness_failures,
    trivial_mapping_failures,
    witness_failures,
)
from src.config import get_settings
from src.geometry.primitives import Point
from src.proximity.relation import build_proximity_graph
from src.topology.leader import build_leader_topology, verify_topology_axioms
from src.voronoi.builder import build_diagram
from src.voronoi.diagram import BoundingBox, GeneratingSet
from src.utils.error_handler import DuplicateSiteError
from src.utils.logger import get_logger, setup_logging


logger = get_logger(__name__)

UNIT_BOX = BoundingBox(0.0, 0.0, 1.0, 1.0)

# Grid points closer than this to a bisector are not decisive
ORACLE_MARGIN = 1e-8
CONVEXITY_TOL = 1e-9
TOPOLOGY_SITE_LIMIT = 8


def random_sites(rng: np.random.Generator, n: int) -> GeneratingSet:
    """``n`` distinct uniform sites strictly inside the unit square."""
    while True:
        coords = rng.uniform(0.001, 0.999, size=(n, 2))
        try:
            return GeneratingSet(tuple(Point(float(x), float(y)) for x, y in coords))
        except DuplicateSiteError:
            continue


def run_diagram_suite(rng: np.random.Generator, count: int, resolution: int, samples: int) -> Dict[str, Any]:
    totals = {
        'diagrams': count,
        'disagreements': 0,
        'uncovered': 0,
        'overlaps': 0,
        'convexity_failures': 0,
        'proximity_inconsistencies': 0,
        'isolated_cells': 0,
        'closeness_failures': 0,
        'witness_failures': 0,
        'mapping_failures': 0,
        'topology_checked': 0,
        'topology_failures': 0,
    }

    for index in range(count):
        n = int(rng.integers(3, 51))
        diagram = build_diagram(random_sites(rng, n), UNIT_BOX)

        grid = grid_oracle(diagram, resolution, margin=ORACLE_MARGIN)
        totals['disagreements'] += grid.disagreements
        totals['uncovered'] += grid.uncovered
        totals['overlaps'] += grid.overlaps
        totals['convexity_failures'] += len(convexity_violations(diagram, CONVEXITY_TOL))
        totals['proximity_inconsistencies'] += len(proximity_inconsistencies(diagram))
        totals['isolated_cells'] += len(isolated_cells(build_proximity_graph(diagram)))
        totals['closeness_failures'] += len(site_closeness_failures(diagram, max(1, samples // n), index))
        totals['witness_failures'] += len(witness_failures(diagram))
        totals['mapping_failures'] += len(trivial_mapping_failures(diagram))

        if n <= TOPOLOGY_SITE_LIMIT:
            totals['topology_checked'] += 1
            if not verify_topology_axioms(build_leader_topology(diagram)).verdict:
                totals['topology_failures'] += 1

        if grid.disagreements:
            logger.warning(f"Diagram {index} ({n} sites): {grid.disagreements} grid disagreements")

    # Small diagrams are rare in 3..50; top up the topology suite
    for _ in range(10):
        n = int(rng.integers(2, TOPOLOGY_SITE_LIMIT + 1))
        diagram = build_diagram(random_sites(rng, n), UNIT_BOX)
        totals['topology_checked'] += 1
        if not verify_topology_axioms(build_leader_topology(diagram)).verdict:
            totals['topology_failures'] += 1

    failures = sum(v for k, v in totals.items() if k not in ('diagrams', 'topology_checked'))
    totals['passed'] = failures == 0
    return totals


def run_lloyd_suite(
    rng: np.random.Generator,
    runs: int,
    sites_per_run: int,
    max_iters: int,
    movement_tol: float
) -> Dict[str, Any]:
    results: List[Dict[str, Any]] = []
    for run in range(runs):
        _, history = lloyd_iterate(random_sites(rng, sites_per_run), UNIT_BOX, None, max_iters, movement_tol)
        results.append({
            'run': run,
            'iterations': len(history),
            'converged': history[-1].movement <= movement_tol,
            'energy_non_increasing': energy_is_non_increasing(history, slack=1e-9),
            'final_energy': history[-1].energy,
        })

    passed = all(r['converged'] and r['energy_non_increasing'] for r in results)
    return {'runs': results, 'passed': passed}


def main():
    settings = get_settings()

    parser = argparse.ArgumentParser(
        description='Randomized oracle and Lloyd acceptance suite',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Full suite
    python scripts/run_acceptance.py

    # Quick smoke run
    python scripts/run_acceptance.py --diagrams 10 --lloyd-runs 2
        """
    )
    parser.add_argument(
        '--diagrams', type=int, default=100,
        help='Number of random diagrams for the oracle suite (default: 100)'
    )
    parser.add_argument(
        '--resolution', type=int, default=settings.check_grid_resolution,
        help='Grid points per axis for the nearest-site oracle'
    )
    parser.add_argument(
        '--lloyd-runs', type=int, default=10,
        help='Number of random 10-site Lloyd runs (default: 10)'
    )
    parser.add_argument(
        '--seed', type=int, default=settings.random_seed,
        help='Seed for both suites'
    )
    parser.add_argument(
        '--output', '-o', type=str, default=None,
        help='Write the JSON report here'
    )
    args = parser.parse_args()

    setup_logging(settings.log_level)
    rng = np.random.default_rng(args.seed)

    print("=" * 60)
    print("ACCEPTANCE SUITE")
    print("=" * 60)

    start = time.perf_counter()
    diagrams = run_diagram_suite(rng, args.diagrams, args.resolution, settings.check_samples)
    diagram_seconds = time.perf_counter() - start
    print(f"Oracle suite: {'PASSED' if diagrams['passed'] else 'FAILED'} ({diagram_seconds:.1f}s)")

    start = time.perf_counter()
    lloyd = run_lloyd_suite(rng, args.lloyd_runs, 10, settings.lloyd_max_iters, settings.lloyd_movement_tol)
    lloyd_seconds = time.perf_counter() - start
    print(f"Lloyd suite:  {'PASSED' if lloyd['passed'] else 'FAILED'} ({lloyd_seconds:.1f}s)")

    report = {
        'seed': args.seed,
        'oracle_suite': {**diagrams, 'seconds': diagram_seconds},
        'lloyd_suite': {**lloyd, 'seconds': lloyd_seconds},
        'passed': diagrams['passed'] and lloyd['passed'],
    }

    if args.output:
        os.makedirs(os.path.dirname(args.output) or '.', exist_ok=True)
        with open(args.output, 'w') as f:
            json.dump(report, f, indent=2)
        print(f"Report written to {args.output}")
    else:
        print(json.dumps(report, indent=2))

    return 0 if report['passed'] else 1


if __name__ == "__main__":
    sys.exit(main())
