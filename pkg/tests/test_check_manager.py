"""
Test the oracle check orchestrator and the individual oracles.
"""

import dataclasses
import json

import pytest

from src.checks.check_manager import CheckManager, run_checks
from src.checks.oracles import (
    convexity_violations,
    grid_oracle,
    isolated_cells,
    proximity_inconsistencies,
    trivial_mapping_failures,
    witness_failures,
)
from src.config import Settings
from src.proximity.relation import build_proximity_graph
from src.utils.error_handler import ViolationTracker
from tests.conftest import make_sites


PHASES = [
    'grid_oracle',
    'convexity',
    'diagram_invariants',
    'proximity_consistency',
    'proximity_instances',
    'topology_axioms',
]


@pytest.fixture
def shifted_diagram(two_site_diagram):
    """Two-site diagram whose second site moved without rebuilding the cells."""
    return dataclasses.replace(two_site_diagram, generating_set=make_sites([(0.0, 0.0), (2.5, 0.0)]))


class TestOracles:
    """Test oracles on correct and corrupted diagrams."""

    def test_grid_oracle_agrees(self, equilateral_diagram):
        result = grid_oracle(equilateral_diagram, resolution=60)
        assert result.points == 3600
        assert (result.disagreements, result.uncovered, result.overlaps) == (0, 0, 0)
        assert result.first_disagreement is None

    def test_grid_oracle_finds_shifted_site(self, shifted_diagram):
        result = grid_oracle(shifted_diagram, resolution=40)
        assert result.disagreements > 0
        assert 1.0 <= result.first_disagreement[0] <= 1.25

    def test_clean_instance_checks(self, square_diagram):
        assert convexity_violations(square_diagram) == []
        assert proximity_inconsistencies(square_diagram) == []
        assert witness_failures(square_diagram) == []
        assert trivial_mapping_failures(square_diagram) == []
        assert isolated_cells(build_proximity_graph(square_diagram)) == []


class TestCheckManager:
    """Test phase orchestration and the summary."""

    def test_all_phases_pass(self, equilateral_diagram):
        summary = CheckManager(equilateral_diagram, grid_resolution=50, samples=60).run_all()
        assert summary['success'], summary['errors']
        assert list(summary['phases']) == PHASES
        assert summary['phases']['topology_axioms']['skipped'] is False
        assert summary['violations']['violation_count'] == 0
        json.dumps(summary)

    def test_topology_skipped_above_limit(self, collinear_four_diagram):
        manager = CheckManager(collinear_four_diagram, grid_resolution=40, samples=40, topology_limit=3)
        summary = manager.run_all()
        assert summary['phases']['topology_axioms'] == {'passed': True, 'skipped': True}
        assert summary['violations']['warning_count'] == 1

    def test_corrupted_diagram_fails(self, shifted_diagram):
        summary = CheckManager(shifted_diagram, grid_resolution=40, samples=20).run_all()
        assert not summary['success']
        assert not summary['phases']['grid_oracle']['passed']
        assert not summary['phases']['diagram_invariants']['passed']
        assert summary['violations']['violation_count'] > 0

    def test_phase_exception_recorded(self, two_site_diagram, monkeypatch):
        manager = CheckManager(two_site_diagram, grid_resolution=20, samples=10)

        def explode():
            raise RuntimeError("boom")

        monkeypatch.setattr(manager, 'check_convexity', explode)
        summary = manager.run_all()
        assert not summary['success']
        assert summary['phases']['convexity'] == {'passed': False, 'error': 'boom'}
        assert summary['errors'] == ['convexity: boom']
        assert summary['phases']['proximity_consistency']['passed']

    def test_run_checks_uses_settings(self, two_site_diagram):
        settings = Settings(check_grid_resolution=10, check_samples=4, random_seed=3)
        summary = run_checks(two_site_diagram, settings)
        assert summary['phases']['grid_oracle']['points'] == 100
        assert summary['phases']['proximity_instances']['closeness_samples'] == 4


class TestViolationTracker:
    """Test violation bookkeeping."""

    def test_details_capped_but_counted(self):
        tracker = ViolationTracker(max_details=2)
        for site_id in range(5):
            tracker.add_violation('cell', site_id, "cell is not convex")
        summary = tracker.get_summary()
        assert summary['violation_count'] == 5
        assert [v['id'] for v in summary['violations']] == [0, 1]
        assert tracker.has_violations()

    def test_clear(self):
        tracker = ViolationTracker()
        tracker.add_violation('pair', [0, 1], "proximity predicates disagree")
        tracker.add_warning('topology', None, "skipped")
        tracker.clear()
        assert not tracker.has_violations()
        assert tracker.get_summary()['warning_count'] == 0
