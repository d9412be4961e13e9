"""
Test diagrams against brute-force nearest-site oracles on random inputs.
"""

import numpy as np
import pytest

from src.checks.oracles import convexity_violations, grid_oracle, proximity_inconsistencies
from src.voronoi.builder import build_diagram
from src.voronoi.diagram import BoundingBox
from tests.conftest import random_generating_set


UNIT_BOX = BoundingBox(0.0, 0.0, 1.0, 1.0)


def random_diagrams(count: int, seed: int, low: int = 3, high: int = 50):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(low, high + 1))
        yield build_diagram(random_generating_set(rng, n), UNIT_BOX)


class TestGridOracle:
    """Cell membership agrees with nearest site on a grid."""

    def test_small_fixture(self, equilateral_diagram):
        result = grid_oracle(equilateral_diagram, resolution=60)
        assert result.points == 3600
        assert result.disagreements == 0
        assert result.uncovered == 0
        assert result.overlaps == 0

    @pytest.mark.slow
    def test_random_sets(self):
        for diagram in random_diagrams(count=20, seed=2024):
            result = grid_oracle(diagram, resolution=100, margin=1e-8)
            assert result.disagreements == 0, result.first_disagreement
            assert result.uncovered == 0
            assert result.overlaps == 0
            assert result.decisive_points > 0.99 * result.points

    @pytest.mark.slow
    def test_acceptance_scale(self):
        for diagram in random_diagrams(count=100, seed=7):
            result = grid_oracle(diagram, resolution=200, margin=1e-8)
            assert result.points == 40_000
            assert (result.disagreements, result.uncovered, result.overlaps) == (0, 0, 0), result.first_disagreement


class TestConvexityOracle:
    """Every constructed cell is convex."""

    @pytest.mark.slow
    def test_random_sets(self):
        for diagram in random_diagrams(count=20, seed=99):
            assert convexity_violations(diagram, tol=1e-9) == []


class TestProximityOracle:
    """δ, Čech distance and proximal regions agree on every pair."""

    @pytest.mark.slow
    def test_random_sets(self):
        for diagram in random_diagrams(count=5, seed=5, high=25):
            assert proximity_inconsistencies(diagram) == []
