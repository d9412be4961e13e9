"""
Lloyd iteration towards a centroidal Voronoi tessellation.

One step moves every site to the (optionally density-weighted) centroid of
its cell. Iteration stops when the largest displacement falls to the
movement tolerance.

STEP:
1. Take the cells of the current sites (built unless the previous step left them)
2. Move each site to its cell centroid; sites without density support stay put
3. Build the cells of the moved sites and record their energy
4. Report the largest displacement

With a density grid every pixel belongs to exactly one site (nearest site,
ties to the lowest id), both for the centroids and for the energy.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.centroidal.density import DensityGrid, assign_pixels, assigned_centroids, weighted_cell_centroid
from src.geometry.polygon import polygon_second_moment
from src.geometry.primitives import Point
from src.voronoi.builder import build_cells, resolve_tolerance
from src.voronoi.diagram import BoundingBox, GeneratingSet, VoronoiCell
from src.utils.error_handler import ErrorContext, InvalidParameterError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LloydState:
    """
    Snapshot after one Lloyd step.

    ``sites``, ``energy`` and ``cells`` all describe the configuration the
    step produced.
    """

    iteration: int
    sites: GeneratingSet
    movement: float
    energy: float
    stalled_sites: Tuple[int, ...] = field(default_factory=tuple)
    cells: Tuple[VoronoiCell, ...] = field(default_factory=tuple, compare=False, repr=False)

    def __post_init__(self):
        if self.movement < 0:
            raise InvalidParameterError(f"Movement must be non-negative, got {self.movement}")
        if self.energy < 0:
            raise InvalidParameterError(f"Energy must be non-negative, got {self.energy}")

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "movement": self.movement,
            "energy": self.energy,
            "stalled_sites": list(self.stalled_sites),
        }


def lloyd_energy(
    cells: Sequence[VoronoiCell],
    sites: GeneratingSet,
    density: Optional[DensityGrid] = None,
    tol: Optional[float] = None
) -> float:
    """
    Sum over cells of the (density-weighted) squared distance to the cell's site.

    Uniform density integrates each polygon exactly. With a density grid each
    pixel centre is charged to the site ``assign_pixels`` gives it, so pixels
    on shared boundaries are counted once.
    """
    if density is None:
        return float(sum(polygon_second_moment(cell.polygon, sites[cell.site_id]) for cell in cells))

    xs, ys = density.pixel_centers()
    owner = assign_pixels(sites, density, tol)
    coords = sites.as_array()
    squared = (xs - coords[owner, 0]) ** 2 + (ys - coords[owner, 1]) ** 2
    return float((density.values * squared).sum() * density.pixel_area)


def _cell_centroids(
    cells: Sequence[VoronoiCell],
    tol: float,
    workers: int
) -> List[Optional[Point]]:
    def centroid(cell: VoronoiCell) -> Point:
        return weighted_cell_centroid(cell, None, tol)

    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(centroid, cells))
    return [centroid(cell) for cell in cells]


def lloyd_step(
    sites: GeneratingSet,
    bbox: BoundingBox,
    density: Optional[DensityGrid] = None,
    tol: Optional[float] = None,
    workers: int = 1,
    iteration: int = 1,
    cells: Optional[Sequence[VoronoiCell]] = None
) -> Tuple[GeneratingSet, LloydState]:
    """
    Move every site to the centroid of its cell.

    Args:
        sites: Current sites, strictly inside ``bbox``
        bbox: Clipping window
        density: Optional weights; uniform when None
        tol: Absolute tolerance; defaults to the relative default of the box
        workers: Threads for cell construction and centroids
        iteration: Step number recorded in the state
        cells: Cells of ``sites`` when already known, e.g. from the previous state

    Returns:
        (new sites, state) where the state carries the moved sites, their
        cells and energy, and the largest displacement
    """
    tol = resolve_tolerance(bbox) if tol is None else tol
    if density is None:
        cells = build_cells(sites, bbox, tol, workers) if cells is None else cells
        targets = _cell_centroids(cells, tol, workers)
    else:
        targets = assigned_centroids(sites, density, tol)

    stalled = tuple(site_id for site_id, target in enumerate(targets) if target is None)
    for site_id in stalled:
        logger.warning(f"Site {site_id} has no density support in its cell; left in place")
    new_points = tuple(old if new is None else new for old, new in zip(sites.sites, targets))
    movement = max(old.distance_to(new) for old, new in zip(sites.sites, new_points))

    new_sites = GeneratingSet(new_points, tol=sites.tol)
    new_cells = build_cells(new_sites, bbox, tol, workers)
    energy = lloyd_energy(new_cells, new_sites, density, tol)
    state = LloydState(
        iteration=iteration,
        sites=new_sites,
        movement=movement,
        energy=energy,
        stalled_sites=stalled,
        cells=tuple(new_cells),
    )
    logger.debug(f"Lloyd step {iteration}: movement={movement:.3e}, energy={energy:.6e}")
    return new_sites, state


def lloyd_iterate(
    initial: GeneratingSet,
    bbox: BoundingBox,
    density: Optional[DensityGrid] = None,
    max_iters: int = 500,
    movement_tol: float = 1e-6,
    tol: Optional[float] = None,
    workers: int = 1
) -> Tuple[GeneratingSet, List[LloydState]]:
    """
    Run Lloyd steps until the largest displacement is at most ``movement_tol``
    or ``max_iters`` steps have run.

    Returns:
        (final sites, one state per executed step)

    Raises:
        InvalidParameterError: If ``max_iters < 1`` or ``movement_tol <= 0``
    """
    if max_iters < 1:
        raise InvalidParameterError(f"max_iters must be at least 1, got {max_iters}")
    if not movement_tol > 0:
        raise InvalidParameterError(f"movement_tol must be positive, got {movement_tol}")

    sites = initial
    cells: Optional[Sequence[VoronoiCell]] = None
    history: List[LloydState] = []

    with ErrorContext("Lloyd iteration", sites=len(initial), max_iters=max_iters):
        for iteration in range(1, max_iters + 1):
            sites, state = lloyd_step(sites, bbox, density, tol, workers, iteration, cells)
            cells = state.cells
            history.append(state)
            if state.movement <= movement_tol:
                break

    final = history[-1]
    if final.movement <= movement_tol:
        logger.info(f"Lloyd converged after {len(history)} steps (movement {final.movement:.3e})")
    else:
        logger.warning(
            f"Lloyd stopped at {max_iters} steps with movement {final.movement:.3e} > {movement_tol:g}"
        )
    return sites, history


def energy_is_non_increasing(history: Sequence[LloydState], slack: float = 1e-9) -> bool:
    """True when no recorded energy exceeds its predecessor by more than ``slack``."""
    energies = np.array([state.energy for state in history], dtype=float)
    if energies.size < 2:
        return True
    return bool(np.all(np.diff(energies) <= slack))
