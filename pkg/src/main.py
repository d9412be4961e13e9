"""
Command-line entry point for the proximal Voronoi toolkit.

Subcommands:
- tessellate: build a diagram, write SVG and/or diagram JSON
- proximity:  report proximal pairs and their regions
- topology:   report the Leader topology and its axiom check
- lloyd:      run centroidal (Lloyd) iteration
- check:      run the oracle suite; exit 1 when a check fails

Exit codes: 0 success, 1 domain or I/O error, 2 usage error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional, Tuple

from pydantic import ValidationError

from src.centroidal.density import seed_sites_from_labels
from src.centroidal.lloyd import energy_is_non_increasing, lloyd_iterate
from src.checks.check_manager import CheckManager
from src.config import Settings, get_settings, load_settings_from_file
from src.formats.diagram_file import diagram_to_model, serialize_diagram
from src.formats.pgm import load_density, load_labels
from src.formats.site_file import model_from_sites, parse_sites, serialize_sites
from src.formats.svg_renderer import SvgOptions, render_svg
from src.proximity.distances import cech_distance
from src.proximity.relation import SiteMapping, build_proximity_graph, check_uniform_continuity
from src.topology.leader import build_leader_topology, verify_topology_axioms
from src.voronoi.builder import build_diagram, resolve_tolerance, validate_sites_in_bbox
from src.voronoi.diagram import BoundingBox, GeneratingSet
from src.utils.error_handler import ConfigurationError, InvalidParameterError, VoronoiError
from src.utils.logger import setup_logging


logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voronoi",
        description="Voronoi tessellations, proximal regions and the Leader topology",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Diagram as SVG and JSON
    python -m src.main tessellate --sites sites.json --svg out.svg --json out.json

    # Proximal pairs of a diagram
    python -m src.main proximity --sites sites.json

    # Centroidal tessellation weighted by a grey map
    python -m src.main lloyd --sites sites.json --density image.pgm --iters 200
        """
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--sites', type=str, help='Sites JSON file')
    common.add_argument('--labels', type=str, help='P5 label grid; one site per non-zero label')
    common.add_argument('--bbox', type=float, nargs=4, metavar=('X0', 'Y0', 'X1', 'Y1'),
                        help='Bounding box (overrides the sites file)')
    common.add_argument('--tol', type=float, help='Tolerance relative to the bbox diagonal')
    common.add_argument('--workers', type=int, help='Threads for cell construction')
    common.add_argument('--out', type=str, help='Write the report here instead of stdout')
    common.add_argument('--log-level', type=str, help='DEBUG, INFO, WARNING, ERROR or CRITICAL')
    common.add_argument('--env-file', type=str, help='Settings file (.env format)')
    common.add_argument('--log-file', type=str, help='Also append logs to this file')

    subparsers = parser.add_subparsers(dest='command', required=True)

    tessellate = subparsers.add_parser('tessellate', parents=[common], help='Build a diagram')
    tessellate.add_argument('--svg', type=str, help='SVG output path')
    tessellate.add_argument('--json', type=str, help='Diagram JSON output path')
    tessellate.add_argument('--normals', action='store_true', help='Draw perpendiculars from sites to cell sides')
    tessellate.add_argument('--no-edges', action='store_true', help='Leave Voronoi edges out of the SVG')
    tessellate.add_argument('--vertices', action='store_true', help='Mark Voronoi vertices in the SVG')

    proximity = subparsers.add_parser('proximity', parents=[common], help='Report proximal pairs')
    proximity.add_argument('--svg', type=str, help='SVG output path with the proximity graph')
    proximity.add_argument('--mapping', type=str,
                           help='JSON object of site id to site id; checked for uniform continuity')

    topology = subparsers.add_parser('topology', parents=[common], help='Report the Leader topology')
    topology.add_argument('--json', type=str, help='Diagram JSON output path, topology included')

    lloyd = subparsers.add_parser('lloyd', parents=[common], help='Run Lloyd iteration')
    lloyd.add_argument('--density', type=str, help='P5 density grid stretched over the bbox')
    lloyd.add_argument('--iters', type=int, help='Maximum number of steps')
    lloyd.add_argument('--move-tol', type=float, help='Stop when no site moves farther than this')
    lloyd.add_argument('--svg', type=str, help='SVG of the final diagram')
    lloyd.add_argument('--json', type=str, help='Sites JSON of the final sites')

    check = subparsers.add_parser('check', parents=[common], help='Run the oracle suite')
    check.add_argument('--seed', type=int, help='Seed for sampled checks')

    return parser


def _load_settings(args: argparse.Namespace) -> Settings:
    try:
        if args.env_file:
            return load_settings_from_file(args.env_file)
        return get_settings(force_reload=True)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid settings: {e}") from e


def _load_input(args: argparse.Namespace, settings: Settings) -> Tuple[GeneratingSet, BoundingBox, float]:
    """Sites, bounding box and relative tolerance from the input flags."""
    if bool(args.sites) == bool(args.labels):
        raise InvalidParameterError("Give exactly one of --sites and --labels")

    if args.labels:
        labels = load_labels(args.labels)
        bbox = BoundingBox(*args.bbox) if args.bbox else BoundingBox(0.0, 0.0, labels.shape[1], labels.shape[0])
        relative = args.tol if args.tol is not None else settings.tolerance
        sites = seed_sites_from_labels(labels, bbox, tol=resolve_tolerance(bbox, relative))
    else:
        model = parse_sites(
            Path(args.sites).read_text(),
            margin=settings.bbox_margin,
            default_tolerance=settings.tolerance,
            bbox=BoundingBox(*args.bbox) if args.bbox else None,
        )
        bbox = model.bounding_box()
        relative = args.tol if args.tol is not None else model.tolerance
        sites = GeneratingSet(model.points(), tol=resolve_tolerance(bbox, relative))

    validate_sites_in_bbox(sites, bbox)
    return sites, bbox, relative


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
        logger.info(f"Wrote {path}")
    else:
        sys.stdout.write(text)


def _dump(report: Any) -> str:
    return json.dumps(report, indent=2) + "\n"


def cmd_tessellate(args: argparse.Namespace, settings: Settings) -> int:
    sites, bbox, relative = _load_input(args, settings)
    diagram = build_diagram(sites, bbox, resolve_tolerance(bbox, relative), args.workers or settings.workers)

    document = serialize_diagram(diagram_to_model(diagram))
    if args.svg:
        options = SvgOptions(
            edges=not args.no_edges,
            vertices=args.vertices,
            normals=args.normals,
            width=settings.svg_width,
        )
        _emit(render_svg(diagram, options), args.svg)
    if args.json:
        _emit(document, args.json)
    if not (args.svg or args.json) or args.out:
        _emit(document, args.out)
    return 0


def cmd_proximity(args: argparse.Namespace, settings: Settings) -> int:
    sites, bbox, relative = _load_input(args, settings)
    diagram = build_diagram(sites, bbox, resolve_tolerance(bbox, relative), args.workers or settings.workers)
    graph = build_proximity_graph(diagram)

    report = {
        'sites': diagram.site_count,
        'tolerance': diagram.tol,
        'pairs': [
            {
                'sites': list(pair),
                'kind': graph.edges[pair].kind.value,
                'points': [list(p.as_tuple()) for p in graph.edges[pair].points],
                'cech_distance': cech_distance(diagram.cell(pair[0]), diagram.cell(pair[1])),
            }
            for pair in graph.edge_pairs
        ],
        'degrees': [graph.degree(p_id) for p_id in range(diagram.site_count)],
        'isolated': graph.isolated_nodes() if diagram.site_count > 1 else [],
    }

    if args.mapping:
        raw = json.loads(Path(args.mapping).read_text())
        mapping = SiteMapping.from_dict({int(k): int(v) for k, v in raw.items()}, diagram.site_count)
        report['continuity'] = check_uniform_continuity(mapping, diagram, diagram).to_dict()

    if args.svg:
        _emit(render_svg(diagram, SvgOptions(proximity=True, width=settings.svg_width), graph), args.svg)
    _emit(_dump(report), args.out)
    return 0


def cmd_topology(args: argparse.Namespace, settings: Settings) -> int:
    sites, bbox, relative = _load_input(args, settings)
    diagram = build_diagram(sites, bbox, resolve_tolerance(bbox, relative), args.workers or settings.workers)
    topology = build_leader_topology(diagram, max_families=settings.topology_max_families)
    axioms = verify_topology_axioms(topology)

    if args.json:
        _emit(serialize_diagram(diagram_to_model(diagram, topology=topology)), args.json)

    report = {
        'sites': diagram.site_count,
        'family_count': len(topology),
        'families': topology.as_lists(),
        'axioms': axioms.to_dict(),
    }
    _emit(_dump(report), args.out)
    return 0 if axioms.verdict else 1


def cmd_lloyd(args: argparse.Namespace, settings: Settings) -> int:
    sites, bbox, relative = _load_input(args, settings)
    density = load_density(args.density, bbox) if args.density else None
    max_iters = args.iters if args.iters is not None else settings.lloyd_max_iters
    movement_tol = args.move_tol if args.move_tol is not None else settings.lloyd_movement_tol
    tol = resolve_tolerance(bbox, relative)
    workers = args.workers or settings.workers

    final, history = lloyd_iterate(sites, bbox, density, max_iters, movement_tol, tol, workers)

    if args.json:
        _emit(serialize_sites(model_from_sites(final, bbox, relative)), args.json)
    if args.svg:
        diagram = build_diagram(final, bbox, tol, workers)
        _emit(render_svg(diagram, SvgOptions(width=settings.svg_width)), args.svg)

    report = {
        'iterations': len(history),
        'converged': history[-1].movement <= movement_tol,
        'final_movement': history[-1].movement,
        'energy_non_increasing': energy_is_non_increasing(history),
        'history': [state.to_dict() for state in history],
        'sites': [list(p.as_tuple()) for p in final.sites],
    }
    _emit(_dump(report), args.out)
    return 0


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    sites, bbox, relative = _load_input(args, settings)
    diagram = build_diagram(sites, bbox, resolve_tolerance(bbox, relative), args.workers or settings.workers)

    manager = CheckManager(
        diagram,
        grid_resolution=settings.check_grid_resolution,
        samples=settings.check_samples,
        seed=args.seed if args.seed is not None else settings.random_seed,
    )
    summary = manager.run_all()
    _emit(_dump(summary), args.out)
    return 0 if summary['success'] else 1


COMMANDS = {
    'tessellate': cmd_tessellate,
    'proximity': cmd_proximity,
    'topology': cmd_topology,
    'lloyd': cmd_lloyd,
    'check': cmd_check,
}


def run_cli(argv: Optional[List[str]] = None) -> int:
    """
    Parse ``argv`` and run one subcommand.

    Returns:
        0 on success, 1 on a domain or I/O error, 2 on a usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        settings = _load_settings(args)
        setup_logging(args.log_level or settings.log_level, args.log_file)
        return COMMANDS[args.command](args, settings)
    except (VoronoiError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(run_cli())
