"""
Test the command-line interface end to end.
"""

import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from src.formats.diagram_file import model_to_diagram, parse_diagram
from src.formats.pgm import write_pgm
from src.formats.site_file import parse_sites
from src.main import run_cli
from tests.conftest import SQRT3


pytestmark = pytest.mark.cli


def report(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestTessellate:
    """Test the tessellate subcommand."""

    def test_writes_svg_and_json(self, sites_file, tmp_path):
        path = sites_file([(0, 0), (2, 0), (1, SQRT3)], bbox=(-2, -2, 4, 4))
        svg_path, json_path = tmp_path / "out.svg", tmp_path / "out.json"
        code = run_cli(["tessellate", "--sites", str(path), "--svg", str(svg_path), "--json", str(json_path)])
        assert code == 0
        assert ET.fromstring(svg_path.read_bytes()).tag.endswith("svg")
        diagram = model_to_diagram(parse_diagram(json_path.read_text()))
        assert diagram.site_count == 3
        assert len(diagram.edges) == 3

    def test_stdout_is_byte_identical_across_runs(self, sites_file, capsys):
        path = sites_file([(0.1, 0.2), (0.7, 0.4), (0.3, 0.9), (0.8, 0.8)])
        assert run_cli(["tessellate", "--sites", str(path)]) == 0
        first = capsys.readouterr().out
        assert run_cli(["tessellate", "--sites", str(path)]) == 0
        assert capsys.readouterr().out == first
        assert json.loads(first)["bbox"] is not None

    def test_from_label_grid(self, tmp_path, capsys):
        labels = np.zeros((4, 4), dtype=int)
        labels[:, :2] = 1
        labels[:, 2:] = 2
        path = tmp_path / "labels.pgm"
        path.write_bytes(write_pgm(labels))
        assert run_cli(["tessellate", "--labels", str(path)]) == 0
        document = report(capsys)
        assert document["sites"] == [[1.0, 2.0], [3.0, 2.0]]
        assert document["bbox"] == [0.0, 0.0, 4.0, 4.0]


class TestProximity:
    """Test the proximity subcommand."""

    def test_two_sites_share_an_edge(self, sites_file, capsys):
        path = sites_file([(0, 0), (2, 0)], bbox=(-1, -1, 3, 1))
        assert run_cli(["proximity", "--sites", str(path)]) == 0
        result = report(capsys)
        assert len(result["pairs"]) == 1
        assert result["pairs"][0]["sites"] == [0, 1]
        assert result["pairs"][0]["kind"] == "edge"
        assert result["pairs"][0]["cech_distance"] <= 1e-9
        assert result["degrees"] == [1, 1]

    def test_mapping_continuity(self, sites_file, tmp_path, capsys):
        path = sites_file([(0, 0), (1, 0), (2, 0), (3, 0)], bbox=(-1, -1, 4, 1))
        mapping = tmp_path / "mapping.json"
        mapping.write_text(json.dumps({"0": 0, "1": 3, "2": 2, "3": 1}))
        assert run_cli(["proximity", "--sites", str(path), "--mapping", str(mapping)]) == 0
        result = report(capsys)
        assert result["continuity"]["uniformly_continuous"] is False
        assert result["continuity"]["violations"] == [[0, 1]]

    def test_report_to_file(self, sites_file, tmp_path):
        path = sites_file([(0, 0), (2, 0)], bbox=(-1, -1, 3, 1))
        out = tmp_path / "report.json"
        assert run_cli(["proximity", "--sites", str(path), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["sites"] == 2

    def test_log_file(self, sites_file, tmp_path):
        path = sites_file([(0, 0), (2, 0)], bbox=(-1, -1, 3, 1))
        log_path = tmp_path / "run.log"
        code = run_cli(["proximity", "--sites", str(path), "--out", str(tmp_path / "r.json"),
                        "--log-level", "DEBUG", "--log-file", str(log_path)])
        assert code == 0
        text = log_path.read_text()
        assert f"Logging at DEBUG to stderr, {log_path}" in text
        assert " - src.utils.logger - DEBUG - " in text


class TestTopology:
    """Test the topology subcommand."""

    def test_collinear_three(self, sites_file, capsys):
        path = sites_file([(0, 0), (1, 0), (2, 0)], bbox=(-1, -1, 3, 1))
        assert run_cli(["topology", "--sites", str(path)]) == 0
        result = report(capsys)
        assert result["family_count"] == 5
        assert result["families"] == [[], [1], [0, 1], [1, 2], [0, 1, 2]]
        assert result["axioms"]["verdict"] is True

    def test_family_limit_exits_with_error(self, sites_file, monkeypatch, capsys):
        monkeypatch.setenv("VORONOI_TOPOLOGY_MAX_FAMILIES", "4")
        path = sites_file([(0, 0), (1, 0), (2, 0)], bbox=(-1, -1, 3, 1))
        assert run_cli(["topology", "--sites", str(path)]) == 1
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "above the limit of 4" in captured.err


class TestLloyd:
    """Test the lloyd subcommand."""

    def test_symmetric_pair_converges(self, sites_file, tmp_path, capsys):
        path = sites_file([(0.2, 0.5), (0.8, 0.5)], bbox=(0, 0, 1, 1))
        final = tmp_path / "final.json"
        code = run_cli(["lloyd", "--sites", str(path), "--iters", "50", "--json", str(final)])
        assert code == 0
        result = report(capsys)
        assert result["converged"] is True
        assert result["energy_non_increasing"] is True
        assert result["iterations"] == len(result["history"])
        sites = parse_sites(final.read_text()).sites
        assert sites[0] == pytest.approx((0.25, 0.5))
        assert sites[1] == pytest.approx((0.75, 0.5))

    def test_with_density(self, sites_file, tmp_path, capsys):
        path = sites_file([(0.3, 0.5), (0.7, 0.5)], bbox=(0, 0, 1, 1))
        density = tmp_path / "density.pgm"
        density.write_bytes(write_pgm(np.full((20, 20), 255)))
        assert run_cli(["lloyd", "--sites", str(path), "--density", str(density), "--iters", "5"]) == 0
        assert len(report(capsys)["history"]) <= 5


class TestCheck:
    """Test the check subcommand."""

    def test_equilateral_passes(self, sites_file, capsys):
        path = sites_file([(0, 0), (2, 0), (1, SQRT3)], bbox=(-2, -2, 4, 4))
        assert run_cli(["check", "--sites", str(path), "--seed", "5"]) == 0
        assert report(capsys)["success"] is True


class TestExitCodes:
    """Test usage and domain error handling."""

    def test_unknown_subcommand(self):
        assert run_cli(["triangulate"]) == 2

    def test_unknown_flag(self, sites_file):
        assert run_cli(["tessellate", "--sites", str(sites_file([(0, 0)])), "--colour"]) == 2

    def test_missing_input(self):
        assert run_cli(["tessellate"]) == 1

    def test_site_outside_bbox(self, sites_file, capsys):
        path = sites_file([(0, 0), (2, 0)])
        assert run_cli(["tessellate", "--sites", str(path), "--bbox", "0", "0", "1", "1"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_bbox_flag_rescues_file_box(self, sites_file, capsys):
        path = sites_file([(0.5, 0.5), (1.5, 0.5)], bbox=(0, 0, 1, 1))
        assert run_cli(["tessellate", "--sites", str(path), "--bbox", "0", "0", "2", "1"]) == 0
        assert report(capsys)["bbox"] == [0.0, 0.0, 2.0, 1.0]

    def test_duplicate_sites(self, sites_file):
        assert run_cli(["tessellate", "--sites", str(sites_file([(0, 0), (0, 0)]))]) == 1

    def test_missing_file(self, tmp_path):
        assert run_cli(["tessellate", "--sites", str(tmp_path / "absent.json")]) == 1

    def test_malformed_sites(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run_cli(["proximity", "--sites", str(path)]) == 1

    def test_invalid_settings(self, sites_file, monkeypatch):
        monkeypatch.setenv("VORONOI_LOG_LEVEL", "VERBOSE")
        assert run_cli(["tessellate", "--sites", str(sites_file([(0, 0)]))]) == 1
