"""
Test JSON text output for site and diagram files.
"""

import json

import numpy as np
import pytest

from src.formats.diagram_file import diagram_to_model, serialize_diagram
from src.formats.json_text import dumps, format_float


class TestFormatFloat:
    """Test number formatting."""

    @pytest.mark.parametrize("value, text", [
        (0.1, "0.10000000000000001"),
        (2.0, "2.0"),
        (-3.0, "-3.0"),
        (0.0, "0.0"),
        (1e-9, "1.0000000000000001e-09"),
        (1.7320508075688772, "1.7320508075688772"),
    ])
    def test_seventeen_digits(self, value, text):
        assert format_float(value) == text

    @pytest.mark.parametrize("value", [float("nan"), float("inf"), -float("inf")])
    def test_non_finite_rejected(self, value):
        with pytest.raises(ValueError):
            format_float(value)

    def test_reads_back_exactly(self):
        rng = np.random.default_rng(11)
        values = np.concatenate([rng.uniform(-1e3, 1e3, 500), rng.normal(0.0, 1e-12, 500)])
        for value in values.tolist():
            assert float(format_float(value)) == value


class TestDumps:
    """Test document layout."""

    def test_layout_matches_standard_indent(self):
        document = {"sites": [[1, 2], [3, 4]], "kind": "edge", "empty": [], "flag": True, "nested": {}}
        assert dumps(document) == json.dumps(document, indent=2) + "\n"

    def test_floats_in_nested_lists(self):
        text = dumps({"bbox": [0.0, 0.1]})
        assert text == '{\n  "bbox": [\n    0.0,\n    0.10000000000000001\n  ]\n}\n'
        assert json.loads(text) == {"bbox": [0.0, 0.1]}

    def test_diagram_file_uses_seventeen_digits(self, equilateral_diagram):
        text = serialize_diagram(diagram_to_model(equilateral_diagram))
        assert "1.7320508075688772" in text
        assert json.loads(text)["sites"][2][1] == equilateral_diagram.site(2).y
