"""
JSON text for site and diagram files.

Layout matches ``json.dumps(value, indent=2)``; floats are written with 17
significant digits so every double reads back bit for bit.
"""

import json
import math
from typing import Any


INDENT = "  "


def format_float(value: float) -> str:
    """17 significant digits, always with a decimal point or exponent."""
    if not math.isfinite(value):
        raise ValueError(f"Cannot write non-finite number {value} to a JSON file")
    text = format(value, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(value: Any, depth: int) -> str:
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = INDENT * (depth + 1)
        items = ",\n".join(inner + _encode(item, depth + 1) for item in value)
        return f"[\n{items}\n{INDENT * depth}]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = INDENT * (depth + 1)
        items = ",\n".join(
            f"{inner}{json.dumps(str(key))}: {_encode(item, depth + 1)}" for key, item in value.items()
        )
        return f"{{\n{items}\n{INDENT * depth}}}"
    return json.dumps(value)


def dumps(document: Any) -> str:
    """Indented JSON text of ``document`` with a trailing newline."""
    return _encode(document, 0) + "\n"
