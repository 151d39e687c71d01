"""
Command implementations
Each runner loads its inputs, computes, and returns a Report; the typer app
turns reports into output and exit codes.
"""

from typing import Dict, Tuple

import sympy

from geoint.errors import InputError
from geoint.expr import ExprError, Point, parse


def parse_point(text: str, coordinates: Tuple[str, str]) -> Point:
    """`1,3/2` as an exact point in the given coordinates."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != len(coordinates):
        raise InputError(f"point {text!r} needs {len(coordinates)} comma-separated values")
    point: Dict[str, sympy.Rational] = {}
    for name, part in zip(coordinates, parts):
        try:
            value = parse(part, coordinates=())
        except ExprError as exc:
            raise InputError(f"point coordinate {name}: {exc}")
        if not value.is_Rational:
            raise InputError(f"point coordinate {name} must be an exact rational, got {part!r}")
        point[name] = value
    return point


def point_text(point: Point) -> Dict[str, str]:
    return {name: str(value) for name, value in point.items()}
