"""JSON model files.

A model file holds exactly ``sigma``, ``m`` and ``jumps``; ``jumps`` holds a
``family`` tag plus that family's parameters::

    {"sigma": 0.5, "m": 0.0, "jumps": {"family": "stable", "C": 1.0, "alpha": 1.5}}

Errors carry ``file:line`` locations.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

from .errors import InputError, ModelSpecError
from .levy_model import FAMILIES, LevyTriplet

TOP_FIELDS = ("sigma", "m", "jumps")
FAMILY_FIELDS = {
    "none": ((), ()),
    "stable": (("C", "alpha"), ()),
    "tempered_stable": (("C", "alpha", "theta"), ()),
    "exponential": (("a", "eta"), ()),
    "tabulated": (("knots", "tail_values"), ("inner_index", "outer_index", "interpolation")),
}


def _line_of(text: str, key: str) -> int:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else 1


def _fail(source: str, text: str, key: str, msg: str) -> ModelSpecError:
    return ModelSpecError(f"{source}:{_line_of(text, key)}: {msg}")


def _number(source, text, key, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(source, text, key, f"field {key!r} must be a number, got {json.dumps(value)}")
    if not math.isfinite(value):
        raise _fail(source, text, key, f"field {key!r} must be finite")
    return float(value)


def _numbers(source, text, key, value) -> tuple:
    if not isinstance(value, list) or not value:
        raise _fail(source, text, key, f"field {key!r} must be a nonempty list of numbers")
    return tuple(_number(source, text, key, v) for v in value)


def parse_model(text: str, source: str = "<string>") -> LevyTriplet:
    """Build a :class:`LevyTriplet` from JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelSpecError(f"{source}:{e.lineno}:{e.colno}: malformed JSON: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ModelSpecError(f"{source}:1: top level must be an object")
    for key in doc:
        if key not in TOP_FIELDS:
            raise _fail(source, text, key, f"unknown field {key!r} (expected {', '.join(TOP_FIELDS)})")
    for key in TOP_FIELDS:
        if key not in doc:
            raise ModelSpecError(f"{source}:1: missing field {key!r}")
    sigma = _number(source, text, "sigma", doc["sigma"])
    m = _number(source, text, "m", doc["m"])
    jumps = doc["jumps"]
    if not isinstance(jumps, dict):
        raise _fail(source, text, "jumps", "field 'jumps' must be an object")
    family = jumps.get("family")
    if family not in FAMILY_FIELDS:
        raise _fail(
            source, text, "family" if "family" in jumps else "jumps",
            f"unknown jump family {family!r} (expected one of {', '.join(FAMILY_FIELDS)})",
        )
    required, optional = FAMILY_FIELDS[family]
    for key in jumps:
        if key != "family" and key not in required and key not in optional:
            raise _fail(source, text, key, f"unknown field {key!r} for family {family!r}")
    params = {}
    for key in required + optional:
        if key not in jumps:
            if key in required:
                raise _fail(source, text, "jumps", f"family {family!r} needs field {key!r}")
            continue
        value = jumps[key]
        if key in ("knots", "tail_values"):
            params[key] = _numbers(source, text, key, value)
        elif key == "interpolation":
            if not isinstance(value, str):
                raise _fail(source, text, key, "field 'interpolation' must be a string")
            params[key] = value
        else:
            params[key] = _number(source, text, key, value)
    try:
        measure = FAMILIES[family](**params)
        return LevyTriplet(sigma, m, measure)
    except InputError as e:
        first = str(e).split(" ", 1)[0]
        key = first if first in params or first == "sigma" else "jumps"
        raise type(e)(f"{source}:{_line_of(text, key)}: {e}") from None


def load_model(path) -> LevyTriplet:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ModelSpecError(f"{path}: cannot read model file: {e.strerror}") from None
    return parse_model(text, str(path))


def dump_model(triplet: LevyTriplet) -> str:
    return json.dumps(triplet.to_dict(), indent=2)
