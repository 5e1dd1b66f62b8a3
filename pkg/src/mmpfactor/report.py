"""JSON encoding helpers shared by reports and the CLI.

Rationals are written as strings ``"p/q"`` (always with a slash, so ``5`` as a
rational is ``"5/1"``) and decoded back by pattern, which keeps every number
exact and makes structured documents round-trip.  Text reports use
:func:`fmt`, which drops the ``/1`` of integral values.
"""

from __future__ import annotations

import json
import re
from enum import Enum
from fractions import Fraction

SCHEMA_VERSION = 1

_RATIONAL = re.compile(r"^-?\d+/\d+$")


def fmt(x) -> str:
    """Human-readable rendering used by text reports; integral rationals print as integers."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def encode(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [encode(v) for v in items]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return str(obj)


def decode(obj):
    if isinstance(obj, str) and _RATIONAL.match(obj):
        n, d = obj.split("/")
        return Fraction(int(n), int(d))
    if isinstance(obj, dict):
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    return obj


def dumps(doc) -> str:
    return json.dumps(encode(doc), indent=2, sort_keys=True)


def loads(text: str):
    return decode(json.loads(text))
