"""Deterministic JSON rendering: identical inputs give identical bytes.

Keys are sorted and floats use Python's shortest round-trip repr, so a
re-run of the same configuration reproduces artifacts bit for bit.
"""

from __future__ import annotations

import json
import math
from pathlib import Path


def _normalize(obj):
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        # numpy scalars
        try:
            return _normalize(obj.item())
        except (AttributeError, ValueError):
            pass
    return obj


def dumps(obj) -> str:
    return json.dumps(_normalize(obj), sort_keys=True, indent=2,
                      allow_nan=False) + "\n"


def write(path, obj) -> None:
    Path(path).write_text(dumps(obj))
