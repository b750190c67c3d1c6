"""Deterministic serialization helpers.

All artifacts (JSON, CSV, SVG) are written with sorted keys, LF line
endings, and shortest round-trip float formatting, so identical inputs
produce byte-identical files regardless of platform or thread count.
"""

from __future__ import annotations

import json
import os
from typing import Any

__all__ = ["fmt_float", "canonical_json", "write_text", "write_json"]


def fmt_float(x: float) -> str:
    """Shortest decimal string that round-trips the double exactly."""
    return repr(float(x))


class _CanonicalEncoder(json.JSONEncoder):
    def default(self, o):
        try:
            import numpy as np
            if isinstance(o, np.integer):
                return int(o)
            if isinstance(o, np.floating):
                return float(o)
            if isinstance(o, np.ndarray):
                return o.tolist()
        except ImportError:   # pragma: no cover
            pass
        return super().default(o)


def canonical_json(data: Any) -> str:
    """JSON text with sorted keys and a trailing newline.

    Floats use Python's repr (shortest exact round trip), which is
    deterministic across platforms for IEEE doubles.
    """
    return json.dumps(data, cls=_CanonicalEncoder, sort_keys=True,
                      separators=(", ", ": "), indent=1) + "\n"


def write_text(path: str, text: str) -> str:
    """Write text with LF endings regardless of platform."""
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def write_json(path: str, data: Any) -> str:
    return write_text(path, canonical_json(data))
