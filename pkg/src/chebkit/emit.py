"""Byte-deterministic JSON, CSV and SVG writers.

Every float is written with 17 significant digits, so emitted values
re-parse to the same doubles.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Sequence

import numpy as np

SVG_SIZE = 800
SVG_MARGIN = 40
MARKER_RADIUS = 3


def fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0.0:
        # drop the sign of negative zero
        return "0"
    return format(x, ".17g")


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _json(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json(str(k), indent, level + 1)}: {_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_json(v, indent, level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _json(v, indent, level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with keys in insertion order and 17-digit floats."""
    return _json(obj, indent, 0) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if v is None:
                cells.append("")
            elif isinstance(v, (float, np.floating)):
                cells.append(fmt(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def svg_scatter(boundary: Sequence[np.ndarray], points: Sequence[complex]) -> str:
    """800 by 800 SVG with the set boundary as one path and points as circles.

    The view box is fitted to boundary and points with a common scale for
    both axes; the imaginary axis points up.
    """
    pieces = [np.asarray(b, dtype=complex) for b in boundary]
    pts = np.asarray(list(points), dtype=complex)
    allz = np.concatenate(pieces + [pts]) if pieces or pts.size else np.zeros(1, dtype=complex)
    lo_x, hi_x = float(allz.real.min()), float(allz.real.max())
    lo_y, hi_y = float(allz.imag.min()), float(allz.imag.max())
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12)
    scale = (SVG_SIZE - 2 * SVG_MARGIN) / span
    cx, cy = 0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y)

    def px(z: complex) -> tuple[str, str]:
        x = SVG_SIZE / 2 + (z.real - cx) * scale
        y = SVG_SIZE / 2 - (z.imag - cy) * scale
        return fmt(x), fmt(y)

    d = []
    for piece in pieces:
        for k, z in enumerate(piece):
            x, y = px(z)
            d.append(f"{'M' if k == 0 else 'L'}{x} {y}")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<path d="{" ".join(d)}" fill="none" stroke="black" stroke-width="1.5"/>',
    ]
    for z in pts:
        x, y = px(z)
        out.append(f'<circle cx="{x}" cy="{y}" r="{MARKER_RADIUS}" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
