"""
Minimal deterministic SVG line plots.

Coordinates are printed with a fixed number of decimals so identical data
and options always give identical bytes.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .errors import DomainError

WIDTH = 640
HEIGHT = 400
MARGIN = 56


def _fmt(v):
    return f"{v:.3f}"


def _transform(values, log, axis):
    if log:
        bad = [v for v in values if not v > 0]
        if bad:
            raise DomainError(f"log {axis} axis needs positive values, got {bad[0]!r}")
        return [math.log10(v) for v in values]
    return list(values)


def _span(values):
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = abs(lo) * 0.5 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def polyline_svg(x, y, *, log_x=False, log_y=False, xlabel="param", ylabel="abs_f",
                 title=None) -> str:
    """Render ``y`` against ``x`` as a single polyline.

    Non-finite points are dropped. Raises ``DomainError`` when fewer than
    two points remain or when a log axis meets a nonpositive value.
    """
    pts = [(a, b) for a, b in zip(x, y) if math.isfinite(a) and math.isfinite(b)]
    if len(pts) < 2:
        raise DomainError("need at least two finite points to draw a line")
    xs = _transform([p[0] for p in pts], log_x, "x")
    ys = _transform([p[1] for p in pts], log_y, "y")
    x0, x1 = _span(xs)
    y0, y1 = _span(ys)
    w = WIDTH - 2 * MARGIN
    h = HEIGHT - 2 * MARGIN

    def px(v):
        return MARGIN + (v - x0) / (x1 - x0) * w

    def py(v):
        return HEIGHT - MARGIN - (v - y0) / (y1 - y0) * h

    coords = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(xs, ys))

    def tick(v, log):
        return f"1e{v:.2f}" if log else f"{v:.6g}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{h}" fill="none" stroke="#888"/>',
        f'<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{coords}"/>',
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 18}" font-size="11">{tick(x0, log_x)}</text>',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 18}" font-size="11" '
        f'text-anchor="end">{tick(x1, log_x)}</text>',
        f'<text x="{MARGIN - 4}" y="{HEIGHT - MARGIN}" font-size="11" '
        f'text-anchor="end">{tick(y0, log_y)}</text>',
        f'<text x="{MARGIN - 4}" y="{MARGIN + 10}" font-size="11" '
        f'text-anchor="end">{tick(y1, log_y)}</text>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 12}" font-size="12" '
        f'text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="14" y="{HEIGHT / 2:.1f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {HEIGHT / 2:.1f})">{escape(ylabel)}</text>',
    ]
    if title:
        lines.append(f'<text x="{WIDTH / 2:.1f}" y="24" font-size="13" '
                     f'text-anchor="middle">{escape(title)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
