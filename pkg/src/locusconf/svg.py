"""SVG rendering of an arrangement.

Lines are drawn at visual angle ``theta/2`` (particle angles live on the double
cover).  An inset shows the particles themselves at ``theta`` on a circle.
"""
from __future__ import annotations

import math

from .arrangement import Arrangement

SIZE = 400
CENTER = SIZE / 2
RADIUS = 180
BASE_STROKE = 1.5
INSET_CENTER = (SIZE - 55, SIZE - 55)
INSET_RADIUS = 40

STYLES = {
    "color": {"line": "#1f4e9c", "particle": "#c0392b", "ring": "#888888", "text": "#222222"},
    "mono": {"line": "#000000", "particle": "#000000", "ring": "#000000", "text": "#000000"},
}


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def render_svg(arrangement: Arrangement, style: str = "color") -> str:
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}; choose from {sorted(STYLES)}")
    colors = STYLES[style]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        '<g id="lines">',
    ]
    for i, (theta, m) in enumerate(zip(arrangement.thetas, arrangement.mults)):
        a = theta / 2
        dx, dy = RADIUS * math.cos(a), RADIUS * math.sin(a)
        # SVG y grows downward
        out.append(
            f'<line id="line{i}" x1="{_f(CENTER - dx)}" y1="{_f(CENTER + dy)}" '
            f'x2="{_f(CENTER + dx)}" y2="{_f(CENTER - dy)}" '
            f'stroke="{colors["line"]}" stroke-width="{_f(BASE_STROKE * m)}" '
            f'data-multiplicity="{m}"/>'
        )
    out.append("</g>")
    cx, cy = INSET_CENTER
    out.append('<g id="particles">')
    out.append(
        f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(INSET_RADIUS)}" fill="none" stroke="{colors["ring"]}"/>'
    )
    for i, (theta, q) in enumerate(zip(arrangement.thetas, arrangement.charges)):
        px, py = cx + INSET_RADIUS * math.cos(theta), cy - INSET_RADIUS * math.sin(theta)
        lx, ly = cx + (INSET_RADIUS + 10) * math.cos(theta), cy - (INSET_RADIUS + 10) * math.sin(theta)
        out.append(f'<circle id="particle{i}" cx="{_f(px)}" cy="{_f(py)}" r="3" fill="{colors["particle"]}"/>')
        out.append(
            f'<text x="{_f(lx)}" y="{_f(ly)}" font-size="9" text-anchor="middle" '
            f'dominant-baseline="middle" fill="{colors["text"]}">{q}</text>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
