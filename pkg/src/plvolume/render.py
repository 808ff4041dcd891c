"""Deterministic SVG drawings of 2-dimensional complexes."""
from __future__ import annotations

import math

from .equalizer import TransferChain
from .exceptions import UnsupportedDimension
from .forms import PCForm
from .simplicial import Complex

__all__ = ["project", "render_svg"]

SIZE = 480
MARGIN = 24
MARKERS = (("v", "#d62728"), ("w", "#1f77b4"), ("u_sigma", "#2ca02c"), ("u_tau", "#9467bd"))

_S2, _S6, _S3 = math.sqrt(2), math.sqrt(6), math.sqrt(3)


def project(point) -> tuple[float, float, float]:
    """(x, y, depth): the plane itself, or an orthographic view along (1, 1, 1) for R^3."""
    p = [float(c) for c in point]
    if len(p) == 2:
        return p[0], p[1], 0.0
    x, y, z = p
    return (x - y) / _S2, (x + y - 2 * z) / _S6, (x + y + z) / _S3


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(K: Complex, form: PCForm | None = None, chain: TransferChain | None = None) -> str:
    """One polygon per cell, fill opacity proportional to density.

    A chain adds one marker per solved point of every step.
    """
    if K.dim != 2 or K.ambient_dim not in (2, 3):
        raise UnsupportedDimension("only 2-dimensional complexes in R^2 or R^3 can be drawn")
    flat = [project(v) for v in K.vertices]
    xs = [p[0] for p in flat]
    ys = [p[1] for p in flat]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (SIZE - 2 * MARGIN) / span
    x0, y1 = min(xs), max(ys)

    def screen(p) -> tuple[str, str]:
        return _fmt(MARGIN + (p[0] - x0) * scale), _fmt(MARGIN + (y1 - p[1]) * scale)

    if form is not None:
        dens = form.densities()
        top = max(dens)
        opacity = [0.15 + 0.75 * d / top for d in dens]
    else:
        opacity = [0.3] * K.n_cells
    # painter's order: farthest first
    order = sorted(range(K.n_cells), key=lambda c: (sum(flat[v][2] for v in K.cell(c).vertex_ids), c))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    for c in order:
        pts = " ".join(",".join(screen(flat[v])) for v in K.cell(c).vertex_ids)
        lines.append(
            f'<polygon data-cell="{c}" points="{pts}" fill="#4a6fa5" '
            f'fill-opacity="{_fmt(opacity[c])}" stroke="black" stroke-width="1"/>'
        )
    if chain is not None:
        for i, st in enumerate(chain.steps):
            for name, colour in MARKERS:
                cx, cy = screen(project(K.coords(getattr(st.transfer, name))))
                lines.append(
                    f'<circle data-step="{i}" data-point="{name}" cx="{cx}" cy="{cy}" r="3" fill="{colour}"/>'
                )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
