"""SVG 1.1 figures: the domain with its boundary labels on the left, traced
boundary images over the classified components on the right."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .boundary import (
    Circle,
    DiskComplement,
    DomainSpec,
    FirstQuadrant,
    HalfStrip,
    PointGeom,
    PuncturedSphere,
    Ray,
    Segment,
    Viewport,
)
from .classify import ImageReport, Status
from .sphere import XPoint

STATUS_FILL = {
    Status.FILLED: "#9ecae1",
    Status.EXCLUDED: "#eeeeee",
    Status.UNDETERMINED: "#fdd49e",
}
CURVE_COLORS = ["#08519c", "#a50f15", "#006d2c", "#54278f", "#b15928", "#252525"]

PANEL = 360
MARGIN = 20


def _num(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


class _Frame:
    """World rectangle mapped into a pixel panel (y up)."""

    def __init__(self, xmin, ymin, xmax, ymax, left):
        self.xmin, self.ymin, self.xmax, self.ymax = xmin, ymin, xmax, ymax
        self.left = left
        self.sx = PANEL / (xmax - xmin)
        self.sy = PANEL / (ymax - ymin)

    def px(self, x, y):
        return self.left + (x - self.xmin) * self.sx, MARGIN + (self.ymax - y) * self.sy


def _cells_path(mask: np.ndarray, fr: _Frame, vp: Viewport) -> str:
    """Union of raster cells as one path, run-length encoded per row."""
    parts = []
    cw, ch = vp.cell * fr.sx, (vp.ymax - vp.ymin) / vp.ny * fr.sy
    for r in range(mask.shape[0]):
        row = mask[r]
        if not row.any():
            continue
        padded = np.concatenate(([False], row, [False]))
        edges = np.flatnonzero(padded[1:] != padded[:-1])
        y0 = vp.ymin + (r + 1) * (vp.ymax - vp.ymin) / vp.ny
        for a, b in zip(edges[::2], edges[1::2]):
            x, y = fr.px(vp.xmin + a * vp.cell, y0)
            parts.append(f"M{_num(x)} {_num(y)}h{_num((b - a) * cw)}v{_num(ch)}h{_num(-(b - a) * cw)}z")
    return "".join(parts)


def _poly(points, fr: _Frame) -> str:
    return " ".join(f"{_num(a)},{_num(b)}" for a, b in (fr.px(z.real, z.imag) for z in points))


def _domain_window(d: DomainSpec) -> tuple[float, float, float, float]:
    if isinstance(d, HalfStrip):
        return (-0.4, -0.4, math.pi / 2 + 0.4, 3.0)
    if isinstance(d, FirstQuadrant):
        return (-0.5, -0.5, 3.0, 3.0)
    if isinstance(d, PuncturedSphere):
        return (-2.0, -2.0, 2.0, 2.0)
    r = getattr(d, "radius", None)
    if r is not None:
        k = 2.0 if isinstance(d, DiskComplement) else 1.5
        return (-k * r, -k * r, k * r, k * r)
    lo, hi = getattr(d, "lo", -1 - 1j), getattr(d, "hi", 1 + 1j)
    w = max(hi.real - lo.real, hi.imag - lo.imag) * 0.25
    return (lo.real - w, lo.imag - w, hi.real + w, hi.imag + w)


def _piece_track(piece, fr: _Frame, n: int = 200) -> list[complex]:
    g = piece.geometry
    if isinstance(g, Ray):
        # walk until the window is left
        span = 2 * max(fr.xmax - fr.xmin, fr.ymax - fr.ymin)
        o, u = complex(g.origin), complex(g.direction)
        u = u / abs(u)
        return [o + span * j / n * u for j in range(n + 1)]
    if isinstance(g, (Segment, Circle)):
        return [piece.at(j / n).to_complex() for j in range(n + 1)]
    return []


def domain_panel(d: DomainSpec, left: float) -> list[str]:
    fr = _Frame(*_domain_window(d), left)
    out = [f'<g class="domain" clip-path="url(#clip-left)">']
    # shade D on a coarse grid
    nx = ny = 96
    vp = Viewport(fr.xmin, fr.ymin, fr.xmax, fr.ymax, nx, ny)
    mask = np.zeros((ny, nx), dtype=bool)
    for r in range(ny):
        for c in range(nx):
            mask[r, c] = d.contains(XPoint.of(vp.cell_center(r, c)))
    out.append(f'<path d="{_cells_path(mask, fr, vp)}" fill="#deebf7" stroke="none"/>')
    for i, piece in enumerate(d.pieces()):
        color = CURVE_COLORS[i % len(CURVE_COLORS)]
        g = piece.geometry
        if isinstance(g, PointGeom):
            if g.z.infinite:
                x, y = fr.left + PANEL - 8, MARGIN + 12
            else:
                x, y = fr.px(float(g.z.re), float(g.z.im))
                out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="3" fill="{color}"/>')
            out.append(f'<text x="{_num(x + 4)}" y="{_num(y - 4)}" font-size="11" fill="{color}">{escape(piece.id)}</text>')
            continue
        track = _piece_track(piece, fr)
        out.append(f'<polyline points="{_poly(track, fr)}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        mid = track[len(track) // 3]
        x, y = fr.px(mid.real, mid.imag)
        out.append(f'<text x="{_num(x + 4)}" y="{_num(y - 4)}" font-size="11" fill="{color}">{escape(piece.id)}</text>')
    out.append("</g>")
    return out


def image_panel(rep: ImageReport, left: float) -> list[str]:
    vp = rep.viewport
    fr = _Frame(vp.xmin, vp.ymin, vp.xmax, vp.ymax, left)
    out = ['<g class="image" clip-path="url(#clip-right)">', '<g class="components">']
    labels = rep.raster.labels
    for c in rep.components:
        d = _cells_path(labels == c.id, fr, vp)
        out.append(
            f'<path class="component" data-id="{c.id}" data-status={quoteattr(c.status.value)} '
            f'd="{d}" fill="{STATUS_FILL[c.status]}" stroke="none"/>'
        )
    out.append("</g>")
    for i, curve in enumerate(rep.curves):
        color = CURVE_COLORS[i % len(CURVE_COLORS)]
        out.append(f'<g class="curve" data-piece={quoteattr(curve.piece_id)}>')
        for run in curve.polylines:
            if len(run) > 1:
                out.append(f'<polyline points="{_poly(run, fr)}" fill="none" stroke="{color}" stroke-width="1"/>')
        out.append("</g>")
    x, y = fr.px(0.0, 0.0)
    if vp.contains(0j):
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="1.5" fill="#000"/>')
    out.append("</g>")
    return out


def render(rep: ImageReport, title: str = "") -> str:
    width = 2 * PANEL + 3 * MARGIN
    height = PANEL + 2 * MARGIN + 16
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(title)}</title>",
        "<defs>",
        f'<clipPath id="clip-left"><rect x="{MARGIN}" y="{MARGIN}" width="{PANEL}" height="{PANEL}"/></clipPath>',
        f'<clipPath id="clip-right"><rect x="{2 * MARGIN + PANEL}" y="{MARGIN}" width="{PANEL}" height="{PANEL}"/></clipPath>',
        "</defs>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for left in (MARGIN, 2 * MARGIN + PANEL):
        lines.append(f'<rect x="{left}" y="{MARGIN}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#999"/>')
    lines += domain_panel(rep.domain, MARGIN)
    lines += image_panel(rep, 2 * MARGIN + PANEL)
    for k, (st, color) in enumerate(STATUS_FILL.items()):
        x = 2 * MARGIN + PANEL + k * 110
        y = PANEL + MARGIN + 12
        lines.append(f'<rect x="{x}" y="{y - 9}" width="10" height="10" fill="{color}" stroke="#999"/>')
        lines.append(f'<text x="{x + 14}" y="{y}" font-size="11">{st.value}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
