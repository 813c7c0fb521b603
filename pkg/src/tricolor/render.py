"""Deterministic SVG drawings of colored lattices with optional Pauli overlays."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .lattice import Color, ColoredLattice
from .pauli import PauliOperator

FILL = {Color.R: "#e8706a", Color.G: "#6cc47a", Color.B: "#6a9be8"}
STROKE = {Color.R: "#b22a22", Color.G: "#23873a", Color.B: "#244fa6"}
SCALE = 40.0
MARGIN = 30.0


def _unwrap(lat: ColoredLattice, ref, pt):
    """Periodic image of ``pt`` closest to ``ref`` (identity on bordered lattices)."""
    if lat.periods is None:
        return pt
    best = pt
    best_d = None
    (ax, ay), (bx, by) = lat.periods
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            cand = (pt[0] + i * ax + j * bx, pt[1] + i * ay + j * by)
            d = (cand[0] - ref[0]) ** 2 + (cand[1] - ref[1]) ** 2
            if best_d is None or d < best_d - 1e-9:
                best, best_d = cand, d
    return best


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def render_svg(lat: ColoredLattice, overlays: Sequence[PauliOperator] = ()) -> str:
    """SVG 1.1 document; plaquettes filled by color, links stroked by color, overlay supports labeled."""
    xs = [s.xy[0] for s in lat.sites]
    ys = [s.xy[1] for s in lat.sites]
    pad = 2.0 if lat.periods is not None else 1.0
    x0, y0 = min(xs) - pad, min(ys) - pad
    width = (max(xs) - x0 + pad) * SCALE + 2 * MARGIN
    height = (max(ys) - y0 + pad) * SCALE + 2 * MARGIN

    def pos(pt):
        # flip y so larger coordinates are drawn higher up
        return (MARGIN + (pt[0] - x0) * SCALE, height - MARGIN - (pt[1] - y0) * SCALE)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f"<title>{escape(lat.surface)} lattice, {lat.n} sites</title>",
        '<g id="plaquettes" stroke="none" fill-opacity="0.55">',
    ]
    for p in lat.plaquettes:
        ref = lat.sites[p.sites[0]].xy
        pts = [pos(_unwrap(lat, ref, lat.sites[s].xy)) for s in p.sites]
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        out.append(f'<polygon id="p{p.id}" points="{coords}" fill="{FILL[p.color]}"/>')
    out.append("</g>")
    out.append('<g id="links" stroke-width="2.5" stroke-linecap="round">')
    for l in lat.links:
        a = lat.sites[l.ends[0]].xy
        b = _unwrap(lat, a, lat.sites[l.ends[1]].xy)
        (x1, y1), (x2, y2) = pos(a), pos(b)
        out.append(
            f'<line id="l{l.id}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{STROKE[l.color]}"/>'
        )
    out.append("</g>")
    if lat.borders:
        out.append('<g id="borders" fill="none" stroke-width="5" stroke-dasharray="6,4">')
        for b in lat.borders:
            coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (pos(lat.sites[s].xy) for s in b.sites))
            out.append(f'<polyline points="{coords}" stroke="{STROKE[b.color]}"/>')
        out.append("</g>")
    out.append('<g id="sites" fill="#222222">')
    for s in lat.sites:
        x, y = pos(s.xy)
        out.append(f'<circle id="s{s.id}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="3"/>')
    out.append("</g>")
    for k, op in enumerate(overlays):
        if op.n != lat.n:
            raise ValueError(f"overlay {k} acts on {op.n} qubits, lattice has {lat.n}")
        out.append(f'<g id="overlay{k}" font-family="monospace" font-size="11" text-anchor="middle">')
        for q in op.support:
            x, y = pos(lat.sites[q].xy)
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="8" fill="#ffffff" stroke="#000000"/>')
            out.append(f'<text x="{_fmt(x)}" y="{_fmt(y + 4)}">{op.letter(q)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
