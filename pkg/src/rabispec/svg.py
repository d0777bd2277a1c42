"""Minimal deterministic SVG 1.1 writer for contour panels."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .contour import ContourSet

PANEL_W, PANEL_H = 320, 300
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 48, 12, 28, 40


@dataclass
class Layer:
    contours: ContourSet
    label: str
    color: str
    dash: str = ""
    width: float = 1.4


@dataclass
class Panel:
    title: str
    bounds: Tuple[float, float, float, float]     # delta_lo, delta_hi, g_lo, g_hi
    layers: List[Layer] = field(default_factory=list)


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _ticks(lo: float, hi: float, target: int = 5) -> np.ndarray:
    span = hi - lo
    raw = span / target
    mag = 10 ** np.floor(np.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=mag)
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def _panel(p: Panel, ox: float, oy: float) -> List[str]:
    x0, x1, y0, y1 = p.bounds
    w = PANEL_W - MARGIN_L - MARGIN_R
    h = PANEL_H - MARGIN_T - MARGIN_B

    def tx(x):
        return ox + MARGIN_L + (x - x0) / (x1 - x0) * w

    def ty(y):
        return oy + MARGIN_T + (1 - (y - y0) / (y1 - y0)) * h

    out = [f'<g class="panel">',
           f'<rect x="{_num(ox + MARGIN_L)}" y="{_num(oy + MARGIN_T)}" width="{_num(w)}" '
           f'height="{_num(h)}" fill="none" stroke="#000" stroke-width="1"/>',
           f'<text x="{_num(ox + MARGIN_L + w / 2)}" y="{_num(oy + 18)}" text-anchor="middle" '
           f'font-size="13">{p.title}</text>']
    for t in _ticks(x0, x1):
        X = tx(t)
        out.append(f'<line x1="{_num(X)}" y1="{_num(oy + MARGIN_T + h)}" x2="{_num(X)}" '
                   f'y2="{_num(oy + MARGIN_T + h + 4)}" stroke="#000"/>')
        out.append(f'<text x="{_num(X)}" y="{_num(oy + MARGIN_T + h + 15)}" text-anchor="middle" '
                   f'font-size="10">{_num(t)}</text>')
    for t in _ticks(y0, y1):
        Y = ty(t)
        out.append(f'<line x1="{_num(ox + MARGIN_L - 4)}" y1="{_num(Y)}" x2="{_num(ox + MARGIN_L)}" '
                   f'y2="{_num(Y)}" stroke="#000"/>')
        out.append(f'<text x="{_num(ox + MARGIN_L - 6)}" y="{_num(Y + 3)}" text-anchor="end" '
                   f'font-size="10">{_num(t)}</text>')
    out.append(f'<text x="{_num(ox + MARGIN_L + w / 2)}" y="{_num(oy + PANEL_H - 6)}" '
               f'text-anchor="middle" font-size="11">&#916;/&#969;</text>')
    out.append(f'<text x="{_num(ox + 12)}" y="{_num(oy + MARGIN_T + h / 2)}" text-anchor="middle" '
               f'font-size="11" transform="rotate(-90 {_num(ox + 12)} {_num(oy + MARGIN_T + h / 2)})">'
               f'g/&#969;</text>')
    clip = f"clip{int(ox)}_{int(oy)}"
    out.append(f'<clipPath id="{clip}"><rect x="{_num(ox + MARGIN_L)}" y="{_num(oy + MARGIN_T)}" '
               f'width="{_num(w)}" height="{_num(h)}"/></clipPath>')
    for layer in p.layers:
        dash = f' stroke-dasharray="{layer.dash}"' if layer.dash else ""
        out.append(f'<g clip-path="url(#{clip})" fill="none" stroke="{layer.color}" '
                   f'stroke-width="{layer.width}"{dash}>')
        for pl in sorted(layer.contours.polylines, key=lambda a: (a[0, 0], a[0, 1])):
            pts = " ".join(f"{_num(tx(x))},{_num(ty(y))}" for x, y in pl)
            out.append(f'<polyline points="{pts}"/>')
        out.append("</g>")
    return out + ["</g>"]


def render(panels: Sequence[Panel], columns: int = 4) -> str:
    """SVG document with panels on a grid and one shared legend."""
    rows = (len(panels) + columns - 1) // columns
    cols = min(columns, max(len(panels), 1))
    legend_h = 26
    width, height = cols * PANEL_W, rows * PANEL_H + legend_h
    body = []
    for k, p in enumerate(panels):
        body += _panel(p, (k % columns) * PANEL_W, (k // columns) * PANEL_H)
    seen = []
    for p in panels:
        for layer in p.layers:
            key = (layer.label, layer.color, layer.dash)
            if key not in seen:
                seen.append(key)
    x = 10.0
    y = rows * PANEL_H + 16
    for label, color, dash in seen:
        d = f' stroke-dasharray="{dash}"' if dash else ""
        body.append(f'<line x1="{_num(x)}" y1="{_num(y - 4)}" x2="{_num(x + 24)}" y2="{_num(y - 4)}" '
                    f'stroke="{color}" stroke-width="2"{d}/>')
        body.append(f'<text x="{_num(x + 30)}" y="{_num(y)}" font-size="11">{label}</text>')
        x += 40 + 7 * len(label)
    head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">\n'
            f'<rect width="{width}" height="{height}" fill="#fff"/>\n')
    return head + "\n".join(body) + "\n</svg>\n"
