"""Exceptional-point maps in the (delta, g) plane, one panel per level n."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .contour import ContourSet, count_components, mirror_full_plane
from .exceptional import PlaneGrid, juddian_locus, nondegenerate_locus
from .gfunction import G_MIN
from .svg import Layer, Panel, render

MAX_LEVEL = 6
MAX_GRID = 2000


@dataclass
class LevelMap:
    n: int
    juddian: ContourSet
    plus: ContourSet
    minus: ContourSet

    @property
    def juddian_counts(self) -> Tuple[int, int]:
        return count_components(self.juddian)


@dataclass
class FigureData:
    levels: List[LevelMap] = field(default_factory=list)

    def counts(self) -> Dict[int, Tuple[int, int]]:
        return {lv.n: lv.juddian_counts for lv in self.levels}

    def panels(self, full_plane: bool = True) -> List[Panel]:
        out = []
        for lv in self.levels:
            layers = [(lv.juddian, "Juddian (doubly degenerate)", "#c0392b", ""),
                      (lv.plus, "non-degenerate, G+ pole lifted", "#1f4e9c", "5,3"),
                      (lv.minus, "non-degenerate, G- pole lifted", "#27864a", "2,2")]
            x0, x1, y0, y1 = lv.juddian.bounds
            if full_plane:
                layers = [(mirror_full_plane(cs), *rest) for cs, *rest in layers]
                bounds = (-x1, x1, -y1, y1)
            else:
                bounds = (x0, x1, 0.0, y1)
            out.append(Panel(f"n = {lv.n}", bounds,
                             [Layer(cs, label, color, dash) for cs, label, color, dash in layers]))
        return out

    def svg(self, full_plane: bool = True) -> str:
        return render(self.panels(full_plane))

    def polyline_rows(self):
        """(n, layer, polyline index, closed, vertex index, delta, g), stably ordered."""
        rows = []
        for lv in self.levels:
            for name, cs in (("juddian", lv.juddian), ("plus", lv.plus), ("minus", lv.minus)):
                for k, pl in enumerate(cs.polylines):
                    for v, (d, g) in enumerate(pl):
                        rows.append((lv.n, name, k, int(cs.closed_flags[k]), v, float(d), float(g)))
        return rows


def level_map(n: int, grid_size: int = 400, delta_max: float = None,
              g_min: float = G_MIN, g_max: float = 1.3, omega: float = 1.0) -> LevelMap:
    delta_max = (n + 2.5) * omega if delta_max is None else delta_max
    grid = PlaneGrid((0.0, delta_max), (g_min * omega, g_max * omega), grid_size, grid_size)
    plus, minus = nondegenerate_locus(n, grid, omega)
    return LevelMap(n, juddian_locus(n, grid, omega), plus, minus)


def build_figure(ns: Sequence[int] = (0, 1, 2, 3), grid_size: int = 400,
                 g_min: float = G_MIN, g_max: float = 1.3, omega: float = 1.0) -> FigureData:
    """Juddian loops and non-degenerate lines for each requested level."""
    ns = list(ns)
    if not ns:
        raise ValueError("no levels requested")
    if any(n < 0 or n > MAX_LEVEL for n in ns):
        raise ValueError(f"levels must lie in 0..{MAX_LEVEL}")
    if not 2 <= grid_size <= MAX_GRID:
        raise ValueError(f"grid size must lie in 2..{MAX_GRID}")
    return FigureData([level_map(n, grid_size, None, g_min, g_max, omega) for n in ns])
