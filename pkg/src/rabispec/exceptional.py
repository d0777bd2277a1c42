"""Exceptional eigenvalues, x = n omega exactly.

At x = n omega both G_+ and G_- have a potential simple pole with residues
``R_pm = K_n(n omega) * c_pm``. An eigenvalue sits at E = n omega - g^2/omega
whenever a pole is lifted:

* ``K_n(n omega) = 0`` lifts both poles: a doubly degenerate (Juddian) level;
* ``c_+ = 0`` or ``c_- = 0`` alone lifts one pole: a non-degenerate level
  in the corresponding parity sector.

The loci of both conditions in the (delta, g) plane are traced here. Grids
cover the quadrant delta >= 0, g > 0; the full plane follows by the sign
symmetries of g and delta.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .contour import ContourSet, count_components, mirror_full_plane, zero_contours
from .gfunction import (DEFAULT_TRUNCATION, G_MIN, Truncation, cofactor_field,
                        juddian_field, residue_pair)
from .model import Energy, Kind, ModelParams, Parity, validate_params
from .rootfinder import BRANCH_PARITY, Branch, bisect_secant

__all__ = [
    "ExceptionalClass", "PlaneGrid", "ContourSet", "classify_point", "juddian_locus",
    "nondegenerate_locus", "count_components", "mirror_full_plane", "axis_intercepts",
    "exceptional_energies", "juddian_points", "nondegenerate_points",
]

TOL_K = 1e-9
TOL_C = 1e-9
REFINE_TOL = 1e-10
_MIRRORS = ("x_lo", "y_lo")
#: cofactors vanish identically at delta = 0, so their grids start just above it
_DELTA_FLOOR = 1e-6


class ExceptionalClass(enum.Enum):
    NONE = "none"
    JUDDIAN = "juddian"
    NONDEGENERATE_PLUS = "nondegenerate+"
    NONDEGENERATE_MINUS = "nondegenerate-"


@dataclass
class PlaneGrid:
    delta_range: Tuple[float, float]
    g_range: Tuple[float, float]
    n_delta: int = 400
    n_g: int = 400
    values: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.n_delta < 2 or self.n_g < 2:
            raise ValueError("grid sizes must be >= 2")
        if not (self.delta_range[0] < self.delta_range[1] and self.g_range[0] < self.g_range[1]):
            raise ValueError("grid ranges must be non-degenerate")

    @property
    def deltas(self) -> np.ndarray:
        return np.linspace(*self.delta_range, self.n_delta)

    @property
    def gs(self) -> np.ndarray:
        return np.linspace(*self.g_range, self.n_g)

    def mesh(self):
        d, g = np.meshgrid(self.deltas, self.gs)
        return d, g

    def sample(self, fn) -> "PlaneGrid":
        d, g = self.mesh()
        return PlaneGrid(self.delta_range, self.g_range, self.n_delta, self.n_g, fn(d, g))


def classify_point(n: int, p: ModelParams, t: Truncation = DEFAULT_TRUNCATION,
                   tol_k: float = TOL_K, tol_c: float = TOL_C) -> ExceptionalClass:
    """Whether E = n omega - g^2/omega is an eigenvalue, and of which kind.

    Tolerances apply to the normalized quantities of :class:`ResiduePair`.
    """
    r = residue_pair(n, p, t)
    if abs(r.normalized_k) < tol_k:
        return ExceptionalClass.JUDDIAN
    cp, cm = r.normalized_cofactors
    if abs(cp) < tol_c:
        return ExceptionalClass.NONDEGENERATE_PLUS
    if abs(cm) < tol_c:
        return ExceptionalClass.NONDEGENERATE_MINUS
    return ExceptionalClass.NONE


def _juddian_fn(n, omega):
    return lambda d, g: juddian_field(n, d, g, omega)


def _cofactor_fn(n, omega, t, idx):
    return lambda d, g: cofactor_field(n, d, g, omega, t)[idx]


def juddian_locus(n: int, grid: PlaneGrid, omega: float = 1.0,
                  refine_tol: float = REFINE_TOL) -> ContourSet:
    """Zero set of K_n(n omega) over the grid (empty for n = 0)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ContourSet([], [], 0, (*grid.delta_range, *grid.g_range), _MIRRORS)
    fn = _juddian_fn(n, omega)
    sampled = grid.sample(fn)
    return zero_contours(sampled.values, grid.deltas, grid.gs, fn, refine_tol, n, _MIRRORS)


def nondegenerate_locus(n: int, grid: PlaneGrid, omega: float = 1.0,
                        t: Truncation = DEFAULT_TRUNCATION,
                        refine_tol: float = REFINE_TOL) -> Tuple[ContourSet, ContourSet]:
    """Zero sets of the cofactors c_+ and c_- (lifting the pole of G_+ or G_- only).

    Places where a line crosses the Juddian locus are listed in
    ``juddian_crossings``; there both poles are lifted and the level is degenerate.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    lo = max(grid.delta_range[0], _DELTA_FLOOR * omega)
    g2 = PlaneGrid((lo, grid.delta_range[1]), grid.g_range, grid.n_delta, grid.n_g)
    d, g = g2.mesh()
    cp, cm = cofactor_field(n, d, g, omega, t)
    out = []
    for idx, vals in enumerate((cp, cm)):
        cs = zero_contours(vals, g2.deltas, g2.gs, _cofactor_fn(n, omega, t, idx),
                           refine_tol, n, _MIRRORS if grid.delta_range[0] <= 0 else ("y_lo",))
        if n > 0:
            for pl in cs.polylines:
                k = juddian_field(n, pl[:, 0], pl[:, 1], omega)
                for r in np.nonzero(np.sign(k[:-1]) != np.sign(k[1:]))[0]:
                    cs.juddian_crossings.append((float(pl[r:r + 2, 0].mean()),
                                                 float(pl[r:r + 2, 1].mean())))
        out.append(cs)
    return out[0], out[1]


def axis_intercepts(cs: ContourSet, n: int, branch: Branch, omega: float = 1.0,
                    t: Truncation = DEFAULT_TRUNCATION) -> List[float]:
    """Delta where c_pm = 0 lines meet g = 0, by linear extrapolation.

    Each line ending on the lower g edge (g_lo) is re-solved at 2 g_lo and
    extended through the two points down to g = 0.
    """
    idx = 0 if branch is Branch.PLUS else 1
    _, _, g_lo, _ = cs.bounds
    fn = _cofactor_fn(n, omega, t, idx)
    out = []
    for k, pl in enumerate(cs.polylines):
        if cs.closed_flags[k]:
            continue
        for end, edge in zip((pl[0], pl[-1]), cs.endpoint_edges(k)):
            if edge != "y_lo":
                continue
            d_a = float(end[0])
            g_b = 2.0 * g_lo
            f = lambda d: float(fn(np.array([d]), np.array([g_b]))[0])
            h = max(1e-3, 10.0 * g_lo) * omega
            lo, hi = max(d_a - h, _DELTA_FLOOR), d_a + h
            flo, fhi = f(lo), f(hi)
            while flo * fhi > 0 and h < 0.5 * omega:
                h *= 2.0
                lo, hi = max(d_a - h, _DELTA_FLOOR), d_a + h
                flo, fhi = f(lo), f(hi)
            if flo * fhi > 0:
                continue
            d_b, _, _, _ = bisect_secant(f, lo, hi, flo, fhi, REFINE_TOL)
            out.append(d_a - (d_b - d_a) * g_lo / (g_b - g_lo))
    return sorted(out)


def exceptional_energies(p: ModelParams, n_max: int, t: Truncation = DEFAULT_TRUNCATION,
                         tol_k: float = TOL_K, tol_c: float = TOL_C) -> List[Energy]:
    """Exceptional levels at x = n omega, n = 0..n_max, for these parameters."""
    out = []
    e0 = -p.shift
    for n in range(n_max + 1):
        cls = classify_point(n, p, t, tol_k, tol_c)
        e = n * p.omega + e0
        if cls is ExceptionalClass.JUDDIAN:
            out += [Energy(e, Parity.PLUS, Kind.JUDDIAN), Energy(e, Parity.MINUS, Kind.JUDDIAN)]
        elif cls is ExceptionalClass.NONDEGENERATE_PLUS:
            out.append(Energy(e, BRANCH_PARITY[Branch.PLUS], Kind.EXCEPTIONAL_NONDEGENERATE))
        elif cls is ExceptionalClass.NONDEGENERATE_MINUS:
            out.append(Energy(e, BRANCH_PARITY[Branch.MINUS], Kind.EXCEPTIONAL_NONDEGENERATE))
    return out


def _interior_vertices(cs: ContourSet, exclude=(), min_sep: float = 0.0):
    pts = []
    for pl in cs.polylines:
        for v in pl[1:-1]:
            pts.append(v)
    pts = np.array(pts) if pts else np.empty((0, 2))
    if len(pts) and len(exclude) and min_sep > 0:
        ex = np.asarray(exclude)
        dist = np.min(np.linalg.norm(pts[:, None, :] - ex[None, :, :], axis=2), axis=1)
        pts = pts[dist > min_sep]
    return pts


def _spread(pts: np.ndarray, k: int) -> np.ndarray:
    if len(pts) <= k:
        return pts
    idx = np.linspace(0, len(pts) - 1, k).round().astype(int)
    return pts[idx]


def juddian_points(n: int, grid: PlaneGrid, k: int = 10, omega: float = 1.0) -> List[ModelParams]:
    """``k`` refined parameter points spread along the Juddian locus for level n."""
    cs = juddian_locus(n, grid, omega)
    pts = _spread(_interior_vertices(cs), k)
    return [validate_params(omega, g, d) for d, g in pts]


def nondegenerate_points(n: int, grid: PlaneGrid, branch: Branch, k: int = 10,
                         omega: float = 1.0, min_sep: float = 0.05,
                         t: Truncation = DEFAULT_TRUNCATION) -> List[ModelParams]:
    """``k`` refined points on the c_pm = 0 lines, kept ``min_sep`` away from Juddian crossings."""
    cp, cm = nondegenerate_locus(n, grid, omega, t)
    cs = cp if branch is Branch.PLUS else cm
    pts = _interior_vertices(cs, cs.juddian_crossings, min_sep)
    if n > 0 and len(pts):
        kk = np.abs(juddian_field(n, pts[:, 0], pts[:, 1], omega))
        pts = pts[kk > 1e-3]
    pts = _spread(pts, k)
    return [validate_params(omega, g, d) for d, g in pts]
