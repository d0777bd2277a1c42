"""Zero contours of a sampled 2-D field: marching squares plus edge refinement.

Fields are sampled as ``values[j, i]`` at ``(xs[i], ys[j])``. Every contour
vertex lives on a grid edge, which makes segment assembly exact (vertices
are shared through edge keys) and lets each vertex be refined by a 1-D
bisection of the true field along its edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

FieldFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

EdgeKey = Tuple[str, int, int]   # ("h", i, j): (i,j)-(i+1,j); ("v", i, j): (i,j)-(i,j+1)


@dataclass
class ContourSet:
    """Polylines in the (x, y) = (delta, g) plane.

    ``mirror_edges`` names the grid edges that are symmetry axes of the full
    plane ("x_lo", "y_lo"); an open polyline with both ends on those edges
    closes once the quadrant is mirrored.
    """

    polylines: List[np.ndarray]
    closed_flags: List[bool]
    level_index: int = 0
    bounds: Tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)
    mirror_edges: Tuple[str, ...] = ()
    juddian_crossings: List[Tuple[float, float]] = field(default_factory=list)

    def __len__(self):
        return len(self.polylines)

    def endpoint_edges(self, k: int, rel_tol: float = 1e-9) -> Tuple[Optional[str], Optional[str]]:
        pl = self.polylines[k]
        return _edge_of(pl[0], self.bounds, rel_tol), _edge_of(pl[-1], self.bounds, rel_tol)


def _edge_of(pt, bounds, rel_tol):
    x0, x1, y0, y1 = bounds
    tx, ty = rel_tol * (x1 - x0), rel_tol * (y1 - y0)
    if abs(pt[0] - x0) <= tx:
        return "x_lo"
    if abs(pt[0] - x1) <= tx:
        return "x_hi"
    if abs(pt[1] - y0) <= ty:
        return "y_lo"
    if abs(pt[1] - y1) <= ty:
        return "y_hi"
    return None


def _cell_segments(i, j, crossed, vals) -> List[Tuple[EdgeKey, EdgeKey]]:
    bottom, right, top, left = ("h", i, j), ("v", i + 1, j), ("h", i, j + 1), ("v", i, j)
    edges = [e for e in (bottom, right, top, left) if crossed(e)]
    if len(edges) == 2:
        return [(edges[0], edges[1])]
    if len(edges) == 4:
        bl, br, tr, tl = vals[j, i], vals[j, i + 1], vals[j + 1, i + 1], vals[j + 1, i]
        centre = 0.25 * (bl + br + tr + tl)
        if (centre > 0) == (bl > 0):
            return [(bottom, right), (top, left)]
        return [(bottom, left), (top, right)]
    return []


def _assemble(segments: List[Tuple[EdgeKey, EdgeKey]]):
    adj: Dict[EdgeKey, List[EdgeKey]] = {}
    for a, b in segments:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()
    chains = []

    def walk(start):
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in adj[cur] if n != prev and n not in seen]
            if not nxt:
                closing = [n for n in adj[cur] if n == start and n != prev]
                return chain, bool(closing) and len(chain) > 2
            prev, cur = cur, nxt[0]
            chain.append(cur)
            seen.add(cur)

    for node in sorted(adj):
        if node not in seen and len(adj[node]) == 1:
            chains.append(walk(node))
    for node in sorted(adj):
        if node not in seen:
            chains.append(walk(node))
    return chains


def _edge_endpoints(keys, xs, ys):
    p0 = np.empty((len(keys), 2))
    p1 = np.empty((len(keys), 2))
    for k, (kind, i, j) in enumerate(keys):
        p0[k] = xs[i], ys[j]
        p1[k] = (xs[i + 1], ys[j]) if kind == "h" else (xs[i], ys[j + 1])
    return p0, p1


def refine_on_edges(fn: FieldFn, p0: np.ndarray, p1: np.ndarray, v0: np.ndarray,
                    tol: float) -> np.ndarray:
    """Vectorized bisection of ``fn`` along segments p0 -> p1 (opposite signs at the ends)."""
    lo = np.zeros(len(p0))
    hi = np.ones(len(p0))
    length = np.max(np.linalg.norm(p1 - p0, axis=1)) if len(p0) else 0.0
    if length == 0.0:
        return p0.copy()
    steps = max(int(math.ceil(math.log2(length / tol))) + 1, 1)
    s0 = np.sign(v0)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        pts = p0 + mid[:, None] * (p1 - p0)
        fm = fn(pts[:, 0], pts[:, 1])
        same = np.sign(fm) == s0
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    tau = 0.5 * (lo + hi)
    return p0 + tau[:, None] * (p1 - p0)


def _canonical(pl: np.ndarray, closed: bool) -> np.ndarray:
    if closed:
        body = pl[:-1]
        k = min(range(len(body)), key=lambda r: (body[r, 0], body[r, 1]))
        body = np.roll(body, -k, axis=0)
        return np.vstack([body, body[:1]])
    if (pl[-1, 0], pl[-1, 1]) < (pl[0, 0], pl[0, 1]):
        return pl[::-1].copy()
    return pl


def zero_contours(values: np.ndarray, xs: Sequence[float], ys: Sequence[float],
                  fn: Optional[FieldFn] = None, refine_tol: float = 1e-10,
                  level_index: int = 0, mirror_edges: Tuple[str, ...] = ()) -> ContourSet:
    """Zero level set of ``values`` as polylines.

    With ``fn`` given, each vertex is moved onto the exact zero of ``fn``
    along its grid edge (to ``refine_tol``); otherwise linear interpolation.
    NaN samples block the cells that touch them.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    vals = np.asarray(values, dtype=float)
    if vals.shape != (len(ys), len(xs)):
        raise ValueError("values must have shape (len(ys), len(xs))")
    if len(xs) < 2 or len(ys) < 2:
        raise ValueError("grid needs at least 2 points per axis")
    pos = vals > 0
    ok = np.isfinite(vals)
    h_cross = (pos[:, :-1] != pos[:, 1:]) & ok[:, :-1] & ok[:, 1:]
    v_cross = (pos[:-1, :] != pos[1:, :]) & ok[:-1, :] & ok[1:, :]
    cell_ok = ok[:-1, :-1] & ok[1:, :-1] & ok[:-1, 1:] & ok[1:, 1:]
    active = (h_cross[:-1, :] | h_cross[1:, :] | v_cross[:, :-1] | v_cross[:, 1:]) & cell_ok

    def crossed(e):
        kind, i, j = e
        return bool(h_cross[j, i]) if kind == "h" else bool(v_cross[j, i])

    segments = []
    for j, i in zip(*np.nonzero(active)):
        segments.extend(_cell_segments(int(i), int(j), crossed, vals))
    chains = _assemble(segments)

    keys = sorted({k for chain, _ in chains for k in chain})
    index = {k: r for r, k in enumerate(keys)}
    p0, p1 = _edge_endpoints(keys, xs, ys)
    v0 = np.array([vals[j, i] for _, i, j in keys])
    v1 = np.array([vals[j + 1, i] if kind == "v" else vals[j, i + 1] for kind, i, j in keys])
    if fn is not None and keys:
        pts = refine_on_edges(fn, p0, p1, v0, refine_tol)
    else:
        with np.errstate(invalid="ignore", divide="ignore"):
            tau = np.clip(v0 / (v0 - v1), 0.0, 1.0) if keys else np.empty(0)
        pts = p0 + tau[:, None] * (p1 - p0) if keys else np.empty((0, 2))

    polylines, flags = [], []
    for chain, closed in chains:
        pl = pts[[index[k] for k in chain]]
        if closed:
            pl = np.vstack([pl, pl[:1]])
        if len(pl) < 2:
            continue
        polylines.append(_canonical(pl, closed))
        flags.append(closed)
    order = sorted(range(len(polylines)), key=lambda r: (polylines[r][0, 0], polylines[r][0, 1]))
    return ContourSet([polylines[r] for r in order], [flags[r] for r in order], level_index,
                      (float(xs[0]), float(xs[-1]), float(ys[0]), float(ys[-1])), mirror_edges)


def count_components(cs: ContourSet) -> Tuple[int, int]:
    """(closed, open) counts; quadrant arcs ending on two mirror edges count as closed."""
    closed = opened = 0
    for k, flag in enumerate(cs.closed_flags):
        if flag:
            closed += 1
            continue
        a, b = cs.endpoint_edges(k)
        if a in cs.mirror_edges and b in cs.mirror_edges:
            closed += 1
        else:
            opened += 1
    return closed, opened


def mirror_full_plane(cs: ContourSet) -> ContourSet:
    """Reflect a quadrant ContourSet through x -> -x and y -> -y.

    Arcs ending on both mirror edges are stitched into closed loops across
    the excluded strip along the y_lo edge; everything else is copied into
    all four quadrants as-is.
    """
    fx = np.array([-1.0, 1.0])
    fy = np.array([1.0, -1.0])
    out, flags = [], []

    def add(pl, closed):
        out.append(pl)
        flags.append(closed)

    for k, pl in enumerate(cs.polylines):
        if cs.closed_flags[k]:
            for s in (np.ones(2), fx, fy, fx * fy):
                add(pl * s, True)
            continue
        a, b = cs.endpoint_edges(k)
        ends = {a, b}
        if a in cs.mirror_edges and b in cs.mirror_edges:
            if ends == {"x_lo", "y_lo"}:
                arc = pl if a == "y_lo" else pl[::-1]
                loop = np.vstack([arc, (arc * fx)[::-1], arc * fx * fy, (arc * fy)[::-1], arc[:1]])
                add(loop, True)
            elif ends == {"y_lo"}:
                loop = np.vstack([pl, (pl * fy)[::-1], pl[:1]])
                add(loop, True)
                add(loop * fx, True)
            else:
                loop = np.vstack([pl, (pl * fx)[::-1], pl[:1]])
                add(loop, True)
                add(loop * fy, True)
        else:
            for s in (np.ones(2), fx, fy, fx * fy):
                add(pl * s, False)
    x0, x1, y0, y1 = cs.bounds
    return ContourSet(out, flags, cs.level_index, (-x1, x1, -y1, y1), (),
                      list(cs.juddian_crossings))
