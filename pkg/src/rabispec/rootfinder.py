"""Zeros of G_pm and the regular spectrum.

G_pm has simple poles at x = m omega, so the x axis is cut into pole-free
segments (each shortened by the pole margin) and sign changes are only
looked for inside a segment.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import (LostBracket, PoleAt, TruncationNotConverged,
                     UnsupportedCoupling, ZeroSplitting)
from .gfunction import (DEFAULT_TRUNCATION, G_MAX, G_MIN, POLE_MARGIN,
                        Truncation, g_pair, g_values)
from .model import Energy, Kind, ModelParams, Parity, energy_from_x

GRID_DIVISIONS = 200          # default scan step is omega / GRID_DIVISIONS
X_TOL = 1e-12                 # root width, in units of omega
MIN_DIP = 1e-3
_DIP_SUBDIVISIONS = 64
_DIP_DEPTH = 3


class Branch(enum.Enum):
    PLUS = "+"
    MINUS = "-"


#: zeros of G_+ are eigenvalues of the parity sector omega n + g(a + a^dag) + delta (-1)^n;
#: fixed against the diagonalization oracle (tests/test_rootfinder.py)
BRANCH_PARITY = {Branch.PLUS: Parity.PLUS, Branch.MINUS: Parity.MINUS}


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    branch: Branch
    suspected_double: bool = False

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError("bracket needs lo <= hi")


@dataclass(frozen=True)
class RootResult:
    x_star: float
    branch: Branch
    residual: float
    width: float
    suspected_double: bool = False
    evaluations: int = 0


@dataclass
class RegularScan:
    roots: List[RootResult]
    gaps: List[Tuple[float, float]] = field(default_factory=list)
    x_range: Tuple[float, float] = (0.0, 0.0)


def _segments(p: ModelParams, x_lo: float, x_hi: float) -> List[Tuple[float, float]]:
    # endpoints sit a hair outside the margin so rounding cannot push them inside
    w, margin = p.omega, POLE_MARGIN * p.omega * (1 + 1e-6)
    m_lo = max(int(math.floor(x_lo / w)), 0)
    m_hi = max(int(math.ceil(x_hi / w)), 0)
    cuts = [m * w for m in range(m_lo, m_hi + 1) if x_lo - margin < m * w < x_hi + margin]
    out, start = [], x_lo
    for c in cuts:
        end = min(c - margin, x_hi)
        if end > start:
            out.append((start, end))
        start = max(start, c + margin)
    if x_hi > start:
        out.append((start, x_hi))
    return out


def pole_gaps(p: ModelParams, x_lo: float, x_hi: float) -> List[Tuple[float, float]]:
    """Intervals around poles in [x_lo, x_hi] where zeros cannot be certified."""
    w, margin = p.omega, POLE_MARGIN * p.omega
    m_lo = max(int(math.floor(x_lo / w)), 0)
    m_hi = max(int(math.ceil(x_hi / w)), 0)
    return [(m * w - margin, m * w + margin) for m in range(m_lo, m_hi + 1)
            if x_lo - margin < m * w < x_hi + margin]


def _branch_values(vals: Tuple[np.ndarray, np.ndarray], branch: Branch) -> np.ndarray:
    return vals[0] if branch is Branch.PLUS else vals[1]


def _sign_brackets(xs, ys, branch) -> List[Bracket]:
    out = []
    for i in range(len(xs) - 1):
        a, b = ys[i], ys[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a == 0.0:
            out.append(Bracket(xs[i], xs[i], branch))
        elif a * b < 0:
            out.append(Bracket(xs[i], xs[i + 1], branch))
    if len(ys) and ys[-1] == 0.0:
        out.append(Bracket(xs[-1], xs[-1], branch))
    return out


def _dip_brackets(p, xs, ys, branch, t, depth, scale=None) -> List[Bracket]:
    """Sub-scan local minima of |G| that show no sign change on the coarse grid.

    ``scale`` is the coarse-grid |G| next to the dip; an unresolved minimum
    deeper than ``MIN_DIP * scale`` is reported as a suspected double root.
    """
    out = []
    a = np.abs(ys)
    for i in range(1, len(xs) - 1):
        if not np.all(np.isfinite(ys[i - 1:i + 2])):
            continue
        if not (a[i] < a[i - 1] and a[i] <= a[i + 1]):
            continue
        if ys[i - 1] * ys[i] <= 0 or ys[i] * ys[i + 1] <= 0:
            continue
        local = max(a[i - 1], a[i + 1]) if scale is None else scale
        sub = np.linspace(xs[i - 1], xs[i + 1], 2 * _DIP_SUBDIVISIONS + 1)
        sv = _branch_values(g_values(sub, p, t), branch)
        found = _sign_brackets(sub, sv, branch)
        if found:
            out.extend(found)
        elif depth > 1:
            out.extend(_dip_brackets(p, sub, sv, branch, t, depth - 1, local))
        elif a[i] < MIN_DIP * local:
            out.append(Bracket(xs[i - 1], xs[i + 1], branch, suspected_double=True))
    return out


def scan_brackets(p: ModelParams, x_lo: float, x_hi: float, step: Optional[float] = None,
                  t: Truncation = DEFAULT_TRUNCATION) -> List[Bracket]:
    """Sign-change brackets of G_+ and G_- on a grid over [x_lo, x_hi].

    Pole margins are skipped. Local minima of |G| without a sign change are
    re-scanned on a finer grid; a dip that stays unresolved is returned as a
    ``suspected_double`` bracket.
    """
    if not x_lo <= x_hi:
        raise ValueError("x_lo must not exceed x_hi")
    step = p.omega / GRID_DIVISIONS if step is None else step
    if not 0 < step <= p.omega / 100:
        raise ValueError("step must lie in (0, omega/100]")
    out: List[Bracket] = []
    for a, b in _segments(p, x_lo, x_hi):
        n = max(int(math.ceil((b - a) / step)), 1)
        xs = np.linspace(a, b, n + 1)
        vals = g_values(xs, p, t)
        for branch in Branch:
            ys = _branch_values(vals, branch)
            out.extend(_sign_brackets(xs, ys, branch))
            out.extend(_dip_brackets(p, xs, ys, branch, t, _DIP_DEPTH))
    # a zero sitting exactly on a grid node is reported by both adjacent cells
    uniq = {(b.branch, b.lo, b.hi, b.suspected_double): b for b in out}
    return sorted(uniq.values(), key=lambda b: (b.lo, b.branch.value))


def bisect_secant(f: Callable[[float], float], lo: float, hi: float,
                  f_lo: float, f_hi: float, xtol: float,
                  max_iter: int = 200) -> Tuple[float, float, float, int]:
    """Bracketed root by Illinois regula falsi, falling back to bisection.

    Every iterate stays strictly inside the current bracket; when two steps
    in a row fail to halve the bracket the next step bisects. Returns
    ``(x, f(x), final width, iterations)``.
    """
    if f_lo == 0.0:
        return lo, 0.0, 0.0, 0
    if f_hi == 0.0:
        return hi, 0.0, 0.0, 0
    if f_lo * f_hi > 0:
        raise LostBracket(f"no sign change on [{lo}, {hi}]")
    a, b, fa, fb = lo, hi, f_lo, f_hi
    ga, gb = fa, fb          # Illinois-weighted copies
    last_side = 0
    widths = [b - a]
    it = 0
    while b - a > xtol and it < max_iter:
        it += 1
        stalled = len(widths) >= 3 and widths[-1] > 0.5 * widths[-3]
        c = 0.5 * (a + b)
        if not stalled:
            s = (a * gb - b * ga) / (gb - ga)
            if a < s < b:
                c = s
        fc = f(c)
        if fc == 0.0:
            return c, 0.0, 0.0, it
        if fa * fc < 0:
            b, fb, gb = c, fc, fc
            if last_side == -1:
                ga *= 0.5
            last_side = -1
        else:
            a, fa, ga = c, fc, fc
            if last_side == 1:
                gb *= 0.5
            last_side = 1
        widths.append(b - a)
    x = a if abs(fa) <= abs(fb) else b
    return x, (fa if x == a else fb), b - a, it


def _golden_min(f, lo, hi, xtol):
    inv = (math.sqrt(5) - 1) / 2
    c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
    fc, fd = f(c), f(d)
    it = 0
    while hi - lo > xtol and it < 200:
        it += 1
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi), hi - lo, it


def refine_root(b: Bracket, p: ModelParams, t: Truncation = DEFAULT_TRUNCATION,
                x_tol: Optional[float] = None) -> RootResult:
    """Shrink a bracket to width ``x_tol`` (default 1e-12 omega)."""
    x_tol = X_TOL * p.omega if x_tol is None else x_tol
    idx = 0 if b.branch is Branch.PLUS else 1
    calls = [0]

    def f(x):
        calls[0] += 1
        try:
            return _pick(g_pair(x, p, t), idx)
        except (TruncationNotConverged, PoleAt) as exc:
            raise LostBracket(f"G evaluation failed at x={x} inside [{b.lo}, {b.hi}]: {exc}") from exc

    if b.hi - b.lo <= x_tol:
        x = 0.5 * (b.lo + b.hi)
        return RootResult(x, b.branch, abs(f(x)), b.hi - b.lo, b.suspected_double, calls[0])
    if b.suspected_double:
        x, width, _ = _golden_min(lambda s: abs(f(s)), b.lo, b.hi, x_tol)
        return RootResult(x, b.branch, abs(f(x)), width, True, calls[0])
    x, fx, width, _ = bisect_secant(f, b.lo, b.hi, f(b.lo), f(b.hi), x_tol)
    return RootResult(x, b.branch, abs(fx), width, False, calls[0])


def _pick(gp, idx):
    return gp.g_plus if idx == 0 else gp.g_minus


def check_supported(p: ModelParams):
    if not G_MIN <= p.ratio <= G_MAX:
        raise UnsupportedCoupling(
            f"g/omega={p.ratio:g} outside the series window [{G_MIN}, {G_MAX}]; use the oracle")
    if p.delta <= 0:
        raise ZeroSplitting("delta = 0 has the analytic spectrum m omega - g^2/omega; use the oracle")


def scan_regular(p: ModelParams, count: int, t: Truncation = DEFAULT_TRUNCATION,
                 max_windows: int = 500) -> RegularScan:
    """Lowest ``count`` zeros of G_pm, scanning up from below the ground state."""
    if count < 1:
        raise ValueError("count must be >= 1")
    check_supported(p)
    x_floor = -p.delta - 0.5 * p.omega
    roots: List[RootResult] = []
    lo = x_floor
    hi = 0.0 if x_floor < 0 else (math.floor(x_floor / p.omega) + 1) * p.omega
    for _ in range(max_windows):
        for b in scan_brackets(p, lo, hi, t=t):
            roots.append(refine_root(b, p, t))
        if len(roots) >= count:
            break
        lo, hi = hi, hi + p.omega
    roots.sort(key=lambda r: (r.x_star, r.branch.value))
    roots = roots[:count]
    top = roots[-1].x_star if roots else hi
    return RegularScan(roots, pole_gaps(p, x_floor, top), (x_floor, top))


def regular_spectrum(p: ModelParams, count: int,
                     t: Truncation = DEFAULT_TRUNCATION) -> List[Energy]:
    """Lowest ``count`` regular eigenvalues, with parity from the G branch."""
    scan = scan_regular(p, count, t)
    return [energy_from_x(r.x_star, p, BRANCH_PARITY[r.branch], Kind.REGULAR)
            for r in scan.roots]
