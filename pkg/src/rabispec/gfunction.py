"""The G-function of the Rabi model and its pole structure.

With ``x = E + g**2/omega`` the regular spectrum is the zero set of

    G_pm(x) = sum_n K_n(x) [1 -+ delta/(x - n omega)] (g/omega)**n

where ``n K_n = f_{n-1}(x) K_{n-1} - K_{n-2}``, ``K_0 = 1``, ``K_1 = f_0`` and

    f_n(x) = 2g/omega + (n omega - x + delta**2/(x - n omega)) / (2g).

Internally the series is summed through the scaled coefficients
``u_n = K_n (g/omega)**n``, whose recurrence

    n u_n = (g/omega) f_{n-1} u_{n-1} - (g/omega)**2 u_{n-2}

has no 1/g factor and therefore stays well scaled down to small coupling.
All chains below accept numpy arrays and broadcast, so grids in the
(delta, g) plane or in x are evaluated in one pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (PoleAt, TruncationNotConverged, ZeroCoupling,
                     ZeroSplitting)
from .model import ModelParams, SpectralPoint

#: evaluation is refused closer than this (in units of omega) to x = m omega
POLE_MARGIN = 1e-6
#: supported window for g/omega on the series path
G_MIN = 1e-3
G_MAX = 1.5


@dataclass(frozen=True)
class Truncation:
    rel_tol: float = 1e-14
    max_terms: int = 200
    settle_count: int = 5

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if self.max_terms < 10:
            raise ValueError("max_terms must be >= 10")
        if self.settle_count < 1:
            raise ValueError("settle_count must be >= 1")


DEFAULT_TRUNCATION = Truncation()


@dataclass(frozen=True)
class KSeries:
    x: float
    coeffs: np.ndarray
    n_used: int
    converged: bool
    nearest_pole_distance: float
    params: ModelParams = field(repr=False, default=None)

    def recurrence_residuals(self) -> np.ndarray:
        """Relative residual of ``n K_n - f_{n-1} K_{n-1} + K_{n-2}`` for n >= 2."""
        k = self.coeffs
        out = np.zeros(max(len(k) - 2, 0))
        for n in range(2, len(k)):
            f = f_coeff(n - 1, self.x, self.params, margin=0.0)
            a, b, c = n * k[n], f * k[n - 1], k[n - 2]
            scale = max(abs(a), abs(b), abs(c), np.finfo(float).tiny)
            out[n - 2] = abs(a - b + c) / scale
        return out


@dataclass(frozen=True)
class GPair:
    g_plus: float
    g_minus: float
    terms_used: int
    tail_estimate: float
    converged: bool = True


@dataclass(frozen=True)
class ResiduePair:
    """Residues of G_pm at x = n omega and their cofactors with K_n(n omega) removed.

    ``r_plus == k_n_at_pole * c_plus`` (and likewise for minus). The
    ``*_scale`` fields are the sums of absolute values of the terms that make
    up each cofactor; dividing by them gives the normalized cofactor.
    """

    n: int
    r_plus: float
    r_minus: float
    c_plus: float
    c_minus: float
    k_n_at_pole: float
    c_plus_scale: float = 1.0
    c_minus_scale: float = 1.0
    k_n_scale: float = 1.0
    terms_used: int = 0

    @property
    def normalized_cofactors(self) -> Tuple[float, float]:
        return self.c_plus / self.c_plus_scale, self.c_minus / self.c_minus_scale

    @property
    def normalized_k(self) -> float:
        return self.k_n_at_pole / self.k_n_scale

    @property
    def residue_scales(self) -> Tuple[float, float]:
        """Magnitude scale of R_pm built from absolute values along both chains."""
        return self.k_n_scale * self.c_plus_scale, self.k_n_scale * self.c_minus_scale

    @property
    def normalized_residues(self) -> Tuple[float, float]:
        cp, cm = self.normalized_cofactors
        k = self.normalized_k
        return k * cp, k * cm


# ---------------------------------------------------------------------------
# helpers


def _require_coupling(p: ModelParams):
    if p.g <= 0:
        raise ZeroCoupling("the G-function needs g > 0")


def _check_pole(x: float, omega: float, margin: float, n_max: Optional[int] = None):
    m = int(round(x / omega))
    if m < 0 or (n_max is not None and m > n_max):
        return
    if abs(x - m * omega) < margin * omega:
        raise PoleAt(m, x)


def nearest_pole(x: float, omega: float) -> Tuple[int, float]:
    m = max(int(round(x / omega)), 0)
    return m, abs(x - m * omega)


class _TailSum:
    """Partial sum with the settle-count stopping rule, vectorized.

    A term counts as negligible when its magnitude is below
    ``rel_tol * max_k |S_k|`` (running maximum of partial sums). The sum for
    an element freezes once ``settle_count`` consecutive terms were negligible.
    """

    def __init__(self, shape, t: Truncation):
        self.t = t
        self.total = np.zeros(shape)
        self.runmax = np.zeros(shape)
        self.abs_total = np.zeros(shape)
        self.streak = np.zeros(shape, dtype=int)
        self.done = np.zeros(shape, dtype=bool)
        self.n_used = np.zeros(shape, dtype=int)
        self.last = np.zeros(shape)

    def add(self, term, index: int, force: bool = False):
        live = ~self.done
        term = np.where(live, term, 0.0)
        self.total = self.total + term
        self.abs_total = self.abs_total + np.abs(term)
        self.runmax = np.maximum(self.runmax, np.abs(self.total))
        small = np.abs(term) <= self.t.rel_tol * self.runmax
        self.streak = np.where(live & small, self.streak + 1, np.where(live, 0, self.streak))
        self.last = np.where(live, np.abs(term), self.last)
        self.n_used = np.where(live, index + 1, self.n_used)
        if not force:
            self.done = self.done | (self.streak >= self.t.settle_count)

    @property
    def all_done(self) -> bool:
        return bool(np.all(self.done))


def _gamma_f(m, X, gam, dl):
    """(g/omega) * f_m(x), dimensionless."""
    return 2.0 * gam * gam + 0.5 * (m - X + dl * dl / (X - m))


def _gamma_f_abs(m, X, gam, dl):
    return 2.0 * gam * gam + 0.5 * (np.abs(m - X) + dl * dl / np.abs(X - m))


def _scaled_chain_to(n: int, X, gam, dl):
    """u_0..u_n (scaled K) and the matching chain of absolute magnitudes."""
    u_prev, u = np.zeros_like(X), np.ones_like(X)
    a_prev, a = np.zeros_like(X), np.ones_like(X)
    g2 = gam * gam
    for m in range(1, n + 1):
        u_prev, u = u, (_gamma_f(m - 1, X, gam, dl) * u - g2 * u_prev) / m
        a_prev, a = a, (_gamma_f_abs(m - 1, X, gam, dl) * a + g2 * a_prev) / m
    return u, a


# ---------------------------------------------------------------------------
# scalar operations


def f_coeff(n: int, x, p: ModelParams, margin: float = POLE_MARGIN) -> float:
    """f_n(x) = 2g/omega + (n omega - x + delta**2/(x - n omega)) / (2g)."""
    _require_coupling(p)
    x = x.x if isinstance(x, SpectralPoint) else float(x)
    if abs(x - n * p.omega) < margin * p.omega or x == n * p.omega:
        raise PoleAt(n, x)
    return 2 * p.g / p.omega + (n * p.omega - x + p.delta ** 2 / (x - n * p.omega)) / (2 * p.g)


def k_coeffs(x, p: ModelParams, t: Truncation = DEFAULT_TRUNCATION,
             n_terms: Optional[int] = None) -> KSeries:
    """K_0..K_N at ``x`` by the forward recurrence.

    ``n_terms`` fixes N + 1; otherwise N is where the G-series tail settles
    (at most ``t.max_terms``). Raises :class:`TruncationNotConverged` with the
    partial :class:`KSeries` attached when the tail never settles.
    """
    _require_coupling(p)
    x = x.x if isinstance(x, SpectralPoint) else float(x)
    converged = True
    if n_terms is None:
        gp = _series(np.asarray(x), p, t)
        n_terms = int(gp[2])
        converged = bool(gp[4])
    n_terms = max(int(n_terms), 1)
    _check_pole(x, p.omega, POLE_MARGIN, n_terms - 1)
    k = np.empty(n_terms)
    k[0] = 1.0
    if n_terms > 1:
        k[1] = f_coeff(0, x, p)
    for n in range(2, n_terms):
        k[n] = (f_coeff(n - 1, x, p) * k[n - 1] - k[n - 2]) / n
    dist = float(np.min(np.abs(x - np.arange(n_terms) * p.omega)))
    ks = KSeries(x, k, n_terms - 1, converged, dist, p)
    if not converged:
        raise TruncationNotConverged("K-series tail did not settle", ks)
    return ks


def _series(X, p: ModelParams, t: Truncation, fixed_terms: Optional[int] = None):
    """Vectorized G_pm sums at x values ``X`` (in energy units).

    ``fixed_terms`` sums exactly terms 0..fixed_terms, bypassing the tail rule.
    """
    X = np.asarray(X, dtype=float) / p.omega
    gam, dl = p.g / p.omega, p.delta / p.omega
    plus, minus = _TailSum(X.shape, t), _TailSum(X.shape, t)
    u_prev, u = np.zeros_like(X), np.ones_like(X)
    g2 = gam * gam
    stop = t.max_terms if fixed_terms is None else fixed_terms + 1
    for m in range(stop):
        if m > 0:
            u_prev, u = u, (_gamma_f(m - 1, X, gam, dl) * u - g2 * u_prev) / m
        w = dl / (X - m)
        plus.add(u * (1.0 - w), m, force=fixed_terms is not None)
        minus.add(u * (1.0 + w), m, force=fixed_terms is not None)
        if plus.all_done and minus.all_done:
            break
    if fixed_terms is not None:
        plus.done = minus.done = np.ones(np.shape(plus.total), dtype=bool)
    used = np.maximum(plus.n_used, minus.n_used)
    tail = np.maximum(plus.last, minus.last)
    return plus.total, minus.total, used, tail, plus.done & minus.done


def g_pair(x, p: ModelParams, t: Truncation = DEFAULT_TRUNCATION,
           pole_margin: float = POLE_MARGIN, n_terms: Optional[int] = None) -> GPair:
    """G_+(x) and G_-(x) summed to the tail tolerance of ``t``.

    ``n_terms`` truncates the series after term ``n_terms`` instead.
    """
    _require_coupling(p)
    if p.delta <= 0:
        raise ZeroSplitting("the G-function needs delta > 0")
    x = x.x if isinstance(x, SpectralPoint) else float(x)
    _check_pole(x, p.omega, pole_margin)
    gp, gm, used, tail, done = _series(np.asarray(x), p, t, n_terms)
    out = GPair(float(gp), float(gm), int(used), float(tail), bool(done))
    if not out.converged:
        raise TruncationNotConverged(f"G-series at x={x} did not settle in {t.max_terms} terms", out)
    return out


def g_values(xs: Sequence[float], p: ModelParams, t: Truncation = DEFAULT_TRUNCATION,
             pole_margin: float = POLE_MARGIN) -> Tuple[np.ndarray, np.ndarray]:
    """G_pm on an array of x; NaN inside pole margins and where the tail did not settle."""
    _require_coupling(p)
    if p.delta <= 0:
        raise ZeroSplitting("the G-function needs delta > 0")
    xs = np.asarray(xs, dtype=float)
    X = xs / p.omega
    m = np.maximum(np.rint(X), 0)
    bad = (np.abs(X - m) < pole_margin) & (X > -0.5)
    safe = np.where(bad, m + 0.5, xs / p.omega) * p.omega
    gp, gm, _, _, done = _series(safe, p, t)
    mask = bad | ~done
    return np.where(mask, np.nan, gp), np.where(mask, np.nan, gm)


def _cofactor_sums(n: int, gam, dl, t: Truncation, fixed_terms: Optional[int] = None):
    """Cofactors c_pm / (g/omega)**n and their absolute scales (vectorized).

    Laurent chain around x = n omega with K_n(n omega) set to 1: the pole of
    f_n seeds the simple-pole parts of K_m, m > n, which then follow the
    ordinary recurrence with f evaluated at n omega.
    """
    gam = np.asarray(gam, dtype=float)
    dl = np.asarray(dl, dtype=float)
    shape = np.broadcast(gam, dl).shape
    gam, dl = np.broadcast_to(gam, shape), np.broadcast_to(dl, shape)
    X = np.full(shape, float(n))
    plus, minus = _TailSum(shape, t), _TailSum(shape, t)
    # residue of the m = n term itself
    plus.add(-dl, n)
    minus.add(dl.copy(), n)
    g2 = gam * gam
    v_prev = np.zeros(shape)
    v = dl * dl / (2.0 * (n + 1))
    force = fixed_terms is not None
    stop = n + 1 + (t.max_terms if fixed_terms is None else fixed_terms)
    for m in range(n + 1, stop):
        if m > n + 1:
            v_prev, v = v, (_gamma_f(m - 1, X, gam, dl) * v - g2 * v_prev) / m
        w = dl / (n - m)
        plus.add(v * (1.0 - w), m, force=force)
        minus.add(v * (1.0 + w), m, force=force)
        if plus.all_done and minus.all_done:
            break
    if force:
        plus.done = minus.done = np.ones(np.shape(plus.total), dtype=bool)
    used = np.maximum(plus.n_used, minus.n_used)
    return plus, minus, used


def residue_pair(n: int, p: ModelParams, t: Truncation = DEFAULT_TRUNCATION,
                 chain_terms: Optional[int] = None) -> ResiduePair:
    """Residues R_pm = lim (x - n omega) G_pm(x) at x -> n omega, via the Laurent chain.

    ``chain_terms`` keeps only that many Laurent terms beyond the pole term.
    """
    _require_coupling(p)
    if p.delta <= 0:
        raise ZeroSplitting("residues need delta > 0")
    if n < 0:
        raise ValueError("n must be >= 0")
    gam, dl = p.g / p.omega, p.delta / p.omega
    plus, minus, used = _cofactor_sums(n, np.asarray(gam), np.asarray(dl), t, chain_terms)
    u_n, a_n = _scaled_chain_to(n, np.asarray(float(n)), gam, dl)
    cp_hat, cm_hat = float(plus.total), float(minus.total)
    scale_n = gam ** n
    k_n = float(u_n) / scale_n if n else 1.0
    out = ResiduePair(
        n=n,
        r_plus=float(u_n) * cp_hat * p.omega,
        r_minus=float(u_n) * cm_hat * p.omega,
        c_plus=scale_n * cp_hat * p.omega,
        c_minus=scale_n * cm_hat * p.omega,
        k_n_at_pole=k_n,
        c_plus_scale=scale_n * float(plus.abs_total) * p.omega,
        c_minus_scale=scale_n * float(minus.abs_total) * p.omega,
        k_n_scale=float(a_n) / scale_n if n else 1.0,
        terms_used=int(used),
    )
    if not (plus.all_done and minus.all_done):
        raise TruncationNotConverged("Laurent chain did not settle", out)
    return out


def juddian_constraint(n: int, p: ModelParams) -> float:
    """K_n(n omega). Zero exactly on the doubly degenerate (Juddian) locus."""
    _require_coupling(p)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1.0
    x = n * p.omega
    k_prev, k = 1.0, f_coeff(0, x, p)
    for m in range(2, n + 1):
        k_prev, k = k, (f_coeff(m - 1, x, p) * k - k_prev) / m
    return k


# ---------------------------------------------------------------------------
# fields over the (delta, g) plane, dimensionless in omega


def juddian_field(n: int, delta, g, omega: float = 1.0) -> np.ndarray:
    """K_n(n omega) normalized by its chain of absolute magnitudes; in [-1, 1].

    Same sign as K_n(n omega) and the same zero set.
    """
    if n == 0:
        return np.ones(np.broadcast(np.asarray(delta), np.asarray(g)).shape)
    gam = np.asarray(g, dtype=float) / omega
    dl = np.asarray(delta, dtype=float) / omega
    gam, dl = np.broadcast_arrays(gam, dl)
    u, a = _scaled_chain_to(n, np.full(gam.shape, float(n)), gam, dl)
    return u / a


def cofactor_field(n: int, delta, g, omega: float = 1.0,
                   t: Truncation = DEFAULT_TRUNCATION) -> Tuple[np.ndarray, np.ndarray]:
    """Normalized residue cofactors (c_+, c_-) at x = n omega; zero sets are the non-degenerate lines."""
    gam = np.asarray(g, dtype=float) / omega
    dl = np.asarray(delta, dtype=float) / omega
    plus, minus, _ = _cofactor_sums(n, gam, dl, t)
    with np.errstate(invalid="ignore", divide="ignore"):
        return plus.total / plus.abs_total, minus.total / minus.abs_total


# ---------------------------------------------------------------------------
# independent check of the Laurent chain


def _neville_at_zero(h, rows):
    """Polynomial extrapolation of ``rows`` (sampled at abscissae ``h``) to h = 0."""
    table = [np.array(r, dtype=float) for r in rows]
    for level in range(1, len(table)):
        for i in range(len(table) - level):
            table[i] = (h[i] * table[i + 1] - h[i + level] * table[i]) / (h[i] - h[i + level])
    return table[0]


def _scaled_samples(n, p, t, offsets):
    out = []
    for e in offsets:
        x = n * p.omega + e * p.omega
        h = x - n * p.omega
        gp = g_pair(x, p, t, pole_margin=0.0)
        out.append((h * gp.g_plus, h * gp.g_minus))
    return out


def numerical_residue(n: int, p: ModelParams, t: Truncation = DEFAULT_TRUNCATION,
                      eps: Sequence[float] = (1e-4, 1e-5, 1e-6)) -> Tuple[float, float]:
    """(x - n omega) G_pm(x) extrapolated to x -> n omega from both sides.

    Averages the two one-sided samples at each offset (cancelling the odd
    powers) and Richardson-extrapolates the averages in eps**2 to zero.
    """
    eps = sorted(eps, reverse=True)
    avg = [np.mean(_scaled_samples(n, p, t, (e, -e)), axis=0) for e in eps]
    r = _neville_at_zero(np.array(eps) ** 2, avg)
    return float(r[0]), float(r[1])


def one_sided_residue(n: int, p: ModelParams, side: float,
                      eps: Sequence[float] = (1e-4, 1e-5, 1e-6),
                      t: Truncation = DEFAULT_TRUNCATION) -> Tuple[float, float]:
    """Limit of (x - n omega) G_pm(x) as x -> n omega from one side (``side`` > 0: above)."""
    eps = sorted(eps, reverse=True)
    offs = [math.copysign(e, side) for e in eps]
    r = _neville_at_zero(np.array(offs), _scaled_samples(n, p, t, offs))
    return float(r[0]), float(r[1])
