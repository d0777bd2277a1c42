"""Truncated-Fock-basis diagonalization, the independent check on the G-function.

Basis ordering for the full matrix is |0 up>, |0 down>, |1 up>, |1 down>, ...
(spin quantized along z). The parity Pi = sigma_x (-1)^{a^dag a} splits H into

    H_pm = omega a^dag a + g (a + a^dag) +- delta (-1)^{a^dag a}

each tridiagonal in the number basis. Sector "+" is the one whose g -> 0
ground state carries the symmetric spin combination (sigma_x = +1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from .eigensolver import eigenvalues, tridiagonal_eigenvalues
from .errors import NotConverged
from .model import Energy, Kind, ModelParams, Parity

DEFAULT_M_MAX = 80
CONVERGENCE_STEP = 20
CONVERGENCE_TOL = 1e-10


@dataclass(frozen=True)
class FockTruncation:
    m_max: int = DEFAULT_M_MAX

    def __post_init__(self):
        if self.m_max < 8:
            raise ValueError("m_max must be >= 8")


@dataclass(frozen=True)
class OracleSpectrum:
    energies: np.ndarray
    parities: Tuple[Parity, ...]
    m_max: int
    convergence_delta: float

    def as_energies(self) -> List[Energy]:
        return [Energy(float(e), s, Kind.REGULAR) for e, s in zip(self.energies, self.parities)]


def hamiltonian_matrix(omega: float, g: float, delta: float, m_max: int) -> np.ndarray:
    """Full 2(m_max + 1) square matrix; accepts signed g and delta."""
    dim = 2 * (m_max + 1)
    h = np.zeros((dim, dim))
    for m in range(m_max + 1):
        up, dn = 2 * m, 2 * m + 1
        h[up, up] = h[dn, dn] = m * omega
        h[up, dn] = h[dn, up] = delta
        if m < m_max:
            amp = g * np.sqrt(m + 1.0)
            h[up, up + 2] = h[up + 2, up] = amp
            h[dn, dn + 2] = h[dn + 2, dn] = -amp
    return h


def _cutoff(f: Union[FockTruncation, int]) -> int:
    return f if isinstance(f, int) else f.m_max


def build_hamiltonian(p: ModelParams, f: Union[FockTruncation, int] = FockTruncation()) -> np.ndarray:
    """Full matrix. ``f`` may be a bare integer cutoff for small test matrices."""
    return hamiltonian_matrix(p.omega, p.g, p.delta, _cutoff(f))


def sector_tridiagonal(p: ModelParams, m_max: int, sign: int) -> Tuple[np.ndarray, np.ndarray]:
    n = np.arange(m_max + 1)
    d = p.omega * n + sign * p.delta * (1.0 - 2.0 * (n % 2))
    e = p.g * np.sqrt(n[1:].astype(float))
    return d, e


def parity_reduce(p: ModelParams, f: Union[FockTruncation, int] = FockTruncation()
                  ) -> Tuple[np.ndarray, np.ndarray]:
    """Dense (H_+, H_-), each (m_max + 1) square."""
    out = []
    for sign in (1, -1):
        d, e = sector_tridiagonal(p, _cutoff(f), sign)
        out.append(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    return out[0], out[1]


def _sector_spectra(p: ModelParams, m_max: int):
    plus = tridiagonal_eigenvalues(*sector_tridiagonal(p, m_max, 1))
    minus = tridiagonal_eigenvalues(*sector_tridiagonal(p, m_max, -1))
    return plus, minus


def _merge(plus, minus, count):
    tagged = [(float(e), Parity.PLUS) for e in plus] + [(float(e), Parity.MINUS) for e in minus]
    tagged.sort(key=lambda t: (t[0], t[1].value))
    tagged = tagged[:count]
    return np.array([t[0] for t in tagged]), tuple(t[1] for t in tagged)


def oracle_spectrum(p: ModelParams, f: FockTruncation = FockTruncation(), count: int = 10,
                    check: bool = True, tol: float = CONVERGENCE_TOL) -> OracleSpectrum:
    """Lowest ``count`` levels with parity tags, verified against m_max + 20.

    Raises :class:`NotConverged` when the larger cutoff moves any reported
    level by ``tol`` or more.
    """
    if count < 1 or count > (f.m_max + 1) // 2:
        raise ValueError(f"count must be in [1, {(f.m_max + 1) // 2}] for m_max={f.m_max}")
    energies, parities = _merge(*_sector_spectra(p, f.m_max), count)
    delta = 0.0
    if check:
        ref, _ = _merge(*_sector_spectra(p, f.m_max + CONVERGENCE_STEP), count)
        delta = float(np.max(np.abs(ref - energies)))
        if not delta < tol:
            raise NotConverged(f"levels moved by {delta:.3g} under m_max {f.m_max} -> "
                               f"{f.m_max + CONVERGENCE_STEP}; raise m_max")
    return OracleSpectrum(energies, parities, f.m_max, delta)


def degeneracy_count(s: OracleSpectrum, e_target: float, tol: float) -> int:
    if not tol > 0:
        raise ValueError("tol must be > 0")
    return int(np.sum(np.abs(np.asarray(s.energies) - e_target) < tol))


def decoupled_spectrum(p: ModelParams, count: int) -> OracleSpectrum:
    """Exact g = 0 levels m omega +- delta with sector tags."""
    levels = []
    for m in range(count + int(np.ceil(p.delta / p.omega)) + 1):
        sgn = 1.0 if m % 2 == 0 else -1.0
        levels.append((m * p.omega + sgn * p.delta, Parity.PLUS))
        levels.append((m * p.omega - sgn * p.delta, Parity.MINUS))
    levels.sort(key=lambda t: (t[0], t[1].value))
    levels = levels[:count]
    return OracleSpectrum(np.array([v for v, _ in levels]), tuple(s for _, s in levels), 0, 0.0)


def displaced_spectrum(p: ModelParams, count: int) -> OracleSpectrum:
    """Exact delta = 0 levels m omega - g^2/omega, each twice degenerate."""
    levels = []
    for m in range(count):
        e = m * p.omega - p.shift
        levels += [(e, Parity.PLUS), (e, Parity.MINUS)]
    levels = levels[:count]
    return OracleSpectrum(np.array([v for v, _ in levels]), tuple(s for _, s in levels), 0, 0.0)


def full_spectrum(p: ModelParams, m_max: int, count: Optional[int] = None) -> np.ndarray:
    """Eigenvalues of the unreduced matrix (slow path, for cross-checks)."""
    ev = eigenvalues(build_hamiltonian(p, m_max))
    return ev if count is None else ev[:count]
