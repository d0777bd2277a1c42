"""Full low-lying spectrum: regular zeros of G_pm merged with exceptional levels.

Parameters outside the series window (g = 0, delta = 0, g/omega > 1.5) fall
back to the analytic limits or to diagonalization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

from .exceptional import ExceptionalClass, classify_point
from .gfunction import DEFAULT_TRUNCATION, G_MAX, G_MIN, Truncation, residue_pair
from .model import Energy, Kind, ModelParams, Parity, energy_from_x
from .oracle import (DEFAULT_M_MAX, FockTruncation, decoupled_spectrum,
                     displaced_spectrum, oracle_spectrum)
from .rootfinder import BRANCH_PARITY, Branch, scan_regular


@dataclass(frozen=True)
class SpectrumRow:
    index: int
    energy: Energy
    method: str          # "gfunction" or "oracle"
    residual: float


def _oracle_rows(spec, method="oracle", residual=None) -> List[SpectrumRow]:
    res = spec.convergence_delta if residual is None else residual
    return [SpectrumRow(i, e, method, res) for i, e in enumerate(spec.as_energies())]


def compute_spectrum(p: ModelParams, levels: int, t: Truncation = DEFAULT_TRUNCATION,
                     m_max: int = DEFAULT_M_MAX) -> List[SpectrumRow]:
    """Lowest ``levels`` eigenvalues with parity, kind and provenance."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if p.g == 0:
        return _oracle_rows(decoupled_spectrum(p, levels), residual=0.0)
    if p.delta == 0:
        rows = _oracle_rows(displaced_spectrum(p, levels), residual=0.0)
        return rows
    if not G_MIN <= p.ratio <= G_MAX:
        return _oracle_rows(oracle_spectrum(p, FockTruncation(max(m_max, 2 * levels)), levels))

    scan = scan_regular(p, levels, t)
    rows = [(energy_from_x(r.x_star, p, BRANCH_PARITY[r.branch], Kind.REGULAR), "gfunction", r.residual)
            for r in scan.roots]
    top = scan.roots[-1].x_star if scan.roots else 0.0
    for n in range(int(math.floor(top / p.omega)) + 1):
        cls = classify_point(n, p, t)
        if cls is ExceptionalClass.NONE:
            continue
        r = residue_pair(n, p, t)
        e = n * p.omega - p.shift
        if cls is ExceptionalClass.JUDDIAN:
            res = abs(r.normalized_k)
            rows += [(Energy(e, Parity.PLUS, Kind.JUDDIAN), "gfunction", res),
                     (Energy(e, Parity.MINUS, Kind.JUDDIAN), "gfunction", res)]
        else:
            branch = Branch.PLUS if cls is ExceptionalClass.NONDEGENERATE_PLUS else Branch.MINUS
            res = abs(r.normalized_cofactors[0 if branch is Branch.PLUS else 1])
            rows.append((Energy(e, BRANCH_PARITY[branch], Kind.EXCEPTIONAL_NONDEGENERATE),
                         "gfunction", res))
    rows.sort(key=lambda r: (r[0].value, r[0].parity.value))
    return [SpectrumRow(i, e, m, res) for i, (e, m, res) in enumerate(rows[:levels])]
