"""Dense real-symmetric eigenvalues without LAPACK.

Householder reduction to tridiagonal form followed by the implicit QL
iteration with Wilkinson-type shifts. Deterministic and backward stable;
meant for matrices of a few hundred rows at most.
"""
from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from .errors import NoConvergence

MAX_QL_ITERATIONS = 60   # per eigenvalue
_EPS = np.finfo(float).eps


def tridiagonalize(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Householder similarity reduction; returns (diagonal, off-diagonal)."""
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    for k in range(n - 2):
        # scale by the largest entry so squares of tiny entries do not
        # underflow and leave the reflector non-orthogonal
        scale = float(np.max(np.abs(a[k + 1:, k])))
        if scale == 0.0:
            continue
        v = a[k + 1:, k] / scale
        alpha = -math.copysign(math.sqrt(float(v @ v)), v[0])
        v[0] -= alpha
        v /= math.sqrt(float(v @ v))
        block = a[k + 1:, k:]
        block -= 2.0 * np.outer(v, v @ block)
        block = a[k:, k + 1:]
        block -= 2.0 * np.outer(block @ v, v)
    return np.diag(a).copy(), np.diag(a, 1).copy()


def tridiagonal_eigenvalues(d, e) -> np.ndarray:
    """Eigenvalues of the symmetric tridiagonal matrix (d, e), ascending.

    ``e[i]`` couples rows i and i + 1.
    """
    d = [float(v) for v in d]
    n = len(d)
    e = [float(v) for v in e] + [0.0]
    if len(e) != n:
        raise ValueError("off-diagonal must have len(d) - 1 entries")
    # an off-diagonal entry is dropped once it is negligible next to its
    # diagonal neighbours or to the whole matrix (a near-zero diagonal block
    # never passes the first test alone)
    norm = max((abs(a) + abs(b) for a, b in zip(d, e)), default=0.0)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = max(abs(d[m]) + abs(d[m + 1]), norm)
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > MAX_QL_ITERATIONS:
                raise NoConvergence(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return np.sort(np.array(d))


def eigenvalues(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a finite real symmetric matrix, ascending."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix must be exactly symmetric")
    if m.shape[0] == 0:
        return np.empty(0)
    if m.shape[0] == 1:
        return m[0].copy()
    d, e = tridiagonalize(m)
    return tridiagonal_eigenvalues(d, e)
