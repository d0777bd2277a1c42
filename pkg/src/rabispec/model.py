"""Model parameters and the map between the spectral variable x and energies.

Everything downstream works with the shifted variable ``x = E + g**2/omega``;
the Hamiltonian is ``H = omega a^dag a + g sigma_z (a + a^dag) + delta sigma_x``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import NonFinite, NonPositiveFrequency


class Parity(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    UNASSIGNED = "?"


class Kind(enum.Enum):
    REGULAR = "regular"
    JUDDIAN = "juddian"
    EXCEPTIONAL_NONDEGENERATE = "exceptional"


@dataclass(frozen=True)
class ModelParams:
    """Physical triple (omega, g, delta). Build through :func:`validate_params`."""

    omega: float = 1.0
    g: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("omega", "g", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise NonFinite(f"{name} must be finite, got {getattr(self, name)!r}")
        if self.omega <= 0:
            raise NonPositiveFrequency(f"omega must be > 0, got {self.omega!r}")
        if self.g < 0 or self.delta < 0:
            raise ValueError("g and delta must be non-negative; use validate_params")

    @property
    def ratio(self) -> float:
        """Dimensionless coupling g/omega."""
        return self.g / self.omega

    @property
    def shift(self) -> float:
        """The polaron shift g**2/omega separating x from E."""
        return self.g * self.g / self.omega


@dataclass(frozen=True)
class SpectralPoint:
    x: float
    n_index: Optional[int] = None

    def __post_init__(self):
        if not math.isfinite(self.x):
            raise NonFinite(f"x must be finite, got {self.x!r}")


@dataclass(frozen=True)
class Energy:
    value: float
    parity: Parity = Parity.UNASSIGNED
    kind: Kind = Kind.REGULAR


def validate_params(omega: float, g: float, delta: float) -> ModelParams:
    """Check and normalize a parameter triple.

    Negative ``g`` and ``delta`` are replaced by their magnitudes: the
    spectrum is invariant under either sign flip (unitary equivalence).
    """
    omega, g, delta = float(omega), float(g), float(delta)
    for name, v in (("omega", omega), ("g", g), ("delta", delta)):
        if not math.isfinite(v):
            raise NonFinite(f"{name} must be finite, got {v!r}")
    if omega <= 0:
        raise NonPositiveFrequency(f"omega must be > 0, got {omega!r}")
    return ModelParams(omega, abs(g), abs(delta))


def energy_from_x(x: Union[SpectralPoint, float], p: ModelParams,
                  parity: Parity = Parity.UNASSIGNED,
                  kind: Kind = Kind.REGULAR) -> Energy:
    xv = x.x if isinstance(x, SpectralPoint) else float(x)
    return Energy(xv - p.shift, parity, kind)


def x_from_energy(e: Union[Energy, float], p: ModelParams) -> SpectralPoint:
    ev = e.value if isinstance(e, Energy) else float(e)
    return SpectralPoint(ev + p.shift)
