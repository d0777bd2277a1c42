"""Spectrum of the quantum Rabi model from the G-function, checked by diagonalization.

    H = omega a^dag a + g sigma_z (a + a^dag) + delta sigma_x

Regular levels are zeros of G_pm(x) with x = E + g^2/omega; exceptional
levels sit at x = n omega and are found from the pole residues of G_pm.
"""
from .errors import (LostBracket, NoConvergence, NonFinite, NonPositiveFrequency,
                     NotConverged, ParameterError, PoleAt, RabiError,
                     TruncationNotConverged, UnsupportedCoupling, ZeroCoupling,
                     ZeroSplitting)
from .model import (Energy, Kind, ModelParams, Parity, SpectralPoint, energy_from_x,
                    validate_params, x_from_energy)
from .gfunction import (DEFAULT_TRUNCATION, GPair, KSeries, ResiduePair, Truncation,
                        f_coeff, g_pair, g_values, juddian_constraint, k_coeffs,
                        numerical_residue, residue_pair)
from .rootfinder import (BRANCH_PARITY, Branch, Bracket, RootResult, refine_root,
                         regular_spectrum, scan_brackets)
from .oracle import (FockTruncation, OracleSpectrum, build_hamiltonian, degeneracy_count,
                     oracle_spectrum, parity_reduce)
from .eigensolver import eigenvalues
from .contour import ContourSet, count_components
from .exceptional import (ExceptionalClass, PlaneGrid, classify_point, juddian_locus,
                          nondegenerate_locus)
from .spectrum import compute_spectrum

__version__ = "0.1.0"
