"""Exceptional levels at x = n omega: which pole gets lifted, and how the oracle sees it."""
from rabispec import (FockTruncation, compute_spectrum, degeneracy_count, numerical_residue,
                      oracle_spectrum, residue_pair, validate_params)
from rabispec.exceptional import PlaneGrid, classify_point, nondegenerate_points
from rabispec.gfunction import G_MIN
from rabispec.rootfinder import Branch


def show(n, p):
    r = residue_pair(n, p)
    num = numerical_residue(n, p)
    e = n * p.omega - p.shift
    deg = degeneracy_count(oracle_spectrum(p, FockTruncation(80), 10), e, 2e-6)
    print(f"g={p.g:.6f} delta={p.delta:.6f}  n={n}  class={classify_point(n, p).value}")
    print(f"   K_n(n omega)={r.k_n_at_pole:+.3e}   R+={r.r_plus:+.3e}  R-={r.r_minus:+.3e}")
    print(f"   numerical limit   R+={num[0]:+.3e}  R-={num[1]:+.3e}")
    print(f"   oracle levels at E={e:.6f}: {deg}")


# 4 g^2 + delta^2 = omega^2: K_1(omega) = 0 and both poles at x = omega disappear
show(1, validate_params(1.0, 0.3, 0.8))

# a generic point: both residues finite, nothing at x = omega
show(1, validate_params(1.0, 0.5, 0.5))

# points on the c_+ = 0 and c_- = 0 lines of level 0: only one pole is lifted
grid = PlaneGrid((0.0, 2.5), (G_MIN, 1.0), 200, 200)
for branch in Branch:
    show(0, nondegenerate_points(0, grid, branch, 1)[0])

# the full spectrum merges both kinds of level
print()
for row in compute_spectrum(validate_params(1.0, 0.3, 0.8), 6):
    e = row.energy
    print(f"{row.index}  {e.value:+.12f}  {e.parity.value}  {e.kind.value:12s} {row.method}")
