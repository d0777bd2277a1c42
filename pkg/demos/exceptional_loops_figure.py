"""Juddian loops and non-degenerate lines in the (delta, g) plane for n = 0..3.

Usage: python demos/exceptional_loops_figure.py [output_dir]
"""
import os
import sys

from rabispec.exceptional import PlaneGrid, axis_intercepts, nondegenerate_locus
from rabispec.figure import build_figure
from rabispec.gfunction import G_MIN
from rabispec.rootfinder import Branch

out = sys.argv[1] if len(sys.argv) > 1 else "figure_out"
os.makedirs(out, exist_ok=True)

fig = build_figure((0, 1, 2, 3), grid_size=300)
with open(os.path.join(out, "loops.svg"), "w") as fh:
    fh.write(fig.svg())
with open(os.path.join(out, "loops_quadrant.svg"), "w") as fh:
    fh.write(fig.svg(full_plane=False))

# level n carries n closed loops once the quadrant is mirrored
for n, (closed, opened) in fig.counts().items():
    print(f"n={n}: {closed} closed Juddian loops, {opened} open arcs")

# the non-degenerate lines run into the g = 0 axis at integer delta >= n + 1
for n in range(3):
    cp, cm = nondegenerate_locus(n, PlaneGrid((0.0, n + 2.5), (G_MIN, 1.0), 300, 300))
    ints = axis_intercepts(cp, n, Branch.PLUS) + axis_intercepts(cm, n, Branch.MINUS)
    print(f"n={n}: lines meet g=0 at delta =", ", ".join(f"{d:.6f}" for d in sorted(ints)))

print("wrote", os.path.join(out, "loops.svg"))
