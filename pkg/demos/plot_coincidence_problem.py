"""
The coincidence problem
=======================

Keep the renormalized couplings of two centers fixed and bring the centers
together. The standard amplitude does not approach that of a single delta
with the summed coupling: it goes to zero, like 1/|ln kl| in two dimensions
and like kl in three.
"""

import numpy as np

from deltascatter import DirectionPair, coincidence_sweep, make_scene
from deltascatter.svgplot import polyline_svg

grid = np.logspace(-1, -10, 10)
dirs = DirectionPair(0.6, 1.4, 0.3, 0.8)

s2 = coincidence_sweep(make_scene(2, 1.0, [(0, 0), (0, 1)], [10, 10], "standard"), (0, 1), grid,
                       dirs)
s3 = coincidence_sweep(make_scene(3, 1.0, [(0, 0, 0), (1, 0, 0)], [10, 10], "standard"), (0, 1),
                       grid, dirs)

print(f"{'k l':>8} {'|f| 2D':>12} {'|f| 2D * |ln kl|':>18} {'|f| 3D':>12} {'|f| 3D / kl':>12}")
for kl, a2, a3 in zip(s2.k_ell, np.abs(s2.amplitudes), np.abs(s3.amplitudes)):
    print(f"{kl:8.0e} {a2:12.5e} {a2 * abs(np.log(kl)):18.5f} {a3:12.5e} {a3 / kl:12.5f}")

print("2D fit C/|ln kl|: C = %.4f, max residual %.3f" % s2.fit_inverse_log())
print("3D fit C kl:      C = %.4f, max residual %.4f" % s3.fit_linear())

with open("coincidence_problem_2d.svg", "w") as fh:
    fh.write(polyline_svg(s2.k_ell, np.abs(s2.amplitudes), log_x=True, xlabel="k l",
                          title="standard 2D, fixed renormalized couplings"))
