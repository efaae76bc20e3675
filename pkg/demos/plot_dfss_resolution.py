"""
Finite kernels fix the coincidence limit
========================================

With the J0 (2D) and sinc (3D) off-diagonal kernels the interaction matrix
stays finite as two centers merge, and the amplitude tends to that of one
delta carrying z1 + z2.
"""

import numpy as np

from deltascatter import DirectionPair, closed_form_single, coincidence_sweep, make_scene

z1, z2, k = 1 + 0.5j, 2 - 0.3j, 1.3
grid = np.logspace(-1, -7, 7) / k

for dim, pos, dirs in (
    (2, [(0, 0), (0, 1)], DirectionPair(0.7, 2.1)),
    (3, [(0, 0, 0), (1, 0, 0)], DirectionPair(0.9, 1.7, 0.4, 2.5)),
):
    study = coincidence_sweep(make_scene(dim, k, pos, [z1, z2]), (0, 1), grid, dirs)
    single = closed_form_single(dim, "dfss", z1 + z2, pos[0], k, dirs).f
    print(f"{dim}D   merged f = {single:.10f}")
    for kl, err in zip(study.k_ell, study.rel_err):
        print(f"   k l = {kl:7.0e}   relative distance {err:9.2e}")
    print(f"   fitted power of k l: {study.convergence_rate:.3f}")
