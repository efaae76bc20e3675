"""
Matching the two formulations
=============================

For two centers one can always choose renormalized couplings so that the
standard amplitude equals the finite-kernel one. The price is that these
couplings depend on the separation and the incident direction, and they
run to zero as the centers merge.
"""

import math

import numpy as np

from deltascatter import renorm
from deltascatter.amplitude import closed_form_double_2d

z1, z2, k, theta0 = 1.0, 2.0, 1.0, 0.3

print(f"{'k l':>8} {'z1~':>26} {'z2~':>26} {'round trip':>11}")
for kl in np.logspace(0, -8, 9):
    ell = kl / k
    zt = renorm.matched_coupling_2d(z1, z2, k, ell, theta0)
    std = closed_form_double_2d(*zt, ell, k, theta0, 1.0, "standard")[2].f
    dfss = closed_form_double_2d(z1, z2, ell, k, theta0, 1.0, "dfss")[2].f
    print(f"{kl:8.0e} {zt[0]:26.6e} {zt[1]:26.6e} {abs(std - dfss) / abs(dfss):11.1e}")

# leading behaviour 2 pi eta^(2n-3) / ln(kl), approached only logarithmically
kl = 1e-8
zt = renorm.matched_coupling_2d(z1, z2, k, kl, theta0)
lead = renorm.asymptotic_coupling(z1, z2, k, kl, 2)
L = math.log(kl)
for n, other in ((0, z2), (1, z1)):
    c = np.euler_gamma - math.log(2) + 2 * math.pi / other
    print(f"n={n + 1}: z~/lead = {(zt[n] / lead[n]).real:.5f}, L/(L + c) = {L / (L + c):.5f}")
