"""
Cut-off Green's functions by quadrature
=======================================

The momentum-cut-off Green's function at the origin is evaluated directly
from its integral with a small imaginary part in the denominator, then
extrapolated to zero. The 2D result is compared with its exact closed
form; the 3D result with its leading large-cut-off form.
"""

import math

from deltascatter import oracle, renorm

for ratio in (math.sqrt(2), 2, 5, 10, 100):
    quad = oracle.quad_g_lambda_2d(ratio, 1.0)
    exact = renorm.g_lambda_zero_2d(ratio, 1.0).value
    print(f"2D  Lambda/k = {ratio:7.3f}: {quad.value:.10f}  |diff| {abs(quad.value - exact):.1e}"
          f"  ({quad.evaluations} evaluations)")

for lam in (10, 100, 1000):
    quad = oracle.quad_g_lambda_3d(lam, 1.0).value
    lead = renorm.g_lambda_zero_3d(lam, 1.0).value
    print(f"3D  Lambda/k = {lam:5d}: {quad:.8f}  leading form {lead:.8f}")

for a, k in ((1.0, 1.0), (math.pi, 1.0), (0.3, 4.0)):
    res = oracle.disk_integral(a, k)
    print(f"disk a={a:.3f} k={k}: {res.value.real:.12f} vs {oracle.disk_identity(a, k):.12f}")
