"""
One point scatterer
===================

A single delta scatterer in the plane scatters isotropically: the modulus
of f does not depend on the angle, only its phase does once the center is
moved off the origin.
"""

import math

import numpy as np

from deltascatter import DirectionPair, closed_form_single, make_scene, scattering_amplitude

k = 1.0
z = 1.0 + 0.5j
scene = make_scene(2, k, [(0.4, -0.2)], [z])

# matrix path and closed form side by side
print(f"{'theta':>8} {'|f|':>12} {'arg f':>10} {'closed form diff':>18}")
for theta in np.linspace(0, 2 * math.pi, 9):
    dirs = DirectionPair(theta0=0.0, theta=theta)
    f = scattering_amplitude(scene, dirs).f
    g = closed_form_single(2, "dfss", z, (0.4, -0.2), k, dirs).f
    print(f"{theta:8.3f} {abs(f):12.8f} {np.angle(f):10.5f} {abs(f - g):18.2e}")

# the resonance: 1/z + i/4 = 0 makes A singular
try:
    scattering_amplitude(make_scene(2, k, [(0, 0)], [4j]), DirectionPair())
except Exception as exc:
    print(type(exc).__name__, "at z = 4i")
