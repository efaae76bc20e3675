"""
Merging groups of collinear centers
===================================

For centers on a line, collapsing any subgroup gives the amplitude of the
scene in which that subgroup is one delta with the summed coupling. Merging
pair by pair or all at once gives the same answer.
"""

import numpy as np

from deltascatter import DirectionPair, make_scene, merge_scatterers, scattering_amplitude
from deltascatter.coincidence import merge_group, merge_sequential, verify_merge_invariance

rng = np.random.default_rng(7)
dirs = DirectionPair(0.4, 2.0, 0.3, 1.1)

for dim in (2, 3):
    u = rng.normal(size=dim)
    u /= np.linalg.norm(u)
    pos = np.outer(np.sort(rng.uniform(0, 4, 6)), u)
    z = rng.uniform(0.3, 2, 6) + 1j * rng.uniform(-0.5, 0.5, 6)
    scene = make_scene(dim, 1.1, pos, z)
    for group in ([0, 1], [2, 4, 5], [0, 1, 2, 3, 4, 5]):
        report = verify_merge_invariance(scene, group, dirs)
        seq = scattering_amplitude(merge_sequential(scene, group), dirs).f
        one = scattering_amplitude(merge_group(scene, group), dirs).f
        print(f"{dim}D group {group}: collapsed vs merged {report.rel_err:.1e}, "
              f"sequential vs one-shot {abs(seq - one) / abs(one):.1e}")

# tolerance-based clustering of nearly coincident centers
scene = make_scene(2, 1.0, [(0, 0), (1e-3, 0), (2e-3, 0), (1, 0)], [1, 2, 3, 4])
plan = merge_scatterers(scene, 1.5e-3)
print("groups:", plan.groups)
for s in plan.merged_scene.scatterers:
    print("  position", s.position, "coupling", s.coupling)
