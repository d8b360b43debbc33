"""
Counting faces of min(E, F) for two polygons
============================================

For homogenized polygons with m and n vertices the projective tensor
product has m*n extremal rays, and each facet of the form F_(k,l) holds
2m+2n-4 of them.  The intersection C of four such facets contains only 4
rays but lies in more facets than the four F_(k,l) that cut it out.  One
of the extra facets is a functional of matrix rank at least 2, which is
an extremal ray of max(dual E, dual F) that is not an elementary tensor.
"""

import random

from conetensor import ratlin as rl
from conetensor.corpus import random_polygon
from conetensor.tensorcone import facet_F, obstruction_3x3, projective_cone, tensor_rank

rng = random.Random(2024)
E, F = random_polygon(5, rng), random_polygon(6, rng)
m, n = E.m, F.m
print(f"E: {m}-gon with vertices", [rl.vec_to_json(r[:2]) for r in E.cyclic_rays])
print(f"F: {n}-gon with vertices", [rl.vec_to_json(r[:2]) for r in F.cyclic_rays])

tmin = projective_cone(E, F)
print(f"\nmin(E, F) has {len(tmin.rays)} extremal rays (m*n = {m * n})")

d = facet_F(E, F, 1, 1)
print(f"F_(1,1) contains {len(d.tight_rays)} of them (2m+2n-4 = {2 * m + 2 * n - 4}):")
print("   ", sorted(d.tight_rays))

ob = obstruction_3x3(E, F, tmin)
print(f"\nC = F11 n F12 n F33 n F34 has {len(ob.c_tight)} rays: {sorted(ob.c_tight)}")
print(f"dim C = {ob.c_dim}; facets of the F form through C: {len(ob.c_containing_F)}")
print(f"facets of min(E, F) through C: {ob.c_containing_facets} (at least 9 - dim C)")

f = ob.extra_functional
print(f"\nextra facet functional, rank {tensor_rank(f)}:")
for row in f.matrix:
    print("   ", [rl.rat_str(x) for x in row])
