"""
The square cone: where min and max first come apart
====================================================

The cone over a square is the smallest cone that is not a simplex.  Its
projective and injective tensor squares differ, its identity map is
positive but not separable, and a positive map of negative trace exists.
Every statement printed below is checked in exact rational arithmetic.
"""

from conetensor import ratlin as rl
from conetensor.corpus import square_cone
from conetensor.lp import Outside, cone_membership
from conetensor.sep import Entangled, is_positive_map, is_separable, min_trace_positive_map
from conetensor.tensorcone import Differs, injective_cone, min_equals_max, min_generators, projective_cone

sq = square_cone()
print("rays of the square cone:", [rl.vec_to_json(r) for r in sq.rays])
print("facets:", [rl.vec_to_json(f) for f in sq.facets])

tmin = projective_cone(sq, sq)
tmax = injective_cone(sq, sq)
print(f"\nmin(sq, sq): {len(tmin.rays)} extremal rays in R^{tmin.dim}")
print(f"max(sq, sq): {len(tmax.facets)} facets, {len(tmax.rays)} extremal rays")

# rays of max that are not in min
gens = min_generators(sq, sq)
extra = [r for r in tmax.rays if isinstance(cone_membership(r, gens), Outside)]
print(f"{len(extra)} extremal rays of max(sq, sq) lie outside min(sq, sq)")

d = min_equals_max(sq, sq)
assert isinstance(d, Differs)
print("\nwitness u in max \\ min, as a 3x3 matrix:")
for row in d.witness.matrix:
    print("   ", [rl.rat_str(x) for x in row])
print("separator pairs with it to", rl.rat_str(d.separator.pair(d.witness)))

# the identity is positive, so its tensor lies in max(dual sq, sq), but it is not separable
I = rl.identity(3)
v = is_separable(I, sq, sq)
assert isinstance(v, Entangled)
w = v.witness.flat
print("\nidentity: positive =", is_positive_map(I, sq, sq), " separable = False")
print("  witness value on the identity:", rl.rat_str(rl.dot(w, rl.flatten(I))))

R = rl.mat([[-1, 0, 0], [0, -1, 0], [0, 0, 1]])
print("\n180 degree rotation: positive =", is_positive_map(R, sq, sq), " trace =", rl.trace(R))
t = min_trace_positive_map(sq)
print("minimum trace over the normalized slice:", rl.rat_str(t.value))
