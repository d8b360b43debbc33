"""
Retracts, and the Lorentz cone through its polyhedral shadows
=============================================================

A retraction pair (T, S) with S T = id and both maps positive carries
non-simplex behaviour from a small cone up into a bigger one.  The cube
cone has a square-cone facet, so min != max for the cube follows from
the square.  The Lorentz cone L^3 is approximated from inside by cones
over inscribed polygons; the rotation diag(-1,-1,1) keeps L^3 invariant
and has trace -1, so the identity of L^3 is not separable either.
"""

from conetensor import ratlin as rl
from conetensor.corpus import cube_cone, square_cone
from conetensor.lorentz import (inner_polyhedral_approx, lorentz_membership, lorentz_retract_maps,
                                outside_ray_for_approx, preserves_lorentz_form, rotation_witness, s2_iso)
from conetensor.retract import facet_retract, retract_transfer, three_dim_retract_scan, verify_retraction

G = cube_cone()
r = next(facet_retract(G, i) for i in range(len(G.facets)) if len(facet_retract(G, i).sub.rays) == 4)
print("cube facet retract:", verify_retraction(r).reason, f"(sub-cone has {len(r.sub.rays)} rays)")
rep = retract_transfer(G, G, r, r)
print("verdict on the facet:", type(rep.sub_verdict).__name__, "  on the cube:", type(rep.ambient_verdict).__name__,
      "  certified:", rep.certified)

scan = three_dim_retract_scan(G)
print("a 3-dimensional non-simplex retract of the cube:", len(scan.sub.rays), "rays")
print("same scan on the square cone returns the identity:",
      three_dim_retract_scan(square_cone()).T == rl.identity(3))

print("\nLorentz cone L^3 = {z >= sqrt(x^2 + y^2)}")
for k in (4, 8, 12):
    C = inner_polyhedral_approx(k)
    p = outside_ray_for_approx(k)
    print(f"  inscribed {k}-gon: all rays in L^3: {all(lorentz_membership(x).inside for x in C.rays)};"
          f" boundary ray {rl.vec_to_json(p)} missed: {not C.contains(p)}")

W = rotation_witness()
print("rotation preserves the form:", preserves_lorentz_form(W), " trace:", rl.trace(W))

# 2x2 symmetric matrices [[a, b], [b, c]] are PSD exactly when s2_iso lands in L^3
for a, b, c in ((1, 0, 1), (1, 1, 1), (1, 2, 1)):
    print(f"  [[{a},{b}],[{b},{c}]] -> {rl.vec_to_json(s2_iso(a, b, c))}: in L^3 =",
          lorentz_membership(s2_iso(a, b, c)).inside)

T, S = lorentz_retract_maps(3, 5)
print("\nL^3 sits in L^5 by padding; S T = id:", rl.matmul(S, T, 3) == rl.identity(3))
print("padded rotation T W S has trace", rl.trace(rl.matmul(rl.matmul(T, W, 3), S, 5)))
