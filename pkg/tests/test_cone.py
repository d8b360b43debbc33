import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from conetensor import ratlin as rl
from conetensor.cone import (Cone, ConeError, ConeH, ConeV, NotConvexPosition, NotProper, cone_equal,
                             cone_from_json, contains_cone, dd_h_to_v, dd_v_to_h, direct_sum, dual,
                             extremal_rays, find_vertex_functional, homogenize_polytope,
                             lineality_decomposition, load_cone, polygon_homogenization,
                             proper_reduction, regular_polygon, simplex_cone,
                             strictly_positive_functional, as_polygon_cone)
from conetensor.lp import Inside, Outside, cone_membership
from conftest import (cdd_facets, cdd_rays, generator_cones, incidence, inequality_cones,
                      proper_generating_cones, small_int)

SQUARE_RAYS = [(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)]


def square():
    return Cone.from_generators(SQUARE_RAYS)


def F(*xs):
    return tuple(Fraction(x) for x in xs)


# -- double description examples -------------------------------------------

def test_v_to_h_orthant():
    h = dd_v_to_h(ConeV(3, rl.identity(3)))
    assert sorted(h.inequalities) == sorted(rl.identity(3))


def test_v_to_h_square():
    h = dd_v_to_h(ConeV(3, tuple(rl.vec(r) for r in SQUARE_RAYS)))
    assert len(h.inequalities) == 4
    for a in h.inequalities:
        vals = [rl.dot(a, r) for r in SQUARE_RAYS]
        assert all(v >= 0 for v in vals)
        assert sum(v == 0 for v in vals) == 2


def test_v_to_h_line_gives_an_equation():
    # cone{e1, -e1} is the line x2 = 0: both x2 >= 0 and -x2 >= 0 hold
    h = dd_v_to_h(ConeV(2, (F(1, 0), F(-1, 0))))
    assert sorted(h.inequalities) == sorted([F(0, 1), F(0, -1)])
    c = Cone(2, generators=[(1, 0), (-1, 0)])
    assert c.equations == (F(0, 1),) and c.facets == ()
    assert c.lineality == (F(1, 0),)
    assert c.contains((5, 0)) and not c.contains((0, 1)) and not c.contains((0, -1))


def test_h_to_v_mirrors():
    v = dd_h_to_v(ConeH(3, rl.identity(3)))
    assert sorted(v.generators) == sorted(rl.identity(3))
    sq = square()
    v = dd_h_to_v(ConeH(3, sq.facets))
    assert sorted(rl.canonical_ray(g) for g in v.generators) == sorted(sq.rays)
    assert len(v.generators) == 4
    v = dd_h_to_v(ConeH(2, (F(0, 1), F(0, -1))))
    assert cone_equal(Cone(2, generators=v.generators), Cone(2, generators=[(1, 0), (-1, 0)]))


# -- dual -----------------------------------------------------------------

def test_dual_orthant_self_dual():
    o = Cone.orthant(3)
    assert cone_equal(dual(o), o)


def test_dual_square():
    d = dual(square())
    expected = Cone.from_generators([(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)])
    assert cone_equal(d, expected)
    assert not cone_equal(d, square())


def test_dual_half_space():
    d = dual(Cone(2, inequalities=[(0, 1)]))
    assert d.rays == (F(0, 1),) and d.lineality == ()
    assert d.equations == (F(1, 0),)


# -- extremal rays and predicates -----------------------------------------

def test_extremal_rays_examples():
    assert len(extremal_rays(square())) == 4
    c = Cone.from_generators(list(rl.identity(3)) + [(1, 1, 1)])
    assert extremal_rays(c) == tuple(sorted(rl.identity(3)))
    plane = Cone(2, inequalities=[])
    assert extremal_rays(plane) == () and len(plane.lineality) == 2


def test_proper_generating_examples():
    o = Cone.orthant(3)
    assert o.is_proper() and o.is_generating()
    h = Cone(2, inequalities=[(0, 1)])
    assert h.is_generating() and not h.is_proper()
    r = Cone(2, generators=[(1, 1)])
    assert r.is_proper() and not r.is_generating()


def test_simplex_examples():
    assert Cone.orthant(4).is_simplex()
    assert not square().is_simplex()
    two = Cone(3, generators=[(1, 0, 0), (0, 1, 0)])
    assert not two.is_simplex() and two.is_partial_simplex()
    assert Cone.zero(0).is_simplex()
    assert not Cone.whole_space(2).is_proper()


def test_partial_simplex_examples():
    assert Cone.orthant(3).is_partial_simplex()
    assert Cone(3, generators=[(1, 2, 0), (0, 1, 5)]).is_partial_simplex()
    assert not square().is_partial_simplex()
    assert not Cone(3, inequalities=[(0, 0, 1)]).is_partial_simplex()


def test_simplex_cone_requires_basis():
    assert simplex_cone([(1, 0), (1, 1)]).is_simplex()
    with pytest.raises(ConeError):
        simplex_cone([(1, 0), (2, 0)])


# -- decompositions -------------------------------------------------------

def _minkowski_reproduces(c, lin, part):
    total = Cone(c.dim, generators=list(part.all_generators) + list(lin) + [rl.neg(v) for v in lin])
    return cone_equal(total, c)


def test_lineality_decomposition_proper():
    lin, part = lineality_decomposition(square())
    assert lin == () and cone_equal(part, square())


def test_lineality_decomposition_plane():
    lin, part = lineality_decomposition(Cone.whole_space(2))
    assert len(lin) == 2 and part.rays == () and part.lineality == ()


def test_lineality_decomposition_half_space():
    c = Cone(3, inequalities=[(0, 0, 1)])
    lin, part = lineality_decomposition(c)
    assert len(lin) == 2 and part.is_proper()
    assert part.rays == (F(0, 0, 1),)
    assert all(rl.dot(r, l) == 0 for r in part.rays for l in lin)
    assert _minkowski_reproduces(c, lin, part)


@settings(max_examples=40, deadline=None)
@given(inequality_cones(max_dim=4, max_ineqs=4))
def test_lineality_decomposition_property(c):
    lin, part = lineality_decomposition(c)
    assert part.is_proper()
    assert all(rl.dot(r, l) == 0 for r in part.rays for l in lin)
    assert _minkowski_reproduces(c, lin, part)


def _is_retract(c, red):
    gens_ok = all(red.reduced.contains(rl.matvec(red.push, g)) for g in c.all_generators)
    back_ok = all(c.contains(rl.matvec(red.pull, g)) for g in red.reduced.all_generators)
    k = red.reduced.dim
    return gens_ok and back_ok and (k == 0 or rl.matmul(red.push, red.pull, k) == rl.identity(k))


def test_proper_reduction_proper_generating():
    red = proper_reduction(Cone.orthant(3))
    assert red.reduced.dim == 3 and red.reduced.is_simplex()
    assert red.push == rl.identity(3) and red.pull == rl.identity(3)
    sq = square()
    red = proper_reduction(sq)
    assert red.reduced.dim == 3 and len(red.reduced.rays) == 4 and _is_retract(sq, red)


def test_proper_reduction_partial_simplex():
    c = Cone(3, generators=[(1, 0, 0), (0, 1, 0)])
    red = proper_reduction(c)
    assert red.reduced.dim == 2
    assert cone_equal(red.reduced, Cone.orthant(2))
    assert _is_retract(c, red)


def test_proper_reduction_whole_space():
    assert proper_reduction(Cone.whole_space(3)).reduced.dim == 0


@settings(max_examples=30, deadline=None)
@given(generator_cones(max_dim=4, max_gens=5))
def test_proper_reduction_property(c):
    assume(c.is_proper())
    red = proper_reduction(c)
    if red.reduced.dim:
        assert red.reduced.is_proper() and red.reduced.is_generating()
    assert _is_retract(c, red)


def test_strictly_positive_functional_examples():
    assert strictly_positive_functional(Cone.orthant(3)) == F(1, 1, 1)
    f = strictly_positive_functional(square())
    assert f[0] == 0 and f[1] == 0 and f[2] > 0
    with pytest.raises(NotProper):
        strictly_positive_functional(Cone(2, inequalities=[(0, 1)]))


@settings(max_examples=40, deadline=None)
@given(generator_cones(max_dim=4, max_gens=6))
def test_strictly_positive_functional_property(c):
    assume(c.is_proper())
    f = strictly_positive_functional(c)
    assert all(rl.dot(f, r) > 0 for r in c.rays)


def test_cone_equal_examples():
    assert cone_equal(square(), Cone.from_generators(list(reversed(SQUARE_RAYS))))
    assert cone_equal(Cone.orthant(2), dual(Cone.orthant(2)))
    assert not cone_equal(square(), dual(square()))
    with pytest.raises(rl.DimensionError):
        cone_equal(Cone.orthant(2), Cone.orthant(3))


# -- polygons ---------------------------------------------------------------

def test_polygon_square():
    c = polygon_homogenization([(1, 1), (-1, 1), (-1, -1), (1, -1)])
    assert c.m == 4 and len(c.rays) == 4 and len(c.facets) == 4
    assert cone_equal(c, square())


def test_polygon_triangle_is_simplex():
    assert polygon_homogenization([(0, 0), (1, 0), (0, 1)]).is_simplex()


@pytest.mark.parametrize("k", [3, 4, 5, 6, 7, 8, 12])
def test_regular_polygon_tightness_table(k):
    c = regular_polygon(k)
    assert len(c.rays) == k and len(c.facets) == k
    for i, phi in enumerate(c.cyclic_facets):
        tight = {j for j, r in enumerate(c.cyclic_rays) if rl.dot(phi, r) == 0}
        assert tight == {i, (i + 1) % k}
        assert all(rl.dot(phi, r) >= 0 for r in c.cyclic_rays)


def test_polygon_rejects_bad_input():
    with pytest.raises(NotConvexPosition):
        polygon_homogenization([(0, 0), (1, 0), (1, 1), (0, 1), (Fraction(1, 2), Fraction(1, 2))])
    with pytest.raises(NotConvexPosition):
        polygon_homogenization([(0, 0), (0, 1), (1, 0)])  # clockwise
    with pytest.raises(NotConvexPosition):
        polygon_homogenization([(0, 0), (1, 0)])


def test_as_polygon_cone_recovers_cyclic_order():
    c = Cone.from_generators([SQUARE_RAYS[i] for i in (0, 2, 1, 3)])
    p = as_polygon_cone(c)
    for i, phi in enumerate(p.cyclic_facets):
        assert {j for j, r in enumerate(p.cyclic_rays) if rl.dot(phi, r) == 0} == {i, (i + 1) % 4}


def test_vertex_functional():
    phi = find_vertex_functional(square(), 0)
    x = square().rays
    assert rl.dot(phi, x[0]) == -1 and all(rl.dot(phi, r) > 0 for r in x[1:])


# -- json ---------------------------------------------------------------------

def test_json_round_trip(tmp_path):
    for c in (square(), Cone(3, inequalities=[(0, 0, 1)]), Cone.zero(2)):
        for form in ("generators", "inequalities"):
            data = json.loads(json.dumps(c.to_json(form)))
            assert all(isinstance(x, str) for row in data[form] for x in row)
            assert cone_equal(cone_from_json(data), c)
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"dim": 2, "generators": [["1/2", "0"], ["0", "3"]]}))
    assert cone_equal(load_cone(p), Cone.orthant(2))


def test_json_needs_exactly_one_key():
    with pytest.raises(ConeError):
        cone_from_json({"dim": 2})
    with pytest.raises(ConeError):
        cone_from_json({"dim": 2, "generators": [], "inequalities": []})


# -- against cdd and general properties -------------------------------------------

@settings(max_examples=120, deadline=None)
@given(generator_cones(max_dim=5, max_gens=8))
def test_facets_match_cdd(c):
    gens = [g for g in c.generators if not rl.is_zero(g)]
    facets, neq = cdd_facets(gens, c.dim)
    assert len(c.equations) == neq
    assert incidence(c.facets, gens) == incidence(facets, gens)


@settings(max_examples=120, deadline=None)
@given(inequality_cones(max_dim=5, max_ineqs=8))
def test_rays_match_cdd(c):
    ineqs = [a for a in c.inequalities if not rl.is_zero(a)]
    rays, nlin = cdd_rays(ineqs, c.dim)
    assert len(c.lineality) == nlin
    assert incidence(c.rays, ineqs) == incidence(rays, ineqs)


@settings(max_examples=80, deadline=None)
@given(st.one_of(generator_cones(), inequality_cones()))
def test_round_trip_and_double_dual(c):
    h = dd_v_to_h(ConeV(c.dim, c.generators))
    back = dd_h_to_v(h)
    assert cone_equal(Cone(c.dim, generators=back.generators), c)
    assert cone_equal(Cone(c.dim, inequalities=h.inequalities), c)
    assert cone_equal(dual(dual(c)), c)
    # dual computed from scratch by DD on the facet list agrees
    assert cone_equal(Cone(c.dim, generators=c.all_inequalities), dual(c))


@settings(max_examples=60, deadline=None)
@given(generator_cones(max_dim=4, max_gens=6), st.lists(st.integers(0, 3), min_size=6, max_size=6),
       st.lists(small_int, min_size=4, max_size=4))
def test_membership_consistency(c, coeffs, probe):
    gens = c.generators
    for g in gens:
        assert c.contains(g)
    x = rl.lincomb([Fraction(a) for a in coeffs[:len(gens)]], gens, c.dim)
    assert c.contains(x)
    y = rl.vec(probe[:c.dim])
    v = cone_membership(y, gens)
    assert isinstance(v, Inside) == c.contains(y)


@settings(max_examples=60, deadline=None)
@given(generator_cones(max_dim=4, max_gens=6))
def test_extremal_rays_are_not_redundant(c):
    rays = c.rays
    others_lin = list(c.lineality) + [rl.neg(v) for v in c.lineality]
    for i, r in enumerate(rays):
        rest = [s for j, s in enumerate(rays) if j != i] + others_lin
        assert isinstance(cone_membership(r, rest), Outside)
    assert contains_cone(c, Cone(c.dim, generators=c.all_generators))
    assert contains_cone(Cone(c.dim, generators=c.all_generators), c)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_simplex_dual_is_simplex(rows):
    c = Cone.from_generators(rows, len(rows))
    if c.is_simplex():
        assert dual(c).is_simplex()


@settings(max_examples=40, deadline=None)
@given(proper_generating_cones())
def test_canonical_rays(c):
    for r in c.rays:
        first = next(x for x in r if x)
        assert abs(first) == 1 or r == rl.canonical_ray(r)


def test_direct_sum_and_polytope():
    c = direct_sum(square(), Cone.orthant(1))
    assert c.dim == 4 and len(c.rays) == 5 and not c.is_simplex()
    cube = homogenize_polytope([(a, b, d) for a in (0, 1) for b in (0, 1) for d in (0, 1)])
    assert len(cube.rays) == 8 and len(cube.facets) == 6
