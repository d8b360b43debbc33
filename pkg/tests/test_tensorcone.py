import json
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from conetensor import ratlin as rl
from conetensor.cone import Cone, cone_equal, dual, regular_polygon, simplex_cone
from conetensor.corpus import random_polygon, square_cone
from conetensor.lp import Outside, cone_membership
from conetensor.tensorcone import (Differs, Equal, NotPolygonCone, PreconditionViolated, TensorElement,
                                   facet_F, in_max, injective_cone, min_equals_max, min_generators,
                                   obstruction_3x3, projective_cone, swap, tensor_rank, tensor_vec,
                                   verify_differs, verify_duality)
from conftest import generator_cones, proper_generating_cones, sym


def pattern(m, n, k, l):
    """1-based cross-shaped index set: rows k, k+1 and columns l, l+1, cyclically."""
    rows = {(k - 1) % m + 1, k % m + 1}
    cols = {(l - 1) % n + 1, l % n + 1}
    return {(i, j) for i in range(1, m + 1) for j in range(1, n + 1) if i in rows or j in cols}


# -- tensor cones -------------------------------------------------------------

def test_orthant_products():
    o2 = Cone.orthant(2)
    assert cone_equal(projective_cone(o2, o2), Cone.orthant(4))
    assert cone_equal(injective_cone(o2, o2), Cone.orthant(4))


def test_square_min_has_16_rays():
    sq = square_cone()
    tmin = projective_cone(sq, sq)
    assert tmin.dim == 9 and len(tmin.rays) == 16
    expected = {rl.canonical_ray(tensor_vec(a, b)) for a in sq.rays for b in sq.rays}
    assert set(tmin.rays) == expected


def test_zero_cone_product():
    t = projective_cone(Cone.zero(2), square_cone())
    assert t.rays == () and t.lineality == () and t.dim == 6


def test_square_max_strictly_contains_min():
    sq = square_cone()
    tmax = injective_cone(sq, sq)
    assert len(tmax.inequalities) == 16
    gens = min_generators(sq, sq)
    outside = [r for r in tmax.rays if isinstance(cone_membership(r, gens), Outside)]
    assert outside
    assert all(in_max(g, sq, sq) for g in gens)


def test_whole_space_factor():
    E = square_cone()
    W = Cone.whole_space(2)
    assert cone_equal(injective_cone(E, W), Cone.whole_space(6))
    assert cone_equal(projective_cone(E, W), Cone.whole_space(6))


def test_subspace_factor_gives_subspace():
    line = Cone(2, generators=[(1, 1), (-1, -1)])
    t = projective_cone(square_cone(), line)
    assert t.rays == () and len(t.lineality) == 3


# -- min = max --------------------------------------------------------------------

def test_simplex_times_square_equal():
    assert isinstance(min_equals_max(Cone.orthant(3), square_cone()), Equal)
    assert isinstance(min_equals_max(square_cone(), simplex_cone([(1, 0, 0), (1, 1, 0), (1, 2, 3)])), Equal)


@pytest.mark.parametrize("method", ["auto", "dd"])
def test_square_square_differs(method):
    sq = square_cone()
    d = min_equals_max(sq, sq, method=method)
    assert isinstance(d, Differs)
    assert verify_differs(sq, sq, d)
    # independent: the witness is not a nonnegative combination of the generators
    assert isinstance(cone_membership(d.witness.flat, min_generators(sq, sq)), Outside)


def test_pentagon_square_differs():
    E, F = regular_polygon(5), square_cone()
    d = min_equals_max(E, F)
    assert isinstance(d, Differs) and verify_differs(E, F, d)
    # the witness is an extremal ray of the injective cone
    tight = [a for a in injective_cone(E, F).inequalities if rl.dot(a, d.witness.flat) == 0]
    assert sym(tight).rank() == 8


def test_verify_differs_rejects_tampering():
    sq = square_cone()
    d = min_equals_max(sq, sq)
    bad = Differs(d.witness, TensorElement(3, 3, rl.mat_scale(-1, d.separator.matrix)))
    assert not verify_differs(sq, sq, bad)


# -- duality ------------------------------------------------------------------------

@pytest.mark.parametrize("E,F", [
    (square_cone(), square_cone()),
    (Cone.orthant(2), Cone.orthant(3)),
    (regular_polygon(6), regular_polygon(5)),
])
def test_duality(E, F):
    rep = verify_duality(E, F)
    assert rep.min_dual_is_max_of_duals and rep.max_dual_is_min_of_duals and rep.min_closed


# -- faces of the projective cone of two polygons --------------------------------

def test_facet_counts_6_8():
    rng = random.Random(3)
    E, F = random_polygon(6, rng), random_polygon(8, rng)
    for k in range(1, 7):
        for l in range(1, 9):
            d = facet_F(E, F, k, l)
            assert len(d.tight_rays) == 2 * 6 + 2 * 8 - 4 == 24
            assert set(d.tight_rays) == pattern(6, 8, k, l)


def test_facet_counts_4_4_and_wrap_around():
    sq = square_cone()
    for k in range(1, 5):
        for l in range(1, 5):
            assert len(facet_F(sq, sq, k, l).tight_rays) == 12
    d = facet_F(sq, sq, 4, 4)
    assert (1, 2) in d.tight_rays and (2, 1) in d.tight_rays and (2, 2) not in d.tight_rays


def test_facet_F_is_a_facet():
    E, F = regular_polygon(5), square_cone()
    d = facet_F(E, F, 2, 3)
    vecs = [tensor_vec(E.cyclic_rays[i - 1], F.cyclic_rays[j - 1]) for i, j in d.tight_rays]
    assert sym(vecs).rank() == 8


def test_facet_F_requires_polygons():
    with pytest.raises(NotPolygonCone):
        facet_F(Cone.orthant(3), square_cone(), 1, 1)


def test_obstruction_squares():
    sq = square_cone()
    rep = obstruction_3x3(sq, sq)
    assert len(rep.c_tight) == 4
    assert len(rep.c_containing_F) == 4
    assert rep.c_containing_facets >= 9 - rep.c_dim
    assert rep.c_containing_facets > 4
    assert rep.min_ray_count == 16
    assert tensor_rank(rep.extra_functional) >= 2
    # independent re-check: a facet of the projective cone (nonnegative,
    # tight on a rank-8 set) and so an extremal ray of max(dual, dual)
    phi = rep.extra_functional.flat
    gens = min_generators(sq, sq)
    assert all(rl.dot(phi, g) >= 0 for g in gens)
    assert sym([g for g in gens if rl.dot(phi, g) == 0]).rank() == 8
    assert in_max(phi, dual(sq), dual(sq))
    assert sym(rep.extra_functional.matrix).rank() >= 2
    assert rep.ok


def test_obstruction_pentagon_square():
    rep = obstruction_3x3(regular_polygon(5), square_cone())
    assert len(rep.c_tight) == 4 and len(rep.c_containing_F) == 4 and rep.ok


def test_obstruction_precondition():
    with pytest.raises(PreconditionViolated):
        obstruction_3x3(square_cone(), regular_polygon(3))


# -- tensor elements --------------------------------------------------------------

def test_tensor_rank_examples():
    assert tensor_rank(TensorElement.elementary((1, 2, 3), (4, 5))) == 1
    assert tensor_rank(TensorElement(3, 3, rl.identity(3))) == 3


def test_tensor_element_pairing_and_json():
    u = TensorElement(2, 3, rl.mat([[1, Fraction(1, 2), 0], [0, -3, 2]]))
    phi, psi = rl.vec([2, -1]), rl.vec([1, 1, 3])
    assert u.pair(TensorElement.elementary(phi, psi)) == rl.dot(phi, rl.matvec(u.matrix, psi))
    data = json.loads(json.dumps(u.to_json()))
    assert data["matrix"][0][1] == "1/2"
    assert TensorElement.from_json(data) == u


# -- properties ---------------------------------------------------------------

small_cones = generator_cones(min_dim=1, max_dim=3, max_gens=4)


@settings(max_examples=40, deadline=None)
@given(small_cones, small_cones)
def test_min_inside_max(E, F):
    for g in min_generators(E, F):
        assert in_max(g, E, F)


@settings(max_examples=25, deadline=None)
@given(small_cones, small_cones)
def test_min_proper_and_symmetric(E, F):
    tmin = projective_cone(E, F)
    if E.is_proper() and F.is_proper():
        assert tmin.is_proper()
    swapped = {rl.canonical_ray(swap(TensorElement.from_flat(r, E.dim, F.dim)).flat) for r in tmin.rays}
    assert swapped == set(projective_cone(F, E).rays)


@settings(max_examples=25, deadline=None)
@given(proper_generating_cones(max_dim=3), proper_generating_cones(max_dim=3))
def test_base_property(E, F):
    from conetensor.cone import strictly_positive_functional as spf
    fg = tensor_vec(spf(E), spf(F))
    assert all(rl.dot(fg, r) > 0 for r in projective_cone(E, F).rays)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), proper_generating_cones(max_dim=3))
def test_simplex_factor_gives_equal(n, F):
    assert isinstance(min_equals_max(Cone.orthant(n), F), Equal)
    assert isinstance(min_equals_max(F, Cone.orthant(n)), Equal)


@settings(max_examples=15, deadline=None)
@given(proper_generating_cones(max_dim=3),
       st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=2))
def test_partial_simplex_identity(E, rows):
    F = Cone.from_generators(rows, 3)
    assume(F.is_partial_simplex() and F.rays)
    assert isinstance(min_equals_max(dual(E), F), Equal)
