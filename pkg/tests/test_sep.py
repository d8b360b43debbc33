import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conetensor import ratlin as rl
from conetensor.cone import Cone, NotProperGenerating, dual, regular_polygon, simplex_cone
from conetensor.corpus import square_cone
from conetensor.lp import Inside, cone_membership
from conetensor.sep import (Entangled, NotPositive, Separable, Term, caratheodory_reduce,
                            check_min_equals_max_equivalences, factor_through_simplex, is_positive_map,
                            is_separable, min_trace_positive_map, verify_factorization, verify_verdict)
from conetensor.suites import random_positive_map
from conetensor.tensorcone import Equal, tensor_vec
from conftest import proper_generating_cones

SQ = square_cone()


def diag(*xs):
    return rl.mat([[x if i == j else 0 for j in range(len(xs))] for i, x in enumerate(xs)])


# the eight symmetries of the square cone
SQUARE_SYMMETRIES = [rl.mat([[a, 0, 0], [0, b, 0], [0, 0, 1]]) for a in (1, -1) for b in (1, -1)] + \
    [rl.mat([[0, a, 0], [b, 0, 0], [0, 0, 1]]) for a in (1, -1) for b in (1, -1)]


def positive_from_simplex(E, F, rng):
    """Random positive map from a simplex cone E: its rays go to random
    nonnegative combinations of the rays of F."""
    cols = []
    for _ in E.rays:
        y = rl.zeros(F.dim)
        for r in F.rays:
            y = rl.add(y, rl.scale(Fraction(rng.randint(0, 3)), r))
        cols.append(y)
    Y = rl.transpose(tuple(cols), F.dim)
    B = rl.transpose(E.rays, E.dim)
    return rl.matmul(Y, rl.inverse(B), E.dim)


def random_square_positive(rng):
    """Nonnegative combination of square symmetries (mostly not separable)."""
    T = rl.zero_mat(3, 3)
    for M in SQUARE_SYMMETRIES:
        T = rl.mat_add(T, rl.mat_scale(rng.randint(0, 2), M))
    return T if any(any(r) for r in T) else rl.identity(3)


# -- positivity ---------------------------------------------------------------

def test_positive_examples():
    assert is_positive_map(rl.identity(3), Cone.orthant(3), Cone.orthant(3))
    assert is_positive_map(diag(-1, -1, 1), SQ, SQ)
    # reflection x -> -x of the square permutes its rays
    assert is_positive_map(diag(-1, 1, 1), SQ, SQ)
    assert not is_positive_map(diag(1, 1, -1), SQ, SQ)
    assert not is_positive_map(rl.mat([[2, 0, 0], [0, 1, 0], [0, 0, 1]]), SQ, SQ)


def test_positive_dimension_mismatch():
    with pytest.raises(rl.DimensionError):
        is_positive_map(rl.identity(2), SQ, SQ)


# -- separability examples ---------------------------------------------------

def test_rank_one_separable():
    phi, y = rl.vec([1, 0, 1]), rl.vec([1, 1, 1])
    T = rl.outer(y, phi)
    v = is_separable(T, SQ, SQ)
    assert isinstance(v, Separable) and len(v.terms) == 1
    fac = factor_through_simplex(v, T)
    assert fac.n == 1 and verify_factorization(fac, T, SQ, SQ)
    assert rl.matmul(fac.S, fac.R) == T


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_identity_on_orthant(n):
    o = Cone.orthant(n)
    v = is_separable(rl.identity(n), o, o)
    assert isinstance(v, Separable) and len(v.terms) == n
    assert {(t.functional, t.vector) for t in v.terms} == {(rl.unit(n, i), rl.unit(n, i)) for i in range(n)}
    fac = factor_through_simplex(v, rl.identity(n))
    assert fac.n == n and verify_factorization(fac, rl.identity(n), o, o)


def test_identity_on_square_entangled():
    I = rl.identity(3)
    v = is_separable(I, SQ, SQ)
    assert isinstance(v, Entangled)
    assert verify_verdict(I, SQ, SQ, v)
    # independent: the identity tensor is outside the separable cone
    gens = [tensor_vec(phi, y) for phi in SQ.facets for y in SQ.rays]
    assert not isinstance(cone_membership(rl.flatten(I), gens), Inside)
    w = v.witness.flat
    assert rl.dot(w, rl.flatten(I)) < 0


def test_not_positive_is_an_error():
    with pytest.raises(NotPositive):
        is_separable(diag(1, 1, -1), SQ, SQ)


def test_verdict_tampering_is_caught():
    T = rl.identity(2)
    o = Cone.orthant(2)
    v = is_separable(T, o, o)
    bad = Separable(v.terms[:1])
    assert not verify_verdict(T, o, o, bad)
    bad = Separable(tuple(Term(t.functional, t.vector, -t.coefficient) for t in v.terms))
    assert not verify_verdict(T, o, o, bad)


def test_known_five_term_map():
    rng = random.Random(1)
    E, F = regular_polygon(5), SQ
    dE = dual(E)
    terms = [(rng.choice(dE.rays), rng.choice(F.rays), Fraction(rng.randint(1, 5), rng.randint(1, 3)))
             for _ in range(5)]
    T = rl.zero_mat(3, 3)
    for phi, y, c in terms:
        T = rl.mat_add(T, rl.mat_scale(c, rl.outer(y, phi)))
    v = is_separable(T, E, F)
    assert isinstance(v, Separable) and len(v.terms) <= 5
    fac = factor_through_simplex(v, T)
    assert rl.matmul(fac.S, fac.R) == T and fac.n <= 5
    assert verify_factorization(fac, T, E, F)


def test_caratheodory_reduction():
    vecs = [(1, 0), (0, 1), (1, 1), (2, 1)]
    c = caratheodory_reduce(vecs, [1, 1, 1, 1])
    assert sum(x > 0 for x in c) <= 2 and all(x >= 0 for x in c)
    assert rl.lincomb(c, vecs, 2) == (4, 3)


def test_verdict_json_round_trip():
    v = is_separable(rl.identity(3), SQ, SQ)
    data = json.loads(json.dumps(v.witness.to_json()))
    assert data["dimE"] == 3 and all(isinstance(x, str) for r in data["matrix"] for x in r)


# -- trace LP ----------------------------------------------------------------

def test_trace_orthant_nonnegative():
    r = min_trace_positive_map(Cone.orthant(3))
    assert r.value >= 0
    assert is_positive_map(r.argmin, Cone.orthant(3), Cone.orthant(3))


@pytest.mark.parametrize("E", [SQ, regular_polygon(5), regular_polygon(6)])
def test_trace_negative_on_polygons(E):
    r = min_trace_positive_map(E)
    assert r.value < 0
    assert rl.trace(r.argmin) == r.value
    assert is_positive_map(r.argmin, E, E)
    assert rl.dot(tensor_vec(r.functional, r.center), rl.flatten(r.argmin)) == 1


def test_trace_square_value_and_rotation():
    r = min_trace_positive_map(SQ)
    R = diag(-1, -1, 1)
    assert rl.trace(R) == -1 and is_positive_map(R, SQ, SQ)
    # the rotation normalized onto the same slice is feasible, so it bounds the optimum
    scale = rl.dot(tensor_vec(r.functional, r.center), rl.flatten(R))
    assert scale > 0
    assert r.value <= Fraction(-1) / scale


def test_trace_requires_proper_generating():
    with pytest.raises(NotProperGenerating):
        min_trace_positive_map(Cone(3, generators=[(1, 0, 0), (0, 1, 0)]))


# -- the equivalences ---------------------------------------------------------------

def test_equivalences_orthant4():
    rep = check_min_equals_max_equivalences(Cone.orthant(4))
    assert rep.agree and all(rep.conditions.values()) and rep.certificates_ok


@pytest.mark.parametrize("E", [SQ, regular_polygon(6)])
def test_equivalences_polygons(E):
    rep = check_min_equals_max_equivalences(E)
    assert rep.agree and not any(rep.conditions.values()) and rep.certificates_ok


def test_equivalences_require_proper_generating():
    with pytest.raises(NotProperGenerating):
        check_min_equals_max_equivalences(Cone(2, inequalities=[(0, 1)]))


# -- properties ---------------------------------------------------------------

@settings(max_examples=10, deadline=None)
@given(proper_generating_cones(max_dim=3), st.integers(0, 10 ** 6))
def test_simplex_domain_or_codomain_always_separable(F, seed):
    rng = random.Random(seed)
    E = simplex_cone([(1, 0, 0), (1, 1, 0), (1, 2, 3)])
    for dom, cod, T in ((F, E, random_positive_map(F, E, rng)), (E, F, positive_from_simplex(E, F, rng))):
        assert is_positive_map(T, dom, cod)
        v = is_separable(T, dom, cod)
        assert isinstance(v, Separable) and verify_verdict(T, dom, cod, v)
        assert len(v.terms) <= dom.dim * cod.dim


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ideal_property(seed):
    rng = random.Random(seed)
    dS = dual(SQ)
    # S separable on the square, T a random positive map of the square
    S = rl.zero_mat(3, 3)
    for _ in range(rng.randint(1, 4)):
        S = rl.mat_add(S, rl.outer(rng.choice(SQ.rays), rng.choice(dS.rays)))
    T = random_square_positive(rng)
    assert is_positive_map(T, SQ, SQ)
    for M in (rl.matmul(T, S), rl.matmul(S, T)):
        assert is_positive_map(M, SQ, SQ)
        v = is_separable(M, SQ, SQ)
        assert isinstance(v, Separable) and verify_verdict(M, SQ, SQ, v)


def test_symmetries_are_entangled():
    # each symmetry is positive; the identity and the rotation are not separable
    for M in SQUARE_SYMMETRIES:
        assert is_positive_map(M, SQ, SQ)
    for M in (rl.identity(3), diag(-1, -1, 1)):
        assert isinstance(is_separable(M, SQ, SQ), Entangled)


def test_trace_sign_matches_simplex_on_corpus():
    from conetensor.corpus import load_corpus, proper_generating
    for inst in proper_generating(load_corpus()):
        r = min_trace_positive_map(inst.cone)
        assert (r.value < 0) == (not inst.cone.is_simplex()), inst.name


def test_equal_for_simplex_pair():
    rep = check_min_equals_max_equivalences(simplex_cone([(1, 0, 0), (1, 1, 0), (1, 2, 3)]))
    assert isinstance(rep.tensor_verdict, Equal) and rep.agree
