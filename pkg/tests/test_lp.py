import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from conetensor import ratlin as rl
from conetensor.lp import (Infeasible, Inside, LinearProgram, Optimal, Outside, Unbounded,
                           check_membership, check_outcome, cone_membership, solve_lp)
from conftest import vectors


def lp(A, b, c):
    return LinearProgram(rl.mat(A), rl.vec(b), rl.vec(c))


def test_single_equation_optimal():
    out = solve_lp(lp([[1]], [1], [1]))
    assert isinstance(out, Optimal)
    assert out.value == 1 and out.point == (1,)


def test_single_equation_infeasible():
    p = lp([[1]], [-1], [0])
    out = solve_lp(p)
    assert isinstance(out, Infeasible)
    assert check_outcome(p, out)


def test_unbounded_ray():
    p = lp([[1, -1]], [0], [-1, 0])
    out = solve_lp(p)
    assert isinstance(out, Unbounded)
    assert out.ray == (1, 1)
    assert check_outcome(p, out)


def test_dimension_mismatch():
    with pytest.raises(rl.DimensionError):
        lp([[1, 2]], [1, 2], [0, 0])
    with pytest.raises(rl.DimensionError):
        lp([[1, 2]], [1], [0])


def test_degenerate_cycling_example():
    # Beale's example, which cycles under the textbook largest-coefficient rule
    A = [[Fraction(1, 4), -8, -1, 9, 1, 0, 0],
         [Fraction(1, 2), -12, Fraction(-1, 2), 3, 0, 1, 0],
         [0, 0, 1, 0, 0, 0, 1]]
    c = [Fraction(-3, 4), 20, Fraction(-1, 2), 6, 0, 0, 0]
    p = lp(A, [0, 0, 1], c)
    out = solve_lp(p)
    assert isinstance(out, Optimal) and check_outcome(p, out)
    assert out.value == Fraction(-5, 4)


def test_redundant_rows():
    p = lp([[1, 1], [2, 2], [1, -1]], [2, 4, 0], [1, 0])
    out = solve_lp(p)
    assert isinstance(out, Optimal) and out.value == 1 and check_outcome(p, out)


def _random_lp(rng, m, n):
    A = [[Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)] for _ in range(m)]
    if rng.random() < 0.6:  # feasible by construction
        x = [Fraction(rng.randint(0, 3)) for _ in range(n)]
        b = [sum(a * xi for a, xi in zip(row, x)) for row in A]
    else:
        b = [Fraction(rng.randint(-4, 4)) for _ in range(m)]
    c = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
    return lp(A, b, c)


def test_against_scipy_linprog():
    rng = random.Random(2024)
    seen = set()
    for _ in range(300):
        m, n = rng.randint(1, 4), rng.randint(1, 6)
        p = _random_lp(rng, m, n)
        out = solve_lp(p)
        assert check_outcome(p, out)
        ref = linprog([float(x) for x in p.c], A_eq=[[float(a) for a in r] for r in p.A],
                      b_eq=[float(x) for x in p.b], bounds=[(0, None)] * n, method="highs")
        seen.add(type(out).__name__)
        if ref.status == 0:
            assert isinstance(out, Optimal)
            assert float(out.value) == pytest.approx(ref.fun, abs=1e-7)
        elif ref.status == 2:
            assert isinstance(out, Infeasible)
        elif ref.status == 3:
            assert isinstance(out, Unbounded)
    assert seen == {"Optimal", "Infeasible", "Unbounded"}


def test_row_permutation_invariance():
    rng = random.Random(5)
    for _ in range(100):
        p = _random_lp(rng, rng.randint(2, 4), rng.randint(2, 5))
        perm = list(range(len(p.A)))
        rng.shuffle(perm)
        q = LinearProgram(tuple(p.A[i] for i in perm), tuple(p.b[i] for i in perm), p.c)
        a, b = solve_lp(p), solve_lp(q)
        assert type(a) is type(b)
        if isinstance(a, Optimal):
            assert a.value == b.value


def test_deterministic():
    rng = random.Random(9)
    p = _random_lp(rng, 3, 5)
    assert solve_lp(p) == solve_lp(p)


def test_membership_examples():
    e = [(1, 0), (0, 1)]
    v = cone_membership((1, 1), e)
    assert isinstance(v, Inside) and v.coefficients == (1, 1)
    v = cone_membership((-1, 0), e)
    assert isinstance(v, Outside)
    s = v.separator
    assert s[0] > 0 and s[1] == 0


def test_membership_empty_generators():
    assert isinstance(cone_membership((0, 0), []), Inside)
    v = cone_membership((1, 0), [])
    assert isinstance(v, Outside) and check_membership((1, 0), [], v)


def test_membership_dimension_mismatch():
    with pytest.raises(rl.DimensionError):
        cone_membership((1, 0), [(1, 0, 0)])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(lambda d: st.tuples(
    st.lists(vectors(d), min_size=1, max_size=6),
    st.lists(st.integers(0, 4), min_size=6, max_size=6))))
def test_known_combination_is_inside(data):
    gens, coeffs = data
    dim = len(gens[0])
    point = rl.lincomb([Fraction(c) for c in coeffs[:len(gens)]], gens, dim)
    v = cone_membership(point, gens)
    assert isinstance(v, Inside)
    assert rl.lincomb(v.coefficients, gens, dim) == point
    assert all(c >= 0 for c in v.coefficients)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda d: st.tuples(vectors(d), st.lists(vectors(d), max_size=6))))
def test_farkas_dichotomy(data):
    point, gens = data
    v = cone_membership(point, gens)
    assert isinstance(v, (Inside, Outside))
    assert check_membership(point, gens, v)
    # exactly one side: a separator rules out any combination and vice versa
    ref = linprog([0] * len(gens), A_eq=[[float(g[i]) for g in gens] for i in range(len(point))]
                  if gens else None, b_eq=[float(x) for x in point] if gens else None,
                  bounds=[(0, None)] * len(gens), method="highs") if gens else None
    if ref is not None:
        assert (ref.status == 0) == isinstance(v, Inside)
