"""Shared oracles and strategies.

Independent oracles: pycddlib (exact fraction mode) for double
description, scipy's linprog for LP optimal values, sympy for exact
linear algebra.  They are compared with the library through
representation-independent data (incidence sets, dimensions), never
through the library's own canonical forms.
"""

from __future__ import annotations

import random
from fractions import Fraction

import cdd
import pytest
import sympy
from hypothesis import strategies as st

from conetensor import ratlin as rl
from conetensor.cone import Cone


# -- cdd ------------------------------------------------------------------

def _cdd_matrix(rows, rep):
    m = cdd.Matrix([[0] + [Fraction(x) for x in r] for r in rows], number_type="fraction")
    m.rep_type = rep
    return m


def cdd_facets(generators, dim):
    """(list of facet normals, equation count) of cone(generators)."""
    if not generators:
        return [], dim
    out = cdd.Polyhedron(_cdd_matrix(generators, cdd.RepType.GENERATOR)).get_inequalities()
    facets, eqs = [], []
    for i in range(out.row_size):
        row = out[i]
        if row[0] != 0:
            continue
        (eqs if i in out.lin_set else facets).append(tuple(Fraction(x) for x in row[1:]))
    return facets, len(eqs)


def cdd_rays(inequalities, dim):
    """(list of extremal rays, lineality dimension) of the cone cut out."""
    if not inequalities:
        return [], dim
    out = cdd.Polyhedron(_cdd_matrix(inequalities, cdd.RepType.INEQUALITY)).get_generators()
    rays, lin = [], []
    for i in range(out.row_size):
        row = out[i]
        if row[0] != 0 or not any(row[1:]):
            continue
        (lin if i in out.lin_set else rays).append(tuple(Fraction(x) for x in row[1:]))
    return rays, len(lin)


def incidence(functionals, vectors):
    """Multiset (sorted list) of index sets of vectors each functional vanishes on."""
    return sorted(tuple(j for j, v in enumerate(vectors) if rl.dot(f, v) == 0) for f in functionals)


# -- sympy ----------------------------------------------------------------

def sym(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in row] for row in m])


def sympy_rank(m, cols):
    if not m:
        return 0
    return sym(m).rank()


# -- strategies -----------------------------------------------------------

small_int = st.integers(min_value=-3, max_value=3)
small_rat = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def vectors(draw, dim, elements=small_int):
    return tuple(Fraction(draw(elements)) for _ in range(dim))


@st.composite
def generator_cones(draw, min_dim=1, max_dim=4, max_gens=7):
    dim = draw(st.integers(min_dim, max_dim))
    n = draw(st.integers(0, max_gens))
    gens = [draw(vectors(dim)) for _ in range(n)]
    return Cone(dim, generators=gens)


@st.composite
def inequality_cones(draw, min_dim=1, max_dim=4, max_ineqs=7):
    dim = draw(st.integers(min_dim, max_dim))
    n = draw(st.integers(0, max_ineqs))
    return Cone(dim, inequalities=[draw(vectors(dim)) for _ in range(n)])


@st.composite
def proper_generating_cones(draw, min_dim=2, max_dim=4, max_extra=4):
    """Positive rays around the last axis: a basis plus extra rays, all
    with last coordinate 1, so the cone is proper and generating."""
    dim = draw(st.integers(min_dim, max_dim))
    base = [tuple(Fraction(int(i == j)) for j in range(dim - 1)) + (Fraction(1),) for i in range(dim - 1)]
    base.append(tuple(Fraction(0) for _ in range(dim - 1)) + (Fraction(1),))
    extra = [tuple(Fraction(draw(small_int)) for _ in range(dim - 1)) + (Fraction(1),)
             for _ in range(draw(st.integers(0, max_extra)))]
    return Cone(dim, generators=base + extra)


@pytest.fixture
def rng():
    return random.Random(12345)
