"""Separable positive maps.

A linear map T: E -> F is a dimF x dimE matrix.  It is separable when
T = sum_i c_i y_i phi_i^T with phi_i in the dual of E, y_i in F and
c_i >= 0, i.e. when it factors positively through an orthant.  As a
tensor in E* (x) F it is the dimE x dimF matrix T^T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import ratlin as rl
from .cone import Cone, ConeError, NotProperGenerating, dual, strictly_positive_functional
from .lp import Inside, LinearProgram, Optimal, cone_membership, solve_lp
from .ratlin import DimensionError, RMat, RVec
from .tensorcone import Differs, Equal, TensorElement, min_equals_max, tensor_vec, verify_differs


class NotPositive(ConeError):
    pass


@dataclass(frozen=True)
class Term:
    functional: RVec
    vector: RVec
    coefficient: Fraction


@dataclass(frozen=True)
class Separable:
    terms: tuple

    def __bool__(self):
        return True

    def matrix(self, dimE: int, dimF: int) -> RMat:
        out = rl.zero_mat(dimF, dimE)
        for t in self.terms:
            out = rl.mat_add(out, rl.mat_scale(t.coefficient, rl.outer(t.vector, t.functional)))
        return out


@dataclass(frozen=True)
class Entangled:
    witness: TensorElement  # functional on E* (x) F, dimE x dimF

    def __bool__(self):
        return False


SeparabilityVerdict = Union[Separable, Entangled]


@dataclass(frozen=True)
class Factorization:
    n: int
    R: RMat  # n x dimE
    S: RMat  # dimF x n


def _check_dims(T: RMat, E: Cone, F: Cone) -> None:
    if len(T) != F.dim or any(len(r) != E.dim for r in T):
        raise DimensionError(f"map must be {F.dim} x {E.dim}")


def is_positive_map(T: RMat, E: Cone, F: Cone) -> bool:
    """T maps every generator of E (rays and both signs of lineality) into F."""
    _check_dims(T, E, F)
    return all(F.contains(rl.matvec(T, g)) for g in E.all_generators)


def map_as_tensor(T: RMat, dimE: int, dimF: int) -> TensorElement:
    return TensorElement(dimE, dimF, rl.transpose(T, dimE))


def separable_generators(E: Cone, F: Cone) -> list[tuple[RVec, RVec]]:
    """(phi, y) pairs over generators of the dual of E and of F."""
    return [(phi, y) for phi in E.all_inequalities for y in F.all_generators]


def caratheodory_reduce(vectors, coeffs) -> list[Fraction]:
    """Support reduction: while the active vectors are dependent, move along
    a kernel vector until a coefficient hits zero.  Keeps sum c_i v_i fixed
    and c >= 0; the lowest-index coefficient that reaches zero is dropped."""
    c = [rl.rat(x) for x in coeffs]
    vectors = [rl.vec(v) for v in vectors]
    while True:
        active = [i for i, x in enumerate(c) if x > 0]
        if not active:
            return c
        cols = rl.transpose(tuple(vectors[i] for i in active))
        ker = rl.kernel_basis(cols, len(active))
        if not ker:
            return c
        k = ker[0]
        if all(x <= 0 for x in k):
            k = rl.neg(k)
        best = None
        for pos, i in enumerate(active):
            if k[pos] > 0:
                ratio = c[i] / k[pos]
                if best is None or ratio < best[0]:
                    best = (ratio, pos)
        t = best[0]
        for pos, i in enumerate(active):
            c[i] -= t * k[pos]
        c[active[best[1]]] = Fraction(0)


def is_separable(T: RMat, E: Cone, F: Cone, check_positive: bool = True) -> SeparabilityVerdict:
    """Decide separability of a positive map with an exact certificate."""
    _check_dims(T, E, F)
    T = rl.mat(T)
    if check_positive and not is_positive_map(T, E, F):
        raise NotPositive("map is not positive")
    pairs = separable_generators(E, F)
    gens = [tensor_vec(phi, y) for phi, y in pairs]
    point = map_as_tensor(T, E.dim, F.dim).flat
    verdict = cone_membership(point, gens)
    if isinstance(verdict, Inside):
        coeffs = caratheodory_reduce(gens, verdict.coefficients)
        terms = tuple(Term(phi, y, c) for (phi, y), c in zip(pairs, coeffs) if c > 0)
        return Separable(terms)
    return Entangled(TensorElement.from_flat(verdict.separator, E.dim, F.dim))


def verify_verdict(T: RMat, E: Cone, F: Cone, verdict: SeparabilityVerdict) -> bool:
    T = rl.mat(T)
    if isinstance(verdict, Separable):
        return (len(verdict.terms) <= E.dim * F.dim
                and all(t.coefficient > 0 for t in verdict.terms)
                and all(dual(E).contains(t.functional) and F.contains(t.vector) for t in verdict.terms)
                and verdict.matrix(E.dim, F.dim) == T)
    w = verdict.witness.flat
    return (all(rl.dot(w, tensor_vec(phi, y)) >= 0 for phi, y in separable_generators(E, F))
            and rl.dot(w, map_as_tensor(T, E.dim, F.dim).flat) < 0)


def factor_through_simplex(verdict: Separable, T: RMat = None) -> Factorization:
    """R(x) = (c_i phi_i(x))_i and S(lambda) = sum lambda_i y_i."""
    R = tuple(rl.scale(t.coefficient, t.functional) for t in verdict.terms)
    S = rl.transpose(tuple(t.vector for t in verdict.terms)) if verdict.terms else ()
    return Factorization(len(verdict.terms), R, S)


def verify_factorization(fac: Factorization, T: RMat, E: Cone, F: Cone) -> bool:
    T = rl.mat(T)
    if fac.n == 0:
        return all(a == 0 for r in T for a in r)
    dE = dual(E)
    cols = rl.transpose(fac.S, fac.n)
    return (rl.matmul(fac.S, fac.R) == T
            and all(dE.contains(r) for r in fac.R)
            and all(F.contains(c) for c in cols)
            and fac.n <= E.dim * F.dim)


# ---------------------------------------------------------------------------
# the trace LP

@dataclass(frozen=True)
class TraceResult:
    value: Fraction
    argmin: RMat
    functional: RVec
    center: RVec


def _require_proper_generating(E: Cone) -> None:
    if not (E.is_proper() and E.is_generating()):
        raise NotProperGenerating("cone must be proper and generating")


def min_trace_positive_map(E: Cone) -> TraceResult:
    """Minimize tr(T) over positive T: E -> E with f(T xbar) = 1.

    f is the strictly positive functional and xbar the sum of the
    extremal rays; the normalization cuts a compact base out of the cone
    of positive maps, so the optimum exists.  The LP actually solved is
    the dual one, max l such that I - l f (x) xbar is a nonnegative
    combination of the phi (x) g; it has n^2 rows, and T is read off its
    optimal basis and then re-checked.
    """
    _require_proper_generating(E)
    n = E.dim
    f = strictly_positive_functional(E)
    xbar = rl.zeros(n)
    for r in E.rays:
        xbar = rl.add(xbar, r)
    # T is flattened row-major, so phi^T T g = <phi (x) g, T>
    cols = [tensor_vec(phi, g) for phi in E.facets for g in E.rays]
    nrm = tensor_vec(f, xbar)
    A = rl.transpose(tuple(cols + [nrm, rl.neg(nrm)]), n * n)
    cost = [Fraction(0)] * len(cols) + [Fraction(-1), Fraction(1)]
    out = solve_lp(LinearProgram(A, rl.flatten(rl.identity(n)), tuple(cost)))
    if not isinstance(out, Optimal):
        raise RuntimeError(f"trace LP did not reach an optimum: {out!r}")
    rows, rhs = [], []
    for j in out.basis:
        rows.append(cols[j] if j < len(cols) else nrm)
        rhs.append(Fraction(0) if j < len(cols) else Fraction(1))
    flat = rl.solve(tuple(rows), rhs, n * n)
    if flat is None:
        raise RuntimeError("trace LP basis does not determine a map")
    T = rl.unflatten(flat, n, n)
    value = -out.value
    if rl.trace(T) != value or rl.dot(nrm, flat) != 1 or not is_positive_map(T, E, E):
        raise RuntimeError("trace LP basis does not give an optimal positive map")
    return TraceResult(value, T, f, xbar)


# ---------------------------------------------------------------------------
# the equivalence check

@dataclass
class EquivalenceReport:
    simplex: bool
    identity_separable: bool
    trace_nonnegative: bool
    min_equals_max_dual: bool
    identity_verdict: SeparabilityVerdict
    trace: TraceResult
    tensor_verdict: Union[Equal, Differs]
    certificates_ok: bool = True
    notes: list = field(default_factory=list)

    @property
    def conditions(self) -> dict:
        return {"(i) simplex": self.simplex,
                "(ii) identity separable": self.identity_separable,
                "(iii) trace nonnegative": self.trace_nonnegative,
                "(vi) min = max for (dual E, E)": self.min_equals_max_dual}

    @property
    def agree(self) -> bool:
        return len(set(self.conditions.values())) == 1


def check_min_equals_max_equivalences(E: Cone) -> EquivalenceReport:
    _require_proper_generating(E)
    n = E.dim
    ident = rl.identity(n)
    verdict = is_separable(ident, E, E)
    tr = min_trace_positive_map(E)
    dE = dual(E)
    # an entangled identity's witness is >= 0 on min(dual E, E) and < 0 on
    # the identity, which lies in max(dual E, E)
    hint = () if isinstance(verdict, Separable) else (verdict.witness.flat,)
    tv = min_equals_max(dE, E, objectives=hint)
    ok = verify_verdict(ident, E, E, verdict) and is_positive_map(tr.argmin, E, E)
    if isinstance(tv, Differs):
        ok = ok and verify_differs(dE, E, tv)
    return EquivalenceReport(
        simplex=E.is_simplex(),
        identity_separable=isinstance(verdict, Separable),
        trace_nonnegative=tr.value >= 0,
        min_equals_max_dual=isinstance(tv, Equal),
        identity_verdict=verdict,
        trace=tr,
        tensor_verdict=tv,
        certificates_ok=ok,
    )
