"""Exact two-phase simplex with certificates.

Problems are in standard form: minimize c.x subject to A x = b, x >= 0.
Bland's rule (lowest index enters, lowest basic index leaves on ties)
guarantees termination on degenerate instances, which cone problems
produce constantly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from .ratlin import DimensionError, RMat, RVec, dot, matvec, neg, transpose, vec, zeros


@dataclass(frozen=True)
class LinearProgram:
    A: RMat
    b: RVec
    c: RVec

    def __post_init__(self):
        if len(self.A) != len(self.b):
            raise DimensionError("A has %d rows but b has length %d" % (len(self.A), len(self.b)))
        n = len(self.c)
        if any(len(row) != n for row in self.A):
            raise DimensionError("A columns do not match c")


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: RVec
    basis: tuple = ()  # final basic columns, one per non-redundant row


@dataclass(frozen=True)
class Infeasible:
    farkas: RVec  # y with y.A <= 0 and y.b > 0


@dataclass(frozen=True)
class Unbounded:
    ray: RVec
    point: RVec  # a feasible point, so the certificate is complete


LPOutcome = Union[Optimal, Infeasible, Unbounded]


def _lcm_den(xs) -> int:
    d = 1
    for x in xs:
        q = x.denominator
        if q != 1:
            d = d * q // gcd(d, q)
    return d


class _Tableau:
    """Integer-preserving tableau (Edmonds' pivoting).

    ``rows`` and ``rhs`` hold integers; the true tableau B^-1 [A | b] is
    their quotient by the common denominator ``det``.  A pivot keeps every
    entry integral: each update is an exact integer division by the old
    denominator.
    """

    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.det = 1

    def pivot(self, r: int, j: int) -> None:
        row, br = self.rows[r], self.rhs[r]
        p, d = row[j], self.det
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[j]
            if f:
                self.rows[i] = [(p * a - f * b) // d for a, b in zip(other, row)]
                self.rhs[i] = (p * self.rhs[i] - f * br) // d
            elif p != d:
                self.rows[i] = [p * a // d for a in other]
                self.rhs[i] = p * self.rhs[i] // d
        self.det = p
        self.basis[r] = j

    def reduced_costs(self, c: Sequence[int]) -> list[int]:
        """Reduced costs times ``det`` (integer cost vector)."""
        d = [ck * self.det for ck in c]
        for i, bj in enumerate(self.basis):
            cb = c[bj]
            if cb:
                for j, a in enumerate(self.rows[i]):
                    if a:
                        d[j] -= cb * a
        return d

    def run(self, c: Sequence[int], allowed: int):
        """Bland iterations over columns < allowed.  Returns None at the
        optimum or the entering column of an unbounded direction."""
        while True:
            d = self.reduced_costs(c)
            j = next((k for k in range(allowed) if d[k] < 0), None)
            if j is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[j]
                if a > 0:
                    key = (Fraction(self.rhs[i], a), self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return j
            self.pivot(best[1], j)


def solve_lp(p: LinearProgram) -> LPOutcome:
    """Solve ``p`` exactly; every outcome carries a verifiable certificate."""
    m, n = len(p.A), len(p.c)
    # row i is scaled by scale[i] (sign included) to integers with rhs >= 0
    scale = []
    rows, rhs = [], []
    for i in range(m):
        row = [Fraction(a) for a in p.A[i]] + [Fraction(p.b[i])]
        s = _lcm_den(row) * (-1 if p.b[i] < 0 else 1)
        scale.append(s)
        ints = [int(a * s) for a in row]
        rows.append(ints[:n] + [int(k == i) for k in range(m)])
        rhs.append(ints[n])
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])

    # phase I
    c1 = [0] * n + [1] * m
    tab.run(c1, n + m)
    if any(bj >= n and tab.rhs[i] for i, bj in enumerate(tab.basis)):
        d = tab.reduced_costs(c1)
        y = [scale[i] * (1 - Fraction(d[n + i], tab.det)) for i in range(m)]
        return Infeasible(tuple(y))

    # drive zero-level artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= n:
            j = next((k for k in range(n) if tab.rows[r][k] != 0), None)
            if j is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            if tab.rows[r][j] < 0:  # rhs is zero, so flipping the row is harmless
                tab.rows[r] = [-a for a in tab.rows[r]]
            tab.pivot(r, j)
        r += 1
    tab.rows = [row[:n] for row in tab.rows]

    # phase II
    cs = _lcm_den(Fraction(x) for x in p.c)
    c2 = [int(Fraction(x) * cs) for x in p.c]
    entering = tab.run(c2, n)
    det = tab.det
    point = [Fraction(0)] * n
    for i, bj in enumerate(tab.basis):
        point[bj] = Fraction(tab.rhs[i], det)
    point = tuple(point)
    if entering is not None:
        ray = [Fraction(0)] * n
        ray[entering] = Fraction(1)
        for i, bj in enumerate(tab.basis):
            ray[bj] = Fraction(-tab.rows[i][entering], det)
        return Unbounded(tuple(ray), point)
    return Optimal(dot(p.c, point), point, tuple(tab.basis))


def check_outcome(p: LinearProgram, out: LPOutcome) -> bool:
    """Re-verify an outcome's certificate by plain matrix arithmetic."""
    cols = transpose(p.A, len(p.c))
    if isinstance(out, Optimal):
        x = out.point
        return (all(a >= 0 for a in x) and matvec(p.A, x) == tuple(p.b)
                and dot(p.c, x) == out.value)
    if isinstance(out, Infeasible):
        y = out.farkas
        return all(dot(y, col) <= 0 for col in cols) and dot(y, p.b) > 0
    if isinstance(out, Unbounded):
        r, x = out.ray, out.point
        return (all(a >= 0 for a in r) and all(a >= 0 for a in x)
                and matvec(p.A, r) == zeros(len(p.A)) and matvec(p.A, x) == tuple(p.b)
                and dot(p.c, r) < 0)
    return False


# ---------------------------------------------------------------------------
# cone membership

@dataclass(frozen=True)
class Inside:
    coefficients: RVec


@dataclass(frozen=True)
class Outside:
    separator: RVec


def cone_membership(point: Sequence, generators: Sequence[Sequence]) -> Union[Inside, Outside]:
    """Decide whether ``point`` is a nonnegative combination of ``generators``.

    Inside carries the coefficients; Outside carries a functional that is
    nonnegative on every generator and negative on the point.
    """
    point = vec(point)
    gens = [vec(g) for g in generators]
    for g in gens:
        if len(g) != len(point):
            raise DimensionError("generator and point dimensions differ")
    A = transpose(tuple(gens), len(point)) if gens else tuple(() for _ in point)
    out = solve_lp(LinearProgram(A, point, zeros(len(gens))))
    if isinstance(out, Optimal):
        return Inside(out.point)
    assert isinstance(out, Infeasible)
    return Outside(neg(out.farkas))


def check_membership(point, generators, verdict) -> bool:
    point = vec(point)
    gens = [vec(g) for g in generators]
    if isinstance(verdict, Inside):
        lam = verdict.coefficients
        if len(lam) != len(gens) or any(c < 0 for c in lam):
            return False
        total = [Fraction(0)] * len(point)
        for c, g in zip(lam, gens):
            if c:
                for i, a in enumerate(g):
                    total[i] += c * a
        return tuple(total) == point
    s = verdict.separator
    return all(dot(s, g) >= 0 for g in gens) and dot(s, point) < 0
