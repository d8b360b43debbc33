"""Second-order cone helpers.

Membership in L^n is decided on the squared form, so everything stays
rational.  Positivity of maps on L^n is only claimed for maps whose
positivity is an algebraic identity (form-preserving signed coordinate
maps, coordinate paddings/projections); anything else can only be refuted
by sampling boundary rays.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import ratlin as rl
from .cone import polygon_homogenization
from .ratlin import RMat, RVec

# rational stand-in for pi, only used to spread sample angles
_PI = Fraction(355, 113)


@dataclass(frozen=True)
class Membership:
    inside: bool
    boundary: bool

    def __bool__(self):
        return self.inside


def lorentz_form(x: Sequence) -> Fraction:
    """x_n^2 - (x_1^2 + ... + x_{n-1}^2)."""
    x = rl.vec(x)
    return x[-1] * x[-1] - sum((a * a for a in x[:-1]), Fraction(0))


def lorentz_membership(x: Sequence) -> Membership:
    x = rl.vec(x)
    if len(x) == 1:  # L^1 is the half-line
        return Membership(x[0] >= 0, x[0] == 0)
    q = lorentz_form(x)
    inside = x[-1] >= 0 and q >= 0
    return Membership(inside, inside and q == 0)


def boundary_point(t) -> RVec:
    """(2t/(1+t^2), (1-t^2)/(1+t^2), 1), exactly on the boundary of L^3."""
    t = rl.rat(t)
    d = 1 + t * t
    return (2 * t / d, (1 - t * t) / d, Fraction(1))


def _tan(x: Fraction, terms: int = 14) -> Fraction:
    s, c, p = Fraction(0), Fraction(0), Fraction(1)
    for k in range(2 * terms):
        term = p
        if k % 2 == 0:
            c += term if (k // 2) % 2 == 0 else -term
        else:
            s += term if (k // 2) % 2 == 0 else -term
        p = p * x / (k + 1)
    return s / c


def _spread_parameters(k: int) -> list[Fraction]:
    """k distinct rational t-values, decreasing, roughly evenly spaced in
    angle, with the smallest power-of-two denominator bound that keeps
    them distinct (small entries keep exact arithmetic cheap)."""
    exact = [_tan((-_PI + _PI * (2 * i + 1) / k) / 2) for i in range(k)]
    bound = 4
    while bound <= 1 << 12:
        ts = sorted({t.limit_denominator(bound) for t in exact}, reverse=True)
        if len(ts) == k:
            return ts
        bound *= 2
    raise ValueError("could not produce distinct boundary parameters")


def rational_boundary_rays(k: int, n: int = 3) -> list[RVec]:
    """k distinct exact boundary rays of L^3 in counterclockwise order of (x1, x2)."""
    if n != 3:
        raise ValueError("only n = 3 is supported")
    if k < 3:
        raise ValueError("need k >= 3")
    return [boundary_point(t) for t in _spread_parameters(k)]


def circle_points(k: int) -> list[RVec]:
    return [r[:2] for r in rational_boundary_rays(k)]


def inner_polyhedral_approx(k: int, n: int = 3):
    """Homogenized k-gon inscribed in L^3 (all rays on the boundary)."""
    if n != 3:
        raise ValueError("only n = 3 is supported")
    return polygon_homogenization(circle_points(k))


def sym2_to_l3(a, b, c) -> RVec:
    """[[a, b], [b, c]] -> (a - c, 2b, a + c)."""
    a, b, c = rl.rat(a), rl.rat(b), rl.rat(c)
    return (a - c, 2 * b, a + c)


s2_iso = sym2_to_l3


def l3_to_sym2(v: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    x, y, z = rl.vec(v)
    return ((x + z) / 2, y / 2, (z - x) / 2)


s2_iso_inv = l3_to_sym2


def is_psd_2x2(a, b, c) -> bool:
    a, b, c = rl.rat(a), rl.rat(b), rl.rat(c)
    return a + c >= 0 and a * c - b * b >= 0


def rotation_witness() -> RMat:
    return rl.mat([[-1, 0, 0], [0, -1, 0], [0, 0, 1]])


def preserves_lorentz_form(T: RMat) -> bool:
    """T^T J T = J with J = diag(-1, ..., -1, 1), and T fixes the sign of
    the last coordinate on L^n (last row is e_n).  Then T maps L^n onto
    itself by an algebraic identity."""
    n = len(T)
    J = tuple(tuple(Fraction((1 if i == n - 1 else -1) if i == j else 0) for j in range(n))
              for i in range(n))
    return (rl.matmul(rl.matmul(rl.transpose(T), J), T) == J
            and T[-1] == rl.unit(n, n - 1))


def is_signed_coordinate_map(T: RMat) -> bool:
    """Every column has at most one nonzero entry, equal to +1 or -1."""
    for col in rl.transpose(T):
        nz = [a for a in col if a]
        if len(nz) > 1 or any(abs(a) != 1 for a in nz):
            return False
    return True


def lorentz_retract_maps(n: int, m: int) -> tuple[RMat, RMat]:
    """T: R^n -> R^m pads the middle with zeros; S: R^m -> R^n keeps the
    first n-1 and the last coordinate."""
    if not 1 <= n <= m:
        raise ValueError("need 1 <= n <= m")
    T = [[Fraction(0)] * n for _ in range(m)]
    for i in range(n - 1):
        T[i][i] = Fraction(1)
    T[m - 1][n - 1] = Fraction(1)
    T = tuple(tuple(r) for r in T)
    return T, rl.transpose(T)


def padding_is_positive(T: RMat, S: RMat) -> bool:
    """Both maps are coordinate selections that keep the last coordinate
    last; such maps can only drop squared terms from the norm part, so they
    map second-order cones into second-order cones."""
    def keeps_last(M):
        return M[-1][-1] == 1 and all(a == 0 for a in M[-1][:-1]) and all(r[-1] == 0 for r in M[:-1])
    return (is_signed_coordinate_map(T) and is_signed_coordinate_map(rl.transpose(S))
            and all(a >= 0 for r in T for a in r) and all(a >= 0 for r in S for a in r)
            and keeps_last(T) and keeps_last(S))


def random_lorentz_point(n: int, rng: random.Random, bound: int = 20) -> RVec:
    """A random rational point of L^n (interior or boundary)."""
    x = [Fraction(rng.randint(-bound, bound), rng.randint(1, 6)) for _ in range(n - 1)]
    norm2 = sum((a * a for a in x), Fraction(0))
    top = Fraction(rng.randint(0, bound), rng.randint(1, 6))
    # smallest half-integer grid value whose square dominates
    while top * top < norm2:
        top += 1
    return tuple(x) + (top,)


def sampled_positive(T: RMat, count: int = 64) -> bool:
    """Refutation-only check on exact boundary rays of L^3."""
    return all(lorentz_membership(rl.matvec(T, r)).inside for r in rational_boundary_rays(count))


def outside_ray_for_approx(k: int) -> RVec:
    """A rational boundary ray of L^3 not in the inscribed k-gon cone."""
    cone = inner_polyhedral_approx(k)
    ts = _spread_parameters(k)
    for a, b in zip(ts, ts[1:] + [ts[0] - 8]):
        mid = (a + b) / 2
        r = boundary_point(mid)
        if not cone.contains(r):
            return r
    raise RuntimeError("every midpoint lies in the approximation")
