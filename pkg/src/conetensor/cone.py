"""Polyhedral convex cones.

A cone can be given by generators (V-representation) or by inequalities
``<x, phi> >= 0`` (H-representation).  Conversion between the two is done
by the double description method on primitive integer vectors; a
:class:`Cone` runs it lazily and caches the result.

Canonical forms: the lineality space is stored as an RREF basis, extremal
rays are orthogonally projected onto the complement of the lineality space
and scaled so that their first nonzero entry is +1 or -1.  Facets are
treated the same way relative to the span of the cone.  With these
conventions two cones are equal exactly when their canonical data agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from . import ratlin as rl
from .lp import LinearProgram, Optimal, solve_lp
from .ratlin import RMat, RVec


class ConeError(ValueError):
    pass


class NotProper(ConeError):
    pass


class NotProperGenerating(ConeError):
    pass


class NotConvexPosition(ConeError):
    pass


# ---------------------------------------------------------------------------
# double description

def _dot_int(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def double_description(inequalities: Sequence[Sequence[int]], dim: int,
                       reverse: bool = False) -> tuple[list[list[int]], list[list[int]]]:
    """Generators of {x : a.x >= 0 for every row a}.

    Returns (lineality basis, extremal rays), all primitive integer vectors.
    Rows are inserted in the given order (reversed if ``reverse``; the
    certificate verifier uses that as an independent second pass).
    Adjacency of two rays is decided by the rank of the rows tight at both.
    """
    rows = list(dict.fromkeys(tuple(rl.primitive(a)) for a in inequalities if any(a)))
    if reverse:
        rows.reverse()
    lin = [[int(i == j) for j in range(dim)] for i in range(dim)]
    rays: list[tuple[list[int], int]] = []  # (vector, bitmask of tight processed rows)
    done: list[tuple[int, ...]] = []
    all_bits = 0
    rank_cache: dict[int, int] = {}

    def tight_rank(mask: int) -> int:
        r = rank_cache.get(mask)
        if r is None:
            r = rl.int_rank([done[k] for k in _bits(mask)])
            rank_cache[mask] = r
        return r

    for a in rows:
        bit = 1 << len(done)
        done.append(a)
        k = next((i for i, l in enumerate(lin) if _dot_int(a, l)), None)
        if k is not None:
            l0 = lin.pop(k)
            s0 = _dot_int(a, l0)
            if s0 < 0:
                l0 = [-x for x in l0]
                s0 = -s0
            new_lin = []
            for l in lin:
                s = _dot_int(a, l)
                new_lin.append(rl.primitive([s0 * x - s * y for x, y in zip(l, l0)]) if s else l)
            lin = new_lin
            new_rays = []
            for r, z in rays:
                s = _dot_int(a, r)
                if s:
                    r = rl.primitive([s0 * x - s * y for x, y in zip(r, l0)])
                new_rays.append((r, z | bit))
            new_rays.append((l0, all_bits))
            rays = new_rays
            all_bits |= bit
            rank_cache.clear()
            continue

        pos, neg, zero = [], [], []
        for r, z in rays:
            s = _dot_int(a, r)
            if s > 0:
                pos.append((r, z, s))
            elif s < 0:
                neg.append((r, z, s))
            else:
                zero.append((r, z | bit))
        target = dim - len(lin) - 2
        created = []
        if pos and neg:
            columns = _transpose_bits([z for _, z, _ in pos], len(done))
            for rn, zn, sn in neg:
                cand = _at_least(columns, zn, target, len(pos))
                while cand:
                    low = cand & -cand
                    cand ^= low
                    rp, zp, sp = pos[low.bit_length() - 1]
                    common = zp & zn
                    if tight_rank(common) != target:
                        continue
                    w = rl.primitive([sp * x - sn * y for x, y in zip(rn, rp)])
                    created.append((w, common | bit))
        rays = [(r, z) for r, z, _ in pos] + zero + created
        all_bits |= bit
    return lin, [r for r, _ in rays]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


def _transpose_bits(masks: list[int], width: int) -> list[int]:
    """columns[j] has bit p set iff masks[p] has bit j set."""
    columns = [0] * width
    for p, z in enumerate(masks):
        for j in _bits(z):
            columns[j] |= 1 << p
    return columns


def _at_least(columns: list[int], rows: int, threshold: int, count: int) -> int:
    """Mask of the ``count`` items that are tight on at least ``threshold``
    of the given rows, by a bit-sliced population counter."""
    full = (1 << count) - 1
    if threshold <= 0:
        return full
    counter: list[int] = []
    for j in _bits(rows):
        carry = columns[j]
        for i in range(len(counter)):
            counter[i], carry = counter[i] ^ carry, counter[i] & carry
            if not carry:
                break
        if carry:
            counter.append(carry)
    gt, eq = 0, full
    for i in range(max(len(counter), threshold.bit_length()) - 1, -1, -1):
        c = counter[i] if i < len(counter) else 0
        if threshold >> i & 1:
            eq &= c
        else:
            gt |= eq & c
            eq &= ~c
    return gt | eq


# ---------------------------------------------------------------------------
# representations

@dataclass(frozen=True)
class ConeV:
    dim: int
    generators: tuple

    def to_json(self) -> dict:
        return {"dim": self.dim, "generators": rl.mat_to_json(self.generators)}


@dataclass(frozen=True)
class ConeH:
    dim: int
    inequalities: tuple

    def to_json(self) -> dict:
        return {"dim": self.dim, "inequalities": rl.mat_to_json(self.inequalities)}


def _ints(vectors) -> list[list[int]]:
    return [rl.to_integer_vector(v) for v in vectors if not rl.is_zero(v)]


def _rats(vectors) -> tuple:
    return tuple(tuple(Fraction(x) for x in v) for v in vectors)


def dd_v_to_h(c: ConeV) -> ConeH:
    """Minimal inequality description of the cone generated by ``c``."""
    eqs, facets = double_description(_ints(c.generators), c.dim)
    ineqs = _rats(facets) + _rats(eqs) + _rats([[-x for x in e] for e in eqs])
    return ConeH(c.dim, ineqs)


def dd_h_to_v(c: ConeH) -> ConeV:
    """Minimal generator description of the cone cut out by ``c``."""
    lin, rays = double_description(_ints(c.inequalities), c.dim)
    gens = _rats(rays) + _rats(lin) + _rats([[-x for x in l] for l in lin])
    return ConeV(c.dim, gens)


def _project_away(vectors, projector, dim) -> list[RVec]:
    """v - P v for each v: removes the component along range(P)."""
    if projector is None:
        return [rl.vec(v) for v in vectors if not rl.is_zero(v)]
    out = []
    for v in vectors:
        v = rl.vec(v)
        w = rl.sub(v, rl.matvec(projector, v))
        if not rl.is_zero(w):
            out.append(w)
    return out


def _canonical_set(vectors) -> tuple:
    return tuple(sorted({rl.canonical_ray(v) for v in vectors}))


def _basis_rref(vectors, dim) -> tuple:
    red, _, r = rl.rref(tuple(rl.vec(v) for v in vectors), dim)
    return tuple(red[:r])


def _reduce_side(vectors, other, dim) -> tuple:
    """Canonical (extremal, lineal) part of ``vectors`` given the minimal
    description ``other`` = (extremal, lineal) of the opposite side.

    A vector is extremal when the extremal vectors of the other side that
    vanish on it have rank one less than the dimension of the pointed part.
    """
    ext, lin_other = other
    lin = _basis_rref(rl.kernel_basis(tuple(ext) + tuple(lin_other), dim), dim)
    # vectors of this side span a space of dimension dim - len(lin_other)
    target = dim - len(lin_other) - len(lin) - 1
    proj = rl.orthogonal_projector(lin, dim) if lin else None
    ext_int = _ints(ext)
    keep = []
    for v in vectors:
        if rl.is_zero(v):
            continue
        vi = rl.to_integer_vector(v)
        tight = [e for e in ext_int if _dot_int(e, vi) == 0]
        if len(tight) == len(ext_int):
            continue  # lies in the lineal part
        if rl.int_rank(tight) == target:
            keep.append(v)
    return _canonical_set(_project_away(keep, proj, dim)), lin


# ---------------------------------------------------------------------------
# the cone

class Cone:
    """A polyhedral cone in R^dim, given by generators and/or inequalities.

    When both are supplied they are trusted to describe the same set (use
    :meth:`check_consistent` to confirm).  Generator and inequality order
    is preserved in :attr:`generators` / :attr:`inequalities`; the analysed
    attributes (:attr:`rays`, :attr:`facets`, ...) are canonical and sorted.
    """

    def __init__(self, dim: int, generators=None, inequalities=None):
        if generators is None and inequalities is None:
            raise ConeError("need generators or inequalities")
        self.dim = dim
        self._gens = None if generators is None else tuple(rl.vec(g) for g in generators)
        self._ineqs = None if inequalities is None else tuple(rl.vec(a) for a in inequalities)
        for v in (self._gens or ()) + (self._ineqs or ()):
            if len(v) != dim:
                raise rl.DimensionError(f"vector of length {len(v)} in a cone of dimension {dim}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_generators(cls, generators, dim: Optional[int] = None) -> "Cone":
        generators = [rl.vec(g) for g in generators]
        if dim is None:
            if not generators:
                raise ConeError("dimension required for an empty generator list")
            dim = len(generators[0])
        return cls(dim, generators=generators)

    @classmethod
    def from_inequalities(cls, inequalities, dim: Optional[int] = None) -> "Cone":
        inequalities = [rl.vec(a) for a in inequalities]
        if dim is None:
            if not inequalities:
                raise ConeError("dimension required for an empty inequality list")
            dim = len(inequalities[0])
        return cls(dim, inequalities=inequalities)

    @classmethod
    def _analysed(cls, dim, rays, lineality, facets, equations) -> "Cone":
        """Build a cone whose canonical data is already known."""
        c = cls(dim,
                generators=list(rays) + list(lineality) + [rl.neg(l) for l in lineality],
                inequalities=list(facets) + list(equations) + [rl.neg(e) for e in equations])
        c.__dict__["_vdata"] = (tuple(rays), tuple(lineality))
        c.__dict__["_hdata"] = (tuple(facets), tuple(equations))
        return c

    @classmethod
    def orthant(cls, n: int) -> "Cone":
        return cls.from_generators(rl.identity(n), n)

    @classmethod
    def whole_space(cls, n: int) -> "Cone":
        return cls(n, inequalities=[])

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls(n, generators=[])

    # -- raw representations ----------------------------------------------

    @property
    def generators(self) -> tuple:
        if self._gens is None:
            rays, lin = self._vdata
            self._gens = tuple(rays) + tuple(lin) + tuple(rl.neg(l) for l in lin)
        return self._gens

    @property
    def inequalities(self) -> tuple:
        if self._ineqs is None:
            facets, eqs = self._hdata
            self._ineqs = tuple(facets) + tuple(eqs) + tuple(rl.neg(e) for e in eqs)
        return self._ineqs

    def v_rep(self) -> ConeV:
        return ConeV(self.dim, self.generators)

    def h_rep(self) -> ConeH:
        return ConeH(self.dim, self.inequalities)

    # -- analysis ---------------------------------------------------------

    @cached_property
    def _hdata(self):
        """(canonical facets, RREF equation basis)."""
        if self._gens is None:
            return _reduce_side(self._ineqs, self._vdata, self.dim)
        eqs, facets = double_description(_ints(self._gens), self.dim)
        eqs = _basis_rref(_rats(eqs), self.dim)
        proj = rl.orthogonal_projector(eqs, self.dim) if eqs else None
        return _canonical_set(_project_away(_rats(facets), proj, self.dim)), eqs

    @cached_property
    def _vdata(self):
        """(canonical extremal rays, RREF lineality basis)."""
        if self._ineqs is None or self._gens is not None:
            return _reduce_side(self._gens, self._hdata, self.dim)
        lin, rays = double_description(_ints(self._ineqs), self.dim)
        lin = _basis_rref(_rats(lin), self.dim)
        proj = rl.orthogonal_projector(lin, self.dim) if lin else None
        return _canonical_set(_project_away(_rats(rays), proj, self.dim)), lin

    @property
    def rays(self) -> tuple:
        """Canonical extremal rays of the pointed part."""
        return self._vdata[0]

    extremal_rays = rays

    @property
    def lineality(self) -> tuple:
        return self._vdata[1]

    @property
    def facets(self) -> tuple:
        return self._hdata[0]

    @property
    def equations(self) -> tuple:
        """Basis of the functionals vanishing on the cone (span complement)."""
        return self._hdata[1]

    @property
    def span_dim(self) -> int:
        return self.dim - len(self.equations)

    @property
    def all_generators(self) -> tuple:
        """Rays plus both signs of the lineality basis."""
        return tuple(self.rays) + tuple(self.lineality) + tuple(rl.neg(l) for l in self.lineality)

    @property
    def all_inequalities(self) -> tuple:
        return tuple(self.facets) + tuple(self.equations) + tuple(rl.neg(e) for e in self.equations)

    # -- predicates -------------------------------------------------------

    def contains(self, x) -> bool:
        x = rl.vec(x)
        return (all(rl.dot(f, x) >= 0 for f in self.facets)
                and all(rl.dot(e, x) == 0 for e in self.equations))

    def is_proper(self) -> bool:
        return not self.lineality

    def is_generating(self) -> bool:
        return not self.equations

    def is_simplex(self) -> bool:
        """Generated by a basis of the ambient space."""
        if self.lineality:
            return False
        rays = self.rays
        return len(rays) == self.dim and rl.rank(rays) == self.dim

    def is_partial_simplex(self) -> bool:
        """Linearly independent extremal rays and trivial lineality."""
        if self.lineality:
            return False
        rays = self.rays
        return not rays or rl.rank(rays) == len(rays)

    def is_polygon_cone(self) -> bool:
        return self.dim == 3 and self.is_proper() and self.is_generating()

    def check_consistent(self) -> bool:
        """Raw generators satisfy raw inequalities and vice versa, checked
        through each side's own minimal description."""
        if self._gens is None or self._ineqs is None:
            return True
        hv = Cone(self.dim, generators=self._gens)
        hh = Cone(self.dim, inequalities=self._ineqs)
        return cone_equal(hv, hh)

    def __repr__(self) -> str:
        return f"Cone(dim={self.dim}, rays={len(self.rays)}, lineality={len(self.lineality)})"

    # -- json -------------------------------------------------------------

    def to_json(self, form: str = "generators") -> dict:
        if form == "generators":
            return {"dim": self.dim, "generators": rl.mat_to_json(self.all_generators)}
        return {"dim": self.dim, "inequalities": rl.mat_to_json(self.all_inequalities)}


def cone_from_json(data) -> Cone:
    if isinstance(data, str):
        data = json.loads(data)
    has_g, has_h = "generators" in data, "inequalities" in data
    if has_g == has_h:
        raise ConeError('cone JSON needs exactly one of "generators" and "inequalities"')
    dim = int(data["dim"])
    if has_g:
        return Cone(dim, generators=[rl.vec(v) for v in data["generators"]])
    return Cone(dim, inequalities=[rl.vec(v) for v in data["inequalities"]])


def load_cone(path) -> Cone:
    with open(path) as fh:
        return cone_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# operations

def dual(c: Cone) -> Cone:
    """The cone of functionals nonnegative on ``c``."""
    return Cone._analysed(c.dim, rays=c.facets, lineality=c.equations,
                          facets=c.rays, equations=c.lineality)


def extremal_rays(c: Cone) -> tuple:
    return c.rays


def cone_equal(a: Cone, b: Cone) -> bool:
    if a.dim != b.dim:
        raise rl.DimensionError("cones live in different dimensions")
    return a.lineality == b.lineality and a.rays == b.rays


def contains_cone(big: Cone, small: Cone) -> bool:
    return all(big.contains(g) for g in small.all_generators)


def lineality_decomposition(c: Cone) -> tuple[tuple, Cone]:
    """(lineality basis, proper part inside the orthogonal complement)."""
    return c.lineality, Cone._analysed(
        c.dim, rays=c.rays, lineality=(),
        facets=_proper_part_facets(c), equations=_proper_part_equations(c))


def _proper_part_equations(c: Cone) -> tuple:
    return _basis_rref(tuple(c.equations) + tuple(c.lineality), c.dim)


def _proper_part_facets(c: Cone) -> tuple:
    eqs = _proper_part_equations(c)
    proj = rl.orthogonal_projector(eqs, c.dim) if eqs else None
    return _canonical_set(_project_away(c.facets, proj, c.dim))


@dataclass(frozen=True)
class ProperReduction:
    reduced: Cone
    push: RMat  # E -> R^k, positive, kills lineality and the span complement
    pull: RMat  # R^k -> E, embedding with push . pull = id


def proper_reduction(c: Cone) -> ProperReduction:
    """The cone span(c)/lineal(c), realized in coordinates as a retract.

    The reduced space is span(c) intersected with the orthogonal complement
    of the lineality space, with a basis chosen among the canonical rays.
    A proper generating cone is returned as is, with identity maps.
    """
    if c.is_proper() and c.is_generating():
        ident = rl.identity(c.dim)
        return ProperReduction(c, ident, ident)
    rays = list(c.rays)
    idx = rl.independent_subset(rays)
    basis = [rays[i] for i in idx]
    k = len(basis)
    if k == 0:
        return ProperReduction(Cone.zero(0), (), rl.zero_mat(c.dim, 0))
    pull = rl.transpose(tuple(basis))  # dim x k
    bt = tuple(basis)
    push = rl.matmul(rl.inverse(rl.matmul(bt, pull)), bt)  # k x dim
    reduced = Cone.from_generators([rl.matvec(push, r) for r in rays], k)
    return ProperReduction(reduced, push, pull)


def strictly_positive_functional(c: Cone) -> RVec:
    """Sum of the facet functionals; positive on every nonzero element."""
    if c.lineality:
        raise NotProper("cone has a nontrivial lineality space")
    f = rl.zeros(c.dim)
    for phi in c.facets:
        f = rl.add(f, phi)
    return f


# ---------------------------------------------------------------------------
# constructors for standard instances

def direct_sum(a: Cone, b: Cone) -> Cone:
    n = a.dim + b.dim
    za, zb = rl.zeros(b.dim), rl.zeros(a.dim)
    gens = [tuple(g) + za for g in a.all_generators] + [zb + tuple(g) for g in b.all_generators]
    return Cone(n, generators=gens)


def simplex_cone(basis) -> Cone:
    basis = [rl.vec(v) for v in basis]
    n = len(basis[0])
    if len(basis) != n or rl.rank(tuple(basis)) != n:
        raise ConeError("a simplex cone needs a basis")
    return Cone(n, generators=basis)


def _det3(a, b, c) -> Fraction:
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _cross(a, b) -> RVec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


class PolygonCone(Cone):
    """Homogenization of a convex polygon, keeping the cyclic order.

    ``cyclic_rays[i]`` is (x_i, y_i, 1); ``cyclic_facets[i]`` is the
    functional tight on rays i and i+1 (mod m).
    """

    def __init__(self, cyclic_rays, cyclic_facets):
        super().__init__(3, generators=cyclic_rays, inequalities=cyclic_facets)
        self.cyclic_rays = tuple(cyclic_rays)
        self.cyclic_facets = tuple(cyclic_facets)

    @property
    def m(self) -> int:
        return len(self.cyclic_rays)


def polygon_homogenization(vertices) -> PolygonCone:
    """Cone over a counterclockwise, strictly convex polygon at height 1."""
    pts = [rl.vec(v) for v in vertices]
    m = len(pts)
    if m < 3 or any(len(p) != 2 for p in pts):
        raise NotConvexPosition("need at least 3 planar vertices")
    rays = [p + (Fraction(1),) for p in pts]
    facets = []
    for i in range(m):
        phi = _cross(rays[i], rays[(i + 1) % m])
        for j in range(m):
            if j in (i, (i + 1) % m):
                continue
            if rl.dot(phi, rays[j]) <= 0:
                raise NotConvexPosition(
                    f"vertex {j} is not strictly left of edge ({i}, {(i + 1) % m})")
        facets.append(phi)
    return PolygonCone(rays, facets)


def as_polygon_cone(c: Cone) -> PolygonCone:
    """The same cone with its extremal rays in cyclic order.

    Consecutive rays share a facet; facet k is the one tight on rays k and
    k+1.  Works in the cone's own coordinates.
    """
    if isinstance(c, PolygonCone):
        return c
    if c.dim != 3 or not c.is_proper() or not c.is_generating():
        raise ConeError("expected a proper generating cone in R^3")
    rays, facets = list(c.rays), list(c.facets)
    tight = [[i for i, r in enumerate(rays) if rl.dot(f, r) == 0] for f in facets]
    if len(rays) < 3 or any(len(t) != 2 for t in tight):
        raise ConeError("not the cone over a polygon")
    order, used = [0], set()
    while len(order) < len(rays):
        cur = order[-1]
        k = next(k for k, t in enumerate(tight) if cur in t and k not in used)
        used.add(k)
        order.append(tight[k][0] if tight[k][1] == cur else tight[k][1])
    cyc = [rays[i] for i in order]
    m = len(cyc)
    cyc_facets = []
    for i in range(m):
        pair = {order[i], order[(i + 1) % m]}
        cyc_facets.append(next(f for f, t in zip(facets, tight) if set(t) == pair))
    return PolygonCone(cyc, cyc_facets)


def regular_polygon(k: int) -> PolygonCone:
    """Rational inscribed approximation of the regular k-gon.

    Vertices come from the half-angle parametrization of the unit circle,
    so they are rational and on the circle; slopes are rational
    approximations of tan(pi*i/k) and remain in cyclic order.
    """
    from .lorentz import circle_points
    return polygon_homogenization(circle_points(k))


def homogenize_polytope(vertices) -> Cone:
    """Cone over a polytope placed at last coordinate 1."""
    return Cone.from_generators([rl.vec(v) + (Fraction(1),) for v in vertices])


def find_vertex_functional(c: Cone, ray_index: int) -> Optional[RVec]:
    """phi with phi(x0) = -1 and min_{i != 0} phi(x_i) maximal (capped at 1).

    Returns None when no phi has all other values positive.
    """
    rays = list(c.rays)
    n = c.dim
    x0 = rays[ray_index]
    others = [r for i, r in enumerate(rays) if i != ray_index]
    # variables: phi+ (n), phi- (n), t, slack_i for phi(x_i) - t - s_i = 0, u for t + u = 1
    k = len(others)
    nv = 2 * n + 1 + k + 1
    A, b = [], []
    row = list(x0) + [-a for a in x0] + [0] * (1 + k + 1)
    A.append(row); b.append(-1)
    for i, r in enumerate(others):
        row = list(r) + [-a for a in r] + [-1] + [0] * k + [0]
        row[2 * n + 1 + i] = -1
        A.append(row); b.append(0)
    row = [0] * (2 * n) + [1] + [0] * k + [1]
    A.append(row); b.append(1)
    cost = [0] * nv
    cost[2 * n] = -1
    out = solve_lp(LinearProgram(rl.mat(A), rl.vec(b), rl.vec(cost)))
    if not isinstance(out, Optimal) or -out.value <= 0:
        return None
    x = out.point
    return tuple(x[i] - x[n + i] for i in range(n))
