"""Projective and injective tensor products of polyhedral cones.

An element u of E (x) F is stored as a dimE x dimF matrix, flattened
row-major when it is used as a point of R^(dimE*dimF).  So x (x) y is the
outer product x y^T and <u, phi (x) psi> = phi^T u psi.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Union

from . import ratlin as rl
from .cone import Cone, ConeError, PolygonCone, cone_equal, dual, strictly_positive_functional
from .lp import LinearProgram, Optimal, Outside, cone_membership, solve_lp
from .ratlin import RMat


class NotPolygonCone(ConeError):
    pass


class PreconditionViolated(ConeError):
    pass


@dataclass(frozen=True)
class TensorElement:
    dimE: int
    dimF: int
    matrix: RMat

    @classmethod
    def from_flat(cls, v, dimE: int, dimF: int) -> "TensorElement":
        return cls(dimE, dimF, rl.unflatten(v, dimE, dimF))

    @classmethod
    def elementary(cls, x, y) -> "TensorElement":
        return cls(len(x), len(y), rl.outer(rl.vec(x), rl.vec(y)))

    @property
    def flat(self) -> tuple:
        return rl.flatten(self.matrix)

    def pair(self, other: "TensorElement") -> Fraction:
        return rl.dot(self.flat, other.flat)

    def to_json(self) -> dict:
        return {"dimE": self.dimE, "dimF": self.dimF, "matrix": rl.mat_to_json(self.matrix)}

    @classmethod
    def from_json(cls, data) -> "TensorElement":
        return cls(int(data["dimE"]), int(data["dimF"]), rl.mat(data["matrix"]))


def tensor_vec(x, y) -> tuple:
    return tuple(a * b for a in x for b in y)


def tensor_rank(u: TensorElement) -> int:
    return rl.rank(u.matrix)


def _product_generators(E: Cone, F: Cone) -> list[tuple]:
    return [tensor_vec(g, h) for g in E.all_generators for h in F.all_generators]


def projective_cone(E: Cone, F: Cone) -> Cone:
    """Cone generated by x (x) y over generators of E and F."""
    return Cone(E.dim * F.dim, generators=_product_generators(E, F))


def injective_cone(E: Cone, F: Cone) -> Cone:
    """Tensors nonnegative on phi (x) psi for phi, psi in the dual cones.

    Kept in H-representation; the V-representation is computed on demand.
    """
    return Cone(E.dim * F.dim, inequalities=[tensor_vec(a, b) for a in E.all_inequalities
                                             for b in F.all_inequalities])


def min_generators(E: Cone, F: Cone) -> list[tuple]:
    return _product_generators(E, F)


def max_inequalities(E: Cone, F: Cone) -> list[tuple]:
    return [tensor_vec(a, b) for a in E.all_inequalities for b in F.all_inequalities]


def in_max(u, E: Cone, F: Cone) -> bool:
    u = u.flat if isinstance(u, TensorElement) else rl.vec(u)
    return all(rl.dot(a, u) >= 0 for a in max_inequalities(E, F))


# ---------------------------------------------------------------------------
# min = max

@dataclass(frozen=True)
class Equal:
    checked_rays: int = 0

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Differs:
    witness: TensorElement
    separator: TensorElement

    def __bool__(self):
        return False


def verify_differs(E: Cone, F: Cone, d: Differs) -> bool:
    """Witness lies in the injective cone, separator is nonnegative on the
    projective generators and negative on the witness."""
    w, s = d.witness.flat, d.separator.flat
    return (in_max(w, E, F)
            and all(rl.dot(s, g) >= 0 for g in min_generators(E, F))
            and rl.dot(s, w) < 0)


# above this many injective inequalities, look for a witness by LP first
DD_LIMIT = 40


def extremal_max_ray(E: Cone, F: Cone, objective, ineqs=None) -> Optional[tuple]:
    """The vertex of {u in max : <f (x) g, u> = 1} minimizing ``objective``.

    f, g are strictly positive on E and F, so the slice
    is a polytope and its vertices are the extremal rays.  The LP solved is
    the dual one (dimE*dimF rows), and the vertex is read off the optimal
    basis; it is returned only after its extremality is re-checked.
    """
    ineqs = list(ineqs if ineqs is not None else max_inequalities(E, F))
    D = E.dim * F.dim
    nrm = tensor_vec(strictly_positive_functional(E), strictly_positive_functional(F))
    cols = ineqs + [nrm, rl.neg(nrm)]
    A = rl.transpose(tuple(cols), D)
    cost = [Fraction(0)] * len(ineqs) + [Fraction(-1), Fraction(1)]
    out = solve_lp(LinearProgram(A, rl.vec(objective), tuple(cost)))
    if not isinstance(out, Optimal):
        return None
    rows = [ineqs[j] for j in out.basis if j < len(ineqs)]
    rhs = [Fraction(0)] * len(rows)
    if any(j >= len(ineqs) for j in out.basis):
        rows.append(nrm)
        rhs.append(Fraction(1))
    u = rl.solve(tuple(rows), rhs, D)
    if u is None or rl.is_zero(u) or any(rl.dot(a, u) < 0 for a in ineqs):
        return None
    tight = tuple(a for a in ineqs if rl.dot(a, u) == 0)
    if rl.rank(tight) != D - 1:
        return None
    return rl.canonical_ray(u)


def _search_differs(E: Cone, F: Cone, tries: int, seed: int, objectives=()) -> Optional[Differs]:
    ineqs = max_inequalities(E, F)
    gens = min_generators(E, F)
    rng = random.Random(seed)
    D = E.dim * F.dim
    hints = [rl.vec(o) for o in objectives]
    for k in range(len(hints) + tries):
        c = hints[k] if k < len(hints) else [Fraction(rng.randint(-9, 9)) for _ in range(D)]
        u = extremal_max_ray(E, F, c, ineqs)
        if u is None:
            continue
        verdict = cone_membership(u, gens)
        if isinstance(verdict, Outside):
            return Differs(TensorElement.from_flat(u, E.dim, F.dim),
                           TensorElement.from_flat(verdict.separator, E.dim, F.dim))
    return None


def min_equals_max(E: Cone, F: Cone, tmax: Optional[Cone] = None, method: str = "auto",
                   tries: int = 12, seed: int = 0, objectives=()) -> Union[Equal, Differs]:
    """Compare the two tensor cones exactly.

    ``dd`` walks the canonical extremal rays (and lineality) of the
    injective cone in order and returns the first one outside the
    projective cone.  ``search`` first tries LP vertices of a compact slice
    of the injective cone under seeded random objectives; each is an
    extremal ray, so a hit is the same kind of witness.  Without a hit it
    falls back to ``dd``; Equal is only ever concluded by ``dd``.  ``auto``
    searches when the inequality list is longer than DD_LIMIT and both
    cones are proper and generating.  ``objectives`` are tried before the
    random ones; a functional that is >= 0 on the projective cone and
    negative somewhere on the injective one always yields a witness.
    """
    if method not in ("auto", "dd", "search"):
        raise ValueError(f"unknown method {method!r}")
    if tmax is None and method != "dd":
        big = len(E.all_inequalities) * len(F.all_inequalities) > DD_LIMIT
        pointed = all(c.is_proper() and c.is_generating() for c in (E, F))
        if pointed and (method == "search" or big):
            found = _search_differs(E, F, tries, seed, objectives)
            if found is not None:
                return found
    tmax = tmax or injective_cone(E, F)
    gens = min_generators(E, F)
    candidates = list(tmax.rays) + list(tmax.lineality) + [rl.neg(l) for l in tmax.lineality]
    for u in candidates:
        verdict = cone_membership(u, gens)
        if isinstance(verdict, Outside):
            return Differs(TensorElement.from_flat(u, E.dim, F.dim),
                           TensorElement.from_flat(verdict.separator, E.dim, F.dim))
    return Equal(len(candidates))


def min_subset_max(E: Cone, F: Cone) -> bool:
    """Every projective generator satisfies every injective inequality."""
    ineqs = max_inequalities(E, F)
    return all(rl.dot(a, g) >= 0 for g in min_generators(E, F) for a in ineqs)


# ---------------------------------------------------------------------------
# duality

@dataclass
class DualityReport:
    min_dual_is_max_of_duals: bool
    max_dual_is_min_of_duals: bool
    min_closed: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.min_dual_is_max_of_duals and self.max_dual_is_min_of_duals and self.min_closed


def verify_duality(E: Cone, F: Cone) -> DualityReport:
    tmin = projective_cone(E, F)
    tmax = injective_cone(E, F)
    dE, dF = dual(E), dual(F)
    a = cone_equal(dual(tmin), injective_cone(dE, dF))
    b = cone_equal(dual(tmax), projective_cone(dE, dF))
    c = cone_equal(dual(dual(tmin)), tmin)
    return DualityReport(a, b, c, {
        "min_rays": len(tmin.rays), "min_facets": len(tmin.facets),
        "max_rays": len(tmax.rays), "max_facets": len(tmax.facets),
    })


# ---------------------------------------------------------------------------
# 3-dimensional polyhedral cones

@dataclass(frozen=True)
class FaceDescriptor:
    k: int
    l: int
    tight_rays: tuple  # 1-based (i, j)
    containing_facets: tuple  # 1-based (k, l) whose facet contains this face


def _require_polygon(c: Cone) -> PolygonCone:
    if not isinstance(c, PolygonCone):
        raise NotPolygonCone("expected a homogenized polygon with cyclic ray order")
    return c


def _tightness(E: PolygonCone, F: PolygonCone):
    """zE[k][i] is True iff phi_k(v_i) = 0 (0-based)."""
    zE = [[rl.dot(phi, v) == 0 for v in E.cyclic_rays] for phi in E.cyclic_facets]
    zF = [[rl.dot(psi, w) == 0 for w in F.cyclic_rays] for psi in F.cyclic_facets]
    return zE, zF


def _tight_pairs(E, F, zE, zF, k0, l0) -> frozenset:
    """0-based (i, j) with <v_i (x) w_j, phi_k (x) psi_l> = 0, by exact
    evaluation of the product pairing."""
    out = set()
    for i, v in enumerate(E.cyclic_rays):
        a = rl.dot(E.cyclic_facets[k0], v)
        for j, w in enumerate(F.cyclic_rays):
            if a * rl.dot(F.cyclic_facets[l0], w) == 0:
                out.add((i, j))
    return frozenset(out)


def facet_F(E: Cone, F: Cone, k: int, l: int) -> FaceDescriptor:
    """Face of the projective cone exposed by phi_k (x) psi_l (1-based, cyclic)."""
    E, F = _require_polygon(E), _require_polygon(F)
    m, n = E.m, F.m
    zE, zF = _tightness(E, F)
    tight = _tight_pairs(E, F, zE, zF, (k - 1) % m, (l - 1) % n)
    return _descriptor(E, F, zE, zF, k, l, tight)


def _descriptor(E, F, zE, zF, k, l, tight) -> FaceDescriptor:
    containing = []
    for kk in range(E.m):
        for ll in range(F.m):
            if all(zE[kk][i] or zF[ll][j] for i, j in tight):
                containing.append((kk + 1, ll + 1))
    return FaceDescriptor(k, l, tuple(sorted((i + 1, j + 1) for i, j in tight)), tuple(containing))


@dataclass
class ObstructionReport:
    m: int
    n: int
    min_ray_count: int
    facet_tight_counts: dict  # (k, l) -> count
    c_tight: tuple
    c_dim: int
    c_containing_F: tuple
    c_containing_facets: int
    extra_functional: TensorElement
    extra_rank: int
    extra_tight_rank: int

    @property
    def ok(self) -> bool:
        m, n = self.m, self.n
        return (self.min_ray_count == m * n
                and all(c == 2 * m + 2 * n - 4 for c in self.facet_tight_counts.values())
                and len(self.c_tight) == 4
                and len(self.c_containing_F) == 4
                and self.c_containing_facets >= 9 - self.c_dim
                and self.c_containing_facets > len(self.c_containing_F)
                and self.extra_rank >= 2
                and self.extra_tight_rank == 8)


def obstruction_3x3(E: Cone, F: Cone, tmin: Optional[Cone] = None) -> ObstructionReport:
    """The face C = F11 n F12 n F33 n F34 and the facet it forces.

    C has four extremal rays but lies in only four facets of the form
    F_{k,l}; a face of dimension dim(C) in a 9-dimensional pointed cone
    lies in at least 9 - dim(C) facets, so some facet of the projective
    cone is not of that form.  Its functional is an extremal ray of the
    injective cone of the duals with matrix rank >= 2; it is extracted
    from the facet list of the projective cone.
    """
    E, F = _require_polygon(E), _require_polygon(F)
    m, n = E.m, F.m
    if m < 4 or n < 4:
        raise PreconditionViolated("both polygons need at least 4 vertices")
    zE, zF = _tightness(E, F)
    counts = {}
    tight = {}
    for k in range(m):
        for l in range(n):
            t = _tight_pairs(E, F, zE, zF, k, l)
            tight[(k, l)] = t
            counts[(k + 1, l + 1)] = len(t)
    C = tight[(0, 0)] & tight[(0, 1)] & tight[(2, 2)] & tight[(2, 3)]
    desc = _descriptor(E, F, zE, zF, 0, 0, C)

    gens = [tensor_vec(E.cyclic_rays[i], F.cyclic_rays[j]) for i in range(m) for j in range(n)]
    c_vecs = [tensor_vec(E.cyclic_rays[i], F.cyclic_rays[j]) for i, j in sorted(C)]
    c_dim = rl.rank(tuple(c_vecs))
    if tmin is None:
        tmin = Cone(9, generators=gens)
    c_int = [rl.to_integer_vector(v) for v in c_vecs]
    facets_through_c = [f for f in tmin.facets
                        if not any(sum(a * b for a, b in zip(rl.to_integer_vector(f), v)) for v in c_int)]
    extra = None
    for f in facets_through_c:
        te = TensorElement.from_flat(f, 3, 3)
        if tensor_rank(te) >= 2:
            extra = te
            break
    if extra is None:
        raise RuntimeError("no rank >= 2 facet through C; the face lattice computation is wrong")
    tight_gens = tuple(g for g in gens if rl.dot(extra.flat, g) == 0)
    return ObstructionReport(
        m=m, n=n,
        min_ray_count=len(tmin.rays),
        facet_tight_counts=counts,
        c_tight=desc.tight_rays,
        c_dim=c_dim,
        c_containing_F=desc.containing_facets,
        c_containing_facets=len(facets_through_c),
        extra_functional=extra,
        extra_rank=tensor_rank(extra),
        extra_tight_rank=rl.rank(tight_gens),
    )


def swap(u: TensorElement) -> TensorElement:
    return TensorElement(u.dimF, u.dimE, rl.transpose(u.matrix, u.dimF))


def rank_one_pattern(m: int, n: int, k: int, l: int) -> set:
    """1-based (i, j) with i in {k, k+1} or j in {l, l+1}, cyclically."""
    rows = {k, k % m + 1}
    cols = {l, l % n + 1}
    return {(i, j) for i, j in product(range(1, m + 1), range(1, n + 1)) if i in rows or j in cols}
