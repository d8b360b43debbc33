"""Order retracts of polyhedral cones.

A retraction of an ambient cone onto a sub-cone is a pair of positive maps
T: sub -> ambient and S: ambient -> sub with S T = id.  Vertex figures and
facets give retractions of codimension one; composing them reaches every
dimension down to three.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from . import ratlin as rl
from .cone import Cone, ConeError, NotProper, NotProperGenerating, cone_from_json, dual, \
    find_vertex_functional, strictly_positive_functional
from .lp import Outside, cone_membership
from .ratlin import RMat
from .sep import is_positive_map
from .tensorcone import Differs, Equal, TensorElement, min_equals_max, min_generators, \
    verify_differs


class NoVertexFigureFunctional(ConeError):
    pass


class InvalidRetraction(ConeError):
    pass


@dataclass(frozen=True)
class Retraction:
    ambient: Cone
    sub: Cone
    T: RMat  # ambient.dim x sub.dim
    S: RMat  # sub.dim x ambient.dim

    @property
    def projection(self) -> RMat:
        """T S, a positive idempotent on the ambient space."""
        return rl.matmul(self.T, self.S)

    def to_json(self) -> dict:
        return {"T": rl.mat_to_json(self.T), "S": rl.mat_to_json(self.S),
                "sub": self.sub.to_json()}

    @classmethod
    def from_json(cls, data, ambient: Cone) -> "Retraction":
        sub = cone_from_json(data["sub"])
        return cls(ambient, sub, rl.mat(data["T"]), rl.mat(data["S"]))


@dataclass(frozen=True)
class RetractionCheck:
    ok: bool
    reason: str = "ok"

    def __bool__(self):
        return self.ok


def _require_proper_generating(E: Cone) -> None:
    if not E.is_proper() or not E.is_generating():
        raise NotProperGenerating("cone must be proper and generating")


def identity_retraction(E: Cone) -> Retraction:
    ident = rl.identity(E.dim)
    return Retraction(E, E, ident, ident)


def vertex_figure(E: Cone, ray_index: int) -> Retraction:
    """Retraction onto ker(phi0) along the ray x0.

    phi0(x0) = -1 and phi0 is positive on the other extremal rays, so
    P = I + x0 phi0^T kills x0 and maps every other ray into the cone.
    The sub-space is parametrized by the kernel basis of phi0, whose free
    coordinates give the left inverse.
    """
    _require_proper_generating(E)
    rays = E.rays
    if not 0 <= ray_index < len(rays):
        raise IndexError(f"ray index {ray_index} out of range")
    n = E.dim
    phi = find_vertex_functional(E, ray_index)
    if phi is None:
        raise NoVertexFigureFunctional(f"no functional separates ray {ray_index}")
    x0 = rays[ray_index]
    P = rl.mat_add(rl.identity(n), rl.outer(x0, phi))
    basis = rl.kernel_basis((phi,), n)
    free = rl.free_columns((phi,), n)
    T = rl.transpose(tuple(basis), n)
    left = tuple(rl.unit(n, f) for f in free)
    S = rl.matmul(left, P)
    sub = Cone.from_generators([rl.matvec(S, x) for i, x in enumerate(rays) if i != ray_index], n - 1)
    return Retraction(E, sub, T, S)


def vertex_figure_projection(E: Cone, ray_index: int) -> RMat:
    return vertex_figure(E, ray_index).projection


def dual_retraction(r: Retraction) -> Retraction:
    """(S^T, T^T) retracts the dual ambient cone onto the dual sub-cone."""
    return Retraction(dual(r.ambient), dual(r.sub), rl.transpose(r.S, r.ambient.dim),
                      rl.transpose(r.T, r.sub.dim))


def facet_retract(E: Cone, facet_index: int) -> Retraction:
    """Retraction onto the span of a facet, from a dual vertex figure."""
    _require_proper_generating(E)
    if not 0 <= facet_index < len(E.facets):
        raise IndexError(f"facet index {facet_index} out of range")
    D = dual(E)
    vd = vertex_figure(D, D.rays.index(E.facets[facet_index]))
    back = dual_retraction(vd)
    return Retraction(E, back.sub, back.T, back.S)


def ray_retract(E: Cone, ray_index: int) -> Retraction:
    """Rank-one projection phi (x) x0 / phi(x0) onto the ray's span."""
    if not E.is_proper():
        raise NotProper("cone has a nontrivial lineality space")
    rays = E.rays
    if not 0 <= ray_index < len(rays):
        raise IndexError(f"ray index {ray_index} out of range")
    x0 = rays[ray_index]
    f = strictly_positive_functional(E)
    T = tuple((a,) for a in x0)
    S = (rl.scale(1 / rl.dot(f, x0), f),)
    return Retraction(E, Cone.orthant(1), T, S)


def verify_retraction(r: Retraction) -> RetractionCheck:
    """S T = id, T and S positive, and the same for the dual pair."""
    a, s = r.ambient, r.sub
    if len(r.T) != a.dim or any(len(row) != s.dim for row in r.T):
        return RetractionCheck(False, "T has the wrong shape")
    if len(r.S) != s.dim or any(len(row) != a.dim for row in r.S):
        return RetractionCheck(False, "S has the wrong shape")
    if rl.matmul(r.S, r.T, s.dim) != rl.identity(s.dim):
        return RetractionCheck(False, "S T is not the identity")
    if not is_positive_map(r.T, s, a):
        return RetractionCheck(False, "T is not positive")
    if not is_positive_map(r.S, a, s):
        return RetractionCheck(False, "S is not positive")
    d = dual_retraction(r)
    if rl.matmul(d.S, d.T, s.dim) != rl.identity(s.dim):
        return RetractionCheck(False, "dual pair does not compose to the identity")
    if not is_positive_map(d.T, d.sub, d.ambient):
        return RetractionCheck(False, "S^T is not positive on the dual cones")
    if not is_positive_map(d.S, d.ambient, d.sub):
        return RetractionCheck(False, "T^T is not positive on the dual cones")
    return RetractionCheck(True)


def compose(outer: Retraction, inner: Retraction) -> Retraction:
    """outer retracts A onto B, inner retracts B onto C; the result retracts A onto C."""
    if outer.sub.dim != inner.ambient.dim:
        raise rl.DimensionError("retractions do not chain")
    return Retraction(outer.ambient, inner.sub, rl.matmul(outer.T, inner.T, inner.sub.dim),
                      rl.matmul(inner.S, outer.S, outer.ambient.dim))


# ---------------------------------------------------------------------------
# transfer of min != max along retracts

@dataclass
class TransferReport:
    sub_verdict: Union[Equal, Differs]
    ambient_verdict: Union[Equal, Differs]
    lifted: bool
    certified: bool
    notes: list = field(default_factory=list)

    @property
    def implication_holds(self) -> bool:
        return not isinstance(self.sub_verdict, Differs) or isinstance(self.ambient_verdict, Differs)


def lift_differs(rG: Retraction, rH: Retraction, d: Differs) -> Differs:
    """Push the witness through T_G (x) T_H and pull the separator back through S_G, S_H."""
    dG, dH = rG.ambient.dim, rH.ambient.dim
    w = rl.matmul(rl.matmul(rG.T, d.witness.matrix, rH.sub.dim), rl.transpose(rH.T, rH.sub.dim), dH)
    sep = rl.matmul(rl.matmul(rl.transpose(rG.S, dG), d.separator.matrix, rH.sub.dim), rH.S, dH)
    return Differs(TensorElement(dG, dH, w), TensorElement(dG, dH, sep))


def retract_transfer(G: Cone, H: Cone, rG: Retraction, rH: Retraction) -> TransferReport:
    for r, c in ((rG, G), (rH, H)):
        check = verify_retraction(r)
        if not check:
            raise InvalidRetraction(check.reason)
        if r.ambient.dim != c.dim:
            raise InvalidRetraction("retraction does not belong to the given cone")
    sub = min_equals_max(rG.sub, rH.sub)
    notes = []
    if isinstance(sub, Differs):
        lifted = lift_differs(rG, rH, sub)
        ok = verify_differs(G, H, lifted)
        lp_says_outside = isinstance(cone_membership(lifted.witness.flat, min_generators(G, H)), Outside)
        return TransferReport(sub, lifted, True, ok and lp_says_outside, notes)
    amb = min_equals_max(G, H)
    if isinstance(amb, Differs):
        notes.append("sub-pair is Equal but the ambient pair differs: "
                     "the transfer only runs from the retract to the ambient cones")
        ok = verify_differs(G, H, amb)
    else:
        ok = True
    return TransferReport(sub, amb, False, ok, notes)


# ---------------------------------------------------------------------------
# three-dimensional retracts

def _children(E: Cone):
    for i in range(len(E.facets)):
        yield facet_retract(E, i)
    for i in range(len(E.rays)):
        yield vertex_figure(E, i)


def three_dim_retract_scan(E: Cone) -> Optional[Retraction]:
    """A composed retraction onto a non-simplex 3-dimensional cone, or None.

    Facets come before vertex figures, lowest index first; the scan only
    descends into children that are not simplex cones.
    """
    _require_proper_generating(E)
    if E.dim <= 2:
        return None
    if E.dim == 3:
        return None if E.is_simplex() else identity_retraction(E)
    for child in _children(E):
        if child.sub.is_simplex():
            continue
        found = three_dim_retract_scan(child.sub)
        if found is not None:
            return compose(child, found)
    return None
