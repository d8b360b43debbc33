"""Reports, certificates and the standalone verifier.

A report is a list of claims.  A passing claim carries a certificate: a
JSON object whose ``type`` selects a checker below.  Checkers use only
ratlin arithmetic, plus the double description engine run in reversed
insertion order where a certificate asserts that a list of rays or facets
is complete (no short certificate exists for that).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import ratlin as rl
from .cone import double_description

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


# ---------------------------------------------------------------------------
# the report

@dataclass
class Claim:
    id: str
    statement: str
    status: str
    certificate: Optional[dict] = None
    values: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"id": self.id, "statement": self.statement, "status": self.status}
        if self.values:
            out["values"] = _jsonable(self.values)
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def _jsonable(x):
    if isinstance(x, Fraction):
        return rl.rat_str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class Report:
    command: list
    instances: dict = field(default_factory=dict)
    claims: list = field(default_factory=list)

    def describe(self, name: str, description: str) -> None:
        self.instances[name] = description

    def add(self, id: str, statement: str, ok: bool, certificate: Optional[dict] = None,
            **values) -> Claim:
        c = Claim(id, statement, PASS if ok else FAIL, certificate, values)
        self.claims.append(c)
        return c

    def skip(self, id: str, statement: str, reason: str) -> Claim:
        c = Claim(id, statement, SKIPPED, None, {"reason": reason})
        self.claims.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.claims)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> dict:
        return {"command": list(self.command), "instances": dict(self.instances),
                "claims": [c.to_json() for c in self.claims]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    def render_text(self) -> str:
        lines = ["command: " + " ".join(self.command)]
        for name, desc in self.instances.items():
            lines.append(f"instance {name}: {desc}")
        for c in self.claims:
            lines.append(f"[{c.status.upper():7}] {c.id}: {c.statement}")
            for k, v in c.values.items():
                lines.append(f"          {k} = {_short(_jsonable(v))}")
        passed = sum(c.status == PASS for c in self.claims)
        lines.append(f"{passed}/{len(self.claims)} claims pass")
        return "\n".join(lines) + "\n"


def _short(v) -> str:
    s = json.dumps(v)
    return s if len(s) <= 100 else s[:97] + "..."


# ---------------------------------------------------------------------------
# certificate builders (objects in, JSON out)

def J(m) -> list:
    """Matrix or list of vectors as rational strings."""
    return rl.mat_to_json(m)


def cone_cert(c, defining: Optional[str] = None) -> dict:
    """Canonical data of a cone; ``defining`` ties it to the raw generators
    or inequalities the cone was built from."""
    out = {"type": "cone_data", "dim": c.dim, "rays": J(c.rays), "lineality": J(c.lineality),
           "facets": J(c.facets), "equations": J(c.equations)}
    if defining == "generators":
        out["defining_generators"] = J(c.generators)
    elif defining == "inequalities":
        out["defining_inequalities"] = J(c.inequalities)
    return out


def membership_cert(point, generators, coefficients) -> dict:
    return {"type": "membership", "point": rl.vec_to_json(point), "generators": J(generators),
            "coefficients": rl.vec_to_json(coefficients)}


def separation_cert(point, generators, separator) -> dict:
    return {"type": "separation", "point": rl.vec_to_json(point), "generators": J(generators),
            "separator": rl.vec_to_json(separator)}


def conj(*certs, **named) -> dict:
    out = {"type": "all", "parts": [c for c in certs if c is not None]}
    for k, v in named.items():
        out["parts"].append(v)
    return out


# ---------------------------------------------------------------------------
# verifier

class CertificateError(Exception):
    pass


def _req(cond: bool, msg: str) -> None:
    if not cond:
        raise CertificateError(msg)


def _m(rows) -> tuple:
    return tuple(rl.vec(r) for r in rows)


def _canon_pair(lin, ext, dim):
    """Canonical (extremal, lineal) pair, computed with ratlin only."""
    lin = tuple(rl.vec(v) for v in lin)
    red, _, r = rl.rref(lin, dim) if lin else ((), [], 0)
    basis = tuple(red[:r])
    proj = rl.orthogonal_projector(basis, dim) if basis else None
    out = set()
    for v in ext:
        v = rl.vec(v)
        if proj is not None:
            v = rl.sub(v, rl.matvec(proj, v))
        if not rl.is_zero(v):
            out.add(rl.canonical_ray(v))
    return tuple(sorted(out)), basis


def _ints(vectors):
    return [rl.to_integer_vector(v) for v in vectors if not rl.is_zero(v)]


def _dd_reverse(vectors, dim):
    lin, ext = double_description(_ints(vectors), dim, reverse=True)
    return _canon_pair(lin, ext, dim)


def _both_signs(vs):
    return list(vs) + [rl.neg(v) for v in vs]


_CONE_CACHE: dict[str, tuple] = {}


def check_cone_data(c: dict) -> tuple:
    key = json.dumps(c, sort_keys=True)
    hit = _CONE_CACHE.get(key)
    if hit is None:
        hit = _check_cone_data(c)
        _CONE_CACHE[key] = hit
    return hit


def _iv(v) -> list:
    """Positive integer multiple of v: signs of pairings are unchanged."""
    return rl.to_integer_vector(v) if any(v) else [0] * len(v)


def _idot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _extremal(vectors, opposite, lin, dim):
    """Canonical set of the vectors that are extremal, given the complete
    opposite description: tight opposite rows of rank dim - |lin| - 1."""
    target = dim - len(lin) - 1
    kept = []
    opp = [(a, _iv(a)) for a in opposite]
    for v in vectors:
        w = _iv(v)
        tight = tuple(a for a, ai in opp if _idot(ai, w) == 0)
        if len(tight) >= target and rl.rank(tight) == target:
            kept.append(v)
    return _canon_pair(lin, kept, dim)[0]


def _check_cone_data(c: dict) -> tuple:
    """The claimed rays/lineality and facets/equations describe the cone
    given by the defining side (or by the claimed rays if none is given).

    One representation is recomputed by a reversed-order DD; the other is
    then pinned down without a second DD: the lineality (or equation
    space) is the kernel of the recomputed side, and the extremal
    elements are exactly the defining vectors that pass a tight-rank test.
    """
    dim = c["dim"]
    rays, lin = _m(c["rays"]), _m(c["lineality"])
    facets, eqs = _m(c["facets"]), _m(c["equations"])
    ifacets, ieqs = [_iv(a) for a in facets], [_iv(e) for e in eqs]
    for v in rays + lin:
        w = _iv(v)
        _req(all(_idot(a, w) == 0 for a in ieqs), "a generator violates an equation")
        _req(all(_idot(a, w) >= 0 for a in ifacets) if v in rays else
             all(_idot(a, w) == 0 for a in ifacets), "a generator violates an inequality")
    claimed_v, claimed_h = _canon_pair(lin, rays, dim), _canon_pair(eqs, facets, dim)
    if "defining_inequalities" in c:
        hside = _m(c["defining_inequalities"])
        _req(_dd_reverse(hside, dim) == claimed_v, "ray list is not the one cut out")
        span = rays + lin
        e2 = _canon_pair(rl.kernel_basis(span, dim) if span else rl.identity(dim), (), dim)[1]
        _req(e2 == claimed_h[1], "equations do not match the span of the rays")
        _req(_extremal(hside, span, e2, dim) == claimed_h[0], "facet list is not the one cut out")
    else:
        vside = _m(c["defining_generators"]) if "defining_generators" in c \
            else rays + tuple(_both_signs(lin))
        _req(_dd_reverse(vside, dim) == claimed_h, "facet list is not the one generated")
        normals = facets + eqs
        l2 = _canon_pair(rl.kernel_basis(normals, dim) if normals else rl.identity(dim), (), dim)[1]
        _req(l2 == claimed_v[1], "lineality does not match the facets")
        _req(_extremal(vside, normals, l2, dim) == claimed_v[0], "ray list is not the one generated")
    return rays, lin, facets, eqs


def _cone_from(c: dict):
    """(generators incl. both signs of lineality, inequalities incl. both
    signs of equations), after checking the cone data."""
    rays, lin, facets, eqs = check_cone_data(c)
    return rays + tuple(_both_signs(lin)), facets + tuple(_both_signs(eqs))


def _tvec(x, y):
    return tuple(a * b for a in x for b in y)


def check_membership_cert(c):
    p, gens, lam = rl.vec(c["point"]), _m(c["generators"]), rl.vec(c["coefficients"])
    _req(len(lam) == len(gens) and all(x >= 0 for x in lam), "bad coefficients")
    total = rl.zeros(len(p))
    for x, g in zip(lam, gens):
        if x:
            total = rl.add(total, rl.scale(x, g))
    _req(total == p, "coefficients do not reproduce the point")


def check_separation_cert(c):
    p, gens, s = rl.vec(c["point"]), _m(c["generators"]), rl.vec(c["separator"])
    _req(all(rl.dot(s, g) >= 0 for g in gens), "separator negative on a generator")
    _req(rl.dot(s, p) < 0, "separator not negative on the point")


def check_differs(c):
    """witness in max(E, F), separator >= 0 on min(E, F), <0 on witness."""
    gE, hE = _cone_from(c["E"])
    gF, hF = _cone_from(c["F"])
    w, s = rl.flatten(_m(c["witness"])), rl.flatten(_m(c["separator"]))
    _req(all(rl.dot(w, _tvec(a, b)) >= 0 for a in hE for b in hF), "witness not in the injective cone")
    _req(all(rl.dot(s, _tvec(x, y)) >= 0 for x in gE for y in gF), "separator negative on a product")
    _req(rl.dot(s, w) < 0, "separator does not separate the witness")
    if c.get("extremal"):
        D = len(w)
        tight = tuple(_tvec(a, b) for a in hE for b in hF if rl.dot(w, _tvec(a, b)) == 0)
        _req(rl.rank(tight) == D - 1, "witness is not an extremal ray")


def check_equal_tensor(c):
    """Every extremal ray and lineality direction of max(E, F) is a stated
    nonnegative combination of products; the ray list is complete."""
    gE, hE = _cone_from(c["E"])
    gF, hF = _cone_from(c["F"])
    tmax = dict(c["max"])
    tmax["defining_inequalities"] = [rl.vec_to_json(_tvec(a, b)) for a in hE for b in hF]
    rays, lin, _, _ = check_cone_data(tmax)
    gens = [_tvec(x, y) for x in gE for y in gF]
    targets = list(rays) + _both_signs(lin)
    coeffs = c["coefficients"]
    _req(len(coeffs) == len(targets), "one coefficient vector per direction is needed")
    for t, lam in zip(targets, coeffs):
        check_membership_cert({"point": rl.vec_to_json(t), "generators": J(gens), "coefficients": lam})


def _check_positive(T, dom_gens, cod_ineqs):
    for g in dom_gens:
        y = rl.matvec(T, g)
        _req(all(rl.dot(a, y) >= 0 for a in cod_ineqs), "map sends a generator outside the codomain")


def check_positive_map(c):
    T = _m(c["T"])
    gE, _ = _cone_from(c["domain"])
    _, hF = _cone_from(c["codomain"])
    _check_positive(T, gE, hF)
    if "trace" in c:
        _req(rl.trace(T) == rl.rat(c["trace"]), "trace mismatch")


def check_separable(c):
    T = _m(c["T"])
    gE, hE = _cone_from(c["domain"])
    gF, hF = _cone_from(c["codomain"])
    total = rl.zero_mat(len(T), len(T[0]) if T else 0)
    for term in c["terms"]:
        phi, y, k = rl.vec(term["functional"]), rl.vec(term["vector"]), rl.rat(term["coefficient"])
        _req(k > 0, "nonpositive coefficient")
        _req(all(rl.dot(phi, g) >= 0 for g in gE), "functional not in the dual cone")
        _req(all(rl.dot(a, y) >= 0 for a in hF), "vector not in the codomain cone")
        total = rl.mat_add(total, rl.mat_scale(k, rl.outer(y, phi)))
    _req(total == T, "terms do not sum to the map")
    _req(len(c["terms"]) <= len(gE[0] if gE else hE[0]) * len(T), "too many terms")


def check_entangled(c):
    T = _m(c["T"])
    gE, hE = _cone_from(c["domain"])
    gF, hF = _cone_from(c["codomain"])
    W = _m(c["witness"])  # dimE x dimF
    w = rl.flatten(W)
    _req(all(rl.dot(w, _tvec(phi, y)) >= 0 for phi in hE for y in gF), "witness negative on a separable term")
    _req(rl.dot(w, rl.flatten(rl.transpose(T))) < 0, "witness does not detect the map")


def check_simplex(c):
    rays, lin, facets, eqs = check_cone_data(c["cone"])
    dim = c["cone"]["dim"]
    is_simplex = not lin and len(rays) == dim and rl.rank(rays) == dim
    _req(is_simplex == bool(c["expected"]), "simplex status differs from the claim")


def check_retraction(c):
    T, S = _m(c["T"]), _m(c["S"])
    gA, hA = _cone_from(c["ambient"])
    gB, hB = _cone_from(c["sub"])
    k = c["sub"]["dim"]
    _req(rl.matmul(S, T, k) == rl.identity(k), "S T is not the identity")
    _check_positive(T, gB, hA)
    _check_positive(S, gA, hB)
    # dual pair: S^T maps dual(sub) into dual(ambient), T^T the other way
    _check_positive(rl.transpose(S, len(T)), hB, gA)
    _check_positive(rl.transpose(T, k), hA, gB)


def check_rank(c):
    r = rl.rank(_m(c["matrix"]))
    _req(r == c["rank"], "rank mismatch")


def check_tight_count(c):
    f = rl.vec(c["functional"])
    gens = _m(c["generators"])
    _req(all(rl.dot(f, g) >= 0 for g in gens), "functional negative on a generator")
    n = sum(1 for g in gens if rl.dot(f, g) == 0)
    _req(n == c["count"], f"tight count is {n}, not {c['count']}")


def check_facet_count_through(c):
    """Count facets of a checked cone that vanish on given face vectors."""
    rays, lin, facets, eqs = check_cone_data(c["cone"])
    face = _m(c["face"])
    for v in face:
        _req(any(v == r for r in rays), "face vector is not a listed extremal ray")
    n = sum(1 for f in facets if all(rl.dot(f, v) == 0 for v in face))
    _req(n == c["count"], "facet count through the face differs")
    _req(rl.rank(face) == c["face_dim"], "face dimension differs")
    if "at_least_codim" in c:
        _req(n >= c["at_least_codim"] - c["face_dim"], "too few facets through the face")


def check_facet_of(c):
    """functional is a listed facet of a checked cone, with the stated matrix rank."""
    rays, lin, facets, eqs = check_cone_data(c["cone"])
    f = rl.vec(c["functional"])
    _req(rl.canonical_ray(f) in facets, "functional is not a facet")
    _req(rl.rank(rl.unflatten(f, c["rows"], c["cols"])) == c["rank"], "rank mismatch")


def check_tight_in_cone(c):
    """Tight extremal rays of a checked cone: for each functional
    separately ("each") or for all of them at once ("common")."""
    rays, lin, _, _ = check_cone_data(c["cone"])
    fs = _m(c["functionals"])
    for f in fs:
        _req(all(rl.dot(f, r) >= 0 for r in rays) and all(rl.dot(f, l) == 0 for l in lin),
             "functional is not valid on the cone")
    if c["mode"] == "each":
        for f in fs:
            n = sum(1 for r in rays if rl.dot(f, r) == 0)
            _req(n == c["count"], f"a functional has {n} tight rays, not {c['count']}")
    else:
        n = sum(1 for r in rays if all(rl.dot(f, r) == 0 for f in fs))
        _req(n == c["count"], f"the common face has {n} rays, not {c['count']}")


def check_containing_count(c):
    """How many candidate functionals vanish on the face cut out by the
    face functionals."""
    rays, _, _, _ = check_cone_data(c["cone"])
    face = [r for r in rays if all(rl.dot(f, r) == 0 for f in _m(c["face_functionals"]))]
    n = sum(1 for g in _m(c["candidates"]) if all(rl.dot(g, r) == 0 for r in face))
    _req(n == c["count"], f"{n} candidates contain the face, not {c['count']}")


def check_ray_count(c):
    rays, lin, facets, eqs = check_cone_data(c["cone"])
    _req(len(rays) == c["count"] and len(lin) == c.get("lineality", 0), "ray count differs")
    _req(len(facets) == c.get("facets", len(facets)) and len(eqs) == c.get("equations", len(eqs)),
         "facet or equation count differs")


def check_partial_simplex(c):
    rays, lin, _, _ = check_cone_data(c["cone"])
    value = not lin and rl.rank(rays) == len(rays)
    _req(value == bool(c["expected"]), "partial simplex status differs from the claim")


def check_strictly_positive(c):
    rays, lin, _, _ = check_cone_data(c["cone"])
    f = rl.vec(c["functional"])
    _req(not lin, "a cone with lineality has no strictly positive functional")
    _req(all(rl.dot(f, r) > 0 for r in rays), "functional is not positive on every extremal ray")


def check_dual_pair(c):
    a = check_cone_data(c["cone"])
    b = check_cone_data(c["dual"])
    dim = c["cone"]["dim"]
    _req(_canon_pair(a[1], a[0], dim) == _canon_pair(b[3], b[2], dim)
         and _canon_pair(a[3], a[2], dim) == _canon_pair(b[1], b[0], dim),
         "the two cones are not dual to each other")


def _lorentz_form(x):
    return x[-1] * x[-1] - sum((a * a for a in x[:-1]), Fraction(0))


def _in_lorentz(x):
    if len(x) == 1:
        return x[0] >= 0
    return x[-1] >= 0 and _lorentz_form(x) >= 0


def check_form_preserving(c):
    T = _m(c["T"])
    n = len(T)
    Jm = tuple(tuple(Fraction((1 if i == n - 1 else -1) if i == j else 0) for j in range(n)) for i in range(n))
    _req(rl.matmul(rl.matmul(rl.transpose(T), Jm), T) == Jm, "quadratic form not preserved")
    _req(T[-1] == rl.unit(n, n - 1), "last coordinate not fixed")
    _req(rl.trace(T) == rl.rat(c["trace"]), "trace mismatch")
    for p in c.get("samples", []):
        _req(_in_lorentz(rl.matvec(T, rl.vec(p))), "sample leaves the cone")


def check_psd_iso(c):
    for a, b, cc in c["samples"]:
        a, b, cc = rl.rat(a), rl.rat(b), rl.rat(cc)
        v = (a - cc, 2 * b, a + cc)
        psd = a + cc >= 0 and a * cc - b * b >= 0
        _req(psd == _in_lorentz(v), "PSD test and cone membership disagree")
        _req(((v[0] + v[2]) / 2, v[1] / 2, (v[2] - v[0]) / 2) == (a, b, cc), "round trip fails")


def check_padding(c):
    T, S = _m(c["T"]), _m(c["S"])
    n = len(S)
    _req(rl.matmul(S, T, n) == rl.identity(n), "S T is not the identity")
    for p in c["ambient_points"]:
        p = rl.vec(p)
        _req(_in_lorentz(p) and _in_lorentz(rl.matvec(S, p)), "S leaves the cone")
    for p in c["sub_points"]:
        p = rl.vec(p)
        _req(_in_lorentz(p) and _in_lorentz(rl.matvec(T, p)), "T leaves the cone")
    # coordinate selections keeping the last coordinate last
    for M in (T, rl.transpose(S)):
        for col in rl.transpose(M):
            _req(sum(1 for x in col if x) <= 1 and all(x in (0, 1) for x in col), "not a selection")
    _req(T[-1][-1] == 1 and S[-1][-1] == 1, "last coordinate not kept")


def check_value(c):
    """A recomputable exact value: trace of a matrix, optionally given as
    a product of factors."""
    M = _m(c["matrix"])
    if "factors" in c:
        P = _m(c["factors"][0])
        for f in c["factors"][1:]:
            f = _m(f)
            P = rl.matmul(P, f, len(f[0]) if f else 0)
        _req(P == M, "factors do not multiply to the matrix")
    _req(rl.trace(M) == rl.rat(c["trace"]), "trace mismatch")


def check_lorentz_approx(c):
    """Every ray of the approximation lies in L^3; the outside point is on
    the boundary of L^3 and violates a facet of the approximation."""
    rays, lin, facets, _ = check_cone_data(c["cone"])
    _req(all(_in_lorentz(r) for r in rays), "a ray leaves L^3")
    p = rl.vec(c["outside"])
    _req(_in_lorentz(p) and _lorentz_form(p) == 0, "outside point is not a boundary point")
    _req(any(rl.dot(f, p) < 0 for f in facets), "outside point lies in the approximation")


def _truth(c) -> bool:
    kind = c["type"]
    if kind == "simplex":
        return bool(c["expected"])
    if kind in ("separable", "equal_tensor"):
        return True
    if kind in ("entangled", "differs"):
        return False
    if kind == "positive_map":  # a positive map of negative trace
        _req(rl.rat(c["trace"]) < 0, "trace is not negative")
        return False
    raise CertificateError(f"{kind} does not decide a condition")


def check_agree(c):
    """Each condition's certificate checks and decides it the stated way,
    and all conditions have the same truth value."""
    values = []
    for cond in c["conditions"]:
        check_certificate(cond["certificate"])
        v = _truth(cond["certificate"])
        _req(v == bool(cond["value"]), f"condition {cond['name']} is decided the other way")
        values.append(v)
    _req(len(set(values)) <= 1, "conditions disagree")


def check_all(c):
    for part in c["parts"]:
        check_certificate(part)


CHECKERS: dict[str, Callable[[dict], None]] = {
    "cone_data": check_cone_data,
    "membership": check_membership_cert,
    "separation": check_separation_cert,
    "differs": check_differs,
    "equal_tensor": check_equal_tensor,
    "positive_map": check_positive_map,
    "separable": check_separable,
    "entangled": check_entangled,
    "simplex": check_simplex,
    "retraction": check_retraction,
    "rank": check_rank,
    "tight_count": check_tight_count,
    "facet_count_through": check_facet_count_through,
    "facet_of": check_facet_of,
    "ray_count": check_ray_count,
    "partial_simplex": check_partial_simplex,
    "strictly_positive": check_strictly_positive,
    "dual_pair": check_dual_pair,
    "form_preserving": check_form_preserving,
    "psd_iso": check_psd_iso,
    "padding": check_padding,
    "value": check_value,
    "tight_in_cone": check_tight_in_cone,
    "containing_count": check_containing_count,
    "lorentz_approx": check_lorentz_approx,
    "agree": check_agree,
    "all": check_all,
}


def check_certificate(c: dict) -> None:
    kind = c.get("type")
    if kind not in CHECKERS:
        raise CertificateError(f"unknown certificate type {kind!r}")
    CHECKERS[kind](c)


@dataclass(frozen=True)
class Verification:
    claim: str
    ok: bool
    reason: str


def verify_report(data) -> list[Verification]:
    """Re-check every claim of a report given as JSON text or a dict.

    Passing claims must carry a certificate that checks; a failing claim
    is reported as a failure, skipped claims are ignored.
    """
    if isinstance(data, str):
        data = json.loads(data)
    out = []
    for claim in data["claims"]:
        cid, status = claim["id"], claim["status"]
        if status == SKIPPED:
            continue
        if status == FAIL:
            out.append(Verification(cid, False, "claim failed when the report was made"))
            continue
        cert = claim.get("certificate")
        if cert is None:
            out.append(Verification(cid, False, "passing claim without a certificate"))
            continue
        try:
            check_certificate(cert)
            out.append(Verification(cid, True, "ok"))
        except (CertificateError, KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as e:
            out.append(Verification(cid, False, f"{type(e).__name__}: {e}"))
    return out
