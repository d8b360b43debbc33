"""Verification suites: each builds a certified :class:`Report`.

The CLI's ``check`` subcommand and the acceptance tests both call these,
so the reports they produce are the ones the standalone verifier sees.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Optional

from . import ratlin as rl
from .cone import Cone, PolygonCone, as_polygon_cone, cone_equal, dual, proper_reduction
from .corpus import Instance, load_corpus, proper_generating, random_polygon, square_cone
from .lorentz import (inner_polyhedral_approx, lorentz_retract_maps, outside_ray_for_approx,
                      random_lorentz_point, rational_boundary_rays, rotation_witness)
from .lp import Inside, cone_membership
from .report import J, Report, cone_cert, conj
from .retract import (Retraction, facet_retract, three_dim_retract_scan, verify_retraction,
                      vertex_figure)
from .sep import (Entangled, Separable, check_min_equals_max_equivalences, is_positive_map,
                  is_separable, min_trace_positive_map)
from .tensorcone import (Differs, Equal, injective_cone, min_equals_max, min_generators,
                         obstruction_3x3, projective_cone, tensor_vec)


# ---------------------------------------------------------------------------
# certificate builders for library objects

def _defining(c: Cone) -> str:
    return "generators" if c._gens is not None else "inequalities"


def icert(c: Cone) -> dict:
    """Cone data tied to how the instance was given."""
    return cone_cert(c, _defining(c))


def differs_cert(E: Cone, F: Cone, d: Differs, extremal: bool = True) -> dict:
    return {"type": "differs", "E": icert(E), "F": icert(F), "witness": J(d.witness.matrix),
            "separator": J(d.separator.matrix), "extremal": extremal}


def equal_cert(E: Cone, F: Cone) -> dict:
    tmax = injective_cone(E, F)
    gens = min_generators(E, F)
    targets = list(tmax.rays) + list(tmax.lineality) + [rl.neg(l) for l in tmax.lineality]
    coeffs = []
    for t in targets:
        v = cone_membership(t, gens)
        if not isinstance(v, Inside):
            raise ValueError("the injective cone has a direction outside the projective cone")
        coeffs.append(rl.vec_to_json(v.coefficients))
    return {"type": "equal_tensor", "E": icert(E), "F": icert(F), "max": cone_cert(tmax),
            "coefficients": coeffs}


def tensor_cert(E: Cone, F: Cone, verdict) -> dict:
    return equal_cert(E, F) if isinstance(verdict, Equal) else differs_cert(E, F, verdict)


def separable_cert(T, E: Cone, F: Cone, verdict: Separable) -> dict:
    return {"type": "separable", "T": J(T), "domain": icert(E), "codomain": icert(F),
            "terms": [{"functional": rl.vec_to_json(t.functional), "vector": rl.vec_to_json(t.vector),
                       "coefficient": rl.rat_str(t.coefficient)} for t in verdict.terms]}


def entangled_cert(T, E: Cone, F: Cone, verdict: Entangled) -> dict:
    return {"type": "entangled", "T": J(T), "domain": icert(E), "codomain": icert(F),
            "witness": J(verdict.witness.matrix)}


def verdict_cert(T, E, F, verdict) -> dict:
    if isinstance(verdict, Separable):
        return separable_cert(T, E, F, verdict)
    return entangled_cert(T, E, F, verdict)


def positive_map_cert(T, E: Cone, F: Cone, with_trace: bool = False) -> dict:
    out = {"type": "positive_map", "T": J(T), "domain": icert(E), "codomain": icert(F)}
    if with_trace:
        out["trace"] = rl.rat_str(rl.trace(T))
    return out


def simplex_cert(c: Cone) -> dict:
    return {"type": "simplex", "cone": icert(c), "expected": c.is_simplex()}


def retraction_cert(r: Retraction) -> dict:
    return {"type": "retraction", "T": J(r.T), "S": J(r.S), "ambient": icert(r.ambient),
            "sub": icert(r.sub)}


def _verdict_name(v) -> str:
    return "Equal" if isinstance(v, Equal) else "Differs"


# ---------------------------------------------------------------------------
# single-instance checks (also used by the CLI)

def check_min_eq_max(report: Report, E: Cone, F: Cone, label: str = "E, F") -> object:
    v = min_equals_max(E, F)
    rel = "=" if isinstance(v, Equal) else "!="
    report.add(f"min-eq-max[{label}]", f"min({label}) {rel} max({label})", True,
               tensor_cert(E, F, v), verdict=_verdict_name(v))
    return v


def check_duality(report: Report, E: Cone, F: Cone, label: str = "E, F") -> None:
    dE, dF = dual(E), dual(F)
    tmin, tmax = projective_cone(E, F), injective_cone(E, F)
    dmax, dmin = injective_cone(dE, dF), projective_cone(dE, dF)
    a = cone_equal(dual(tmin), dmax)
    report.add(f"duality[{label}]/dual-of-min", "dual(min(E, F)) = max(dual E, dual F)", a,
               {"type": "dual_pair", "cone": cone_cert(tmin, "generators"),
                "dual": cone_cert(dmax, "inequalities")} if a else None)
    b = cone_equal(dual(tmax), dmin)
    report.add(f"duality[{label}]/dual-of-max", "dual(max(E, F)) = min(dual E, dual F)", b,
               {"type": "dual_pair", "cone": cone_cert(tmax, "inequalities"),
                "dual": cone_cert(dmin, "generators")} if b else None)
    c = cone_equal(dual(dual(tmin)), tmin)
    report.add(f"duality[{label}]/min-closed",
               "min(E, F) equals its double dual (the generated cone is closed)", c,
               cone_cert(tmin, "generators") if c else None)


def check_equivalences(report: Report, inst: Instance) -> None:
    E = inst.cone
    rep = check_min_equals_max_equivalences(E)
    ident = rl.identity(E.dim)
    ident_cert = verdict_cert(ident, E, E, rep.identity_verdict)
    if rep.trace_nonnegative:
        # tr(T) = sum c phi(T y) >= 0 for every positive T once id is separable
        trace_cert = ident_cert
    else:
        trace_cert = positive_map_cert(rep.trace.argmin, E, E, with_trace=True)
    conds = [
        {"name": "(i) simplex", "value": rep.simplex, "certificate": simplex_cert(E)},
        {"name": "(ii) identity separable", "value": rep.identity_separable, "certificate": ident_cert},
        {"name": "(iii) every positive map has nonnegative trace", "value": rep.trace_nonnegative,
         "certificate": trace_cert},
        {"name": "(vi) min = max for (dual E, E)", "value": rep.min_equals_max_dual,
         "certificate": tensor_cert(dual(E), E, rep.tensor_verdict)},
    ]
    report.add(f"equivalence[{inst.name}]",
               "conditions (i), (ii), (iii), (vi) agree", rep.agree and rep.certificates_ok,
               {"type": "agree", "conditions": conds},
               value=rep.simplex, min_trace=rep.trace.value)


def check_3x3(report: Report, E: PolygonCone, F: PolygonCone, label: str) -> None:
    E, F = as_polygon_cone(E), as_polygon_cone(F)
    m, n = E.m, F.m
    tmin = projective_cone(E, F)
    ob = obstruction_3x3(E, F, tmin)
    tc = cone_cert(tmin, "generators")
    report.add(f"3x3[{label}]/min-rays", f"min(E, F) has exactly m*n = {m * n} extremal rays",
               ob.min_ray_count == m * n,
               {"type": "ray_count", "cone": tc, "count": m * n, "lineality": 0},
               count=ob.min_ray_count)
    prods = [tensor_vec(phi, psi) for phi in E.cyclic_facets for psi in F.cyclic_facets]
    want = 2 * m + 2 * n - 4
    report.add(f"3x3[{label}]/facet-tight", f"every F_(k,l) contains 2m+2n-4 = {want} extremal rays",
               all(c == want for c in ob.facet_tight_counts.values()),
               {"type": "tight_in_cone", "cone": tc, "functionals": J(prods), "mode": "each",
                "count": want})
    cfun = [tensor_vec(E.cyclic_facets[k], F.cyclic_facets[l]) for k, l in ((0, 0), (0, 1), (2, 2), (2, 3))]
    report.add(f"3x3[{label}]/C-rays", "C = F11 n F12 n F33 n F34 contains exactly 4 extremal rays",
               len(ob.c_tight) == 4,
               {"type": "tight_in_cone", "cone": tc, "functionals": J(cfun), "mode": "common", "count": 4},
               tight=ob.c_tight)
    report.add(f"3x3[{label}]/C-in-F-facets", "exactly 4 facets of the form F_(k,l) contain C",
               len(ob.c_containing_F) == 4,
               {"type": "containing_count", "cone": tc, "face_functionals": J(cfun),
                "candidates": J(prods), "count": 4},
               containing=ob.c_containing_F)
    cvecs = [r for r in tmin.rays if all(rl.dot(f, r) == 0 for f in cfun)]
    report.add(f"3x3[{label}]/C-facets", "C lies in at least 9 - dim(C) facets of min(E, F), "
               "more than the 4 of the form F_(k,l)",
               ob.c_containing_facets >= 9 - ob.c_dim and ob.c_containing_facets > 4,
               {"type": "facet_count_through", "cone": tc, "face": J(cvecs),
                "count": ob.c_containing_facets, "face_dim": ob.c_dim, "at_least_codim": 9},
               dim_C=ob.c_dim, facets=ob.c_containing_facets)
    f = ob.extra_functional
    report.add(f"3x3[{label}]/rank-2-extremal",
               "max(dual E, dual F) has an extremal ray of matrix rank >= 2",
               ob.extra_rank >= 2 and ob.extra_tight_rank == 8,
               {"type": "facet_of", "cone": tc, "functional": rl.vec_to_json(f.flat), "rows": 3,
                "cols": 3, "rank": ob.extra_rank},
               rank=ob.extra_rank, functional=J(f.matrix))
    v = min_equals_max(E, F)
    report.add(f"3x3[{label}]/differs", "min(E, F) != max(E, F)", isinstance(v, Differs),
               differs_cert(E, F, v) if isinstance(v, Differs) else None)


def check_partial_simplex(report: Report, E: Cone, F: Cone, label: str) -> None:
    """E proper generating, F a partial simplex cone."""
    dE = dual(E)
    v = min_equals_max(dE, F)
    report.add(f"partial-simplex[{label}]/min-eq-max", "min(dual E, F) = max(dual E, F)",
               isinstance(v, Equal), equal_cert(dE, F) if isinstance(v, Equal) else None)
    red = proper_reduction(F)
    r = Retraction(F, red.reduced, red.pull, red.push)
    ok = red.reduced.is_simplex() and bool(verify_retraction(r))
    report.add(f"partial-simplex[{label}]/pred-simplex",
               "the proper reduction span(F)/lineal(F) is a simplex cone and a retract of F", ok,
               conj(simplex_cert(red.reduced), retraction_cert(r)) if ok else None,
               reduced_dim=red.reduced.dim)


def check_separability(report: Report, T, E: Cone, F: Cone, label: str):
    from .sep import factor_through_simplex
    if not is_positive_map(T, E, F):
        report.add(f"separable[{label}]/positive", "the map is positive", False)
        return None
    report.add(f"separable[{label}]/positive", "the map is positive", True, positive_map_cert(T, E, F))
    v = is_separable(T, E, F)
    if isinstance(v, Separable):
        fac = factor_through_simplex(v, T)
        report.add(f"separable[{label}]/verdict", "the map is separable", True,
                   separable_cert(T, E, F, v), terms=len(v.terms), n=fac.n, R=J(fac.R), S=J(fac.S))
    else:
        report.add(f"separable[{label}]/verdict", "the map is entangled (positive, not separable)", True,
                   entangled_cert(T, E, F, v))
    return v


def check_retraction(report: Report, r: Retraction, label: str, statement: str) -> bool:
    chk = verify_retraction(r)
    report.add(f"retract[{label}]", statement, chk.ok, retraction_cert(r) if chk.ok else None,
               reason=chk.reason, sub_dim=r.sub.dim)
    return chk.ok


def check_scan(report: Report, inst: Instance) -> None:
    E = inst.cone
    found = three_dim_retract_scan(E)
    simplex = E.is_simplex()
    if found is None:
        report.add(f"scan3[{inst.name}]", "no non-simplex 3-dimensional retract, and E is a simplex cone",
                   simplex, simplex_cert(E) if simplex else None)
    else:
        ok = (not simplex and found.sub.dim == 3 and not found.sub.is_simplex()
              and bool(verify_retraction(found)))
        report.add(f"scan3[{inst.name}]",
                   "a non-simplex 3-dimensional retract exists, and E is not a simplex cone", ok,
                   conj(retraction_cert(found), simplex_cert(found.sub), simplex_cert(E)) if ok else None)


# ---------------------------------------------------------------------------
# the suites

def _corpus(instances: Optional[Iterable[Instance]]) -> list[Instance]:
    return list(instances) if instances is not None else load_corpus()


def dd_duality_suite(instances=None) -> Report:
    """DD round trip and double dual for every corpus cone."""
    report = Report(["check", "corpus-dd"])
    for inst in _corpus(instances):
        c = inst.cone
        report.describe(inst.name, inst.description)
        gen_side = Cone(c.dim, generators=c.generators)
        h_side = Cone(c.dim, inequalities=gen_side.inequalities)
        ok = cone_equal(gen_side, h_side)
        report.add(f"dd-roundtrip[{inst.name}]", "V -> H -> V gives back the same cone", ok,
                   cone_cert(gen_side, "generators") if ok else None,
                   rays=len(c.rays), facets=len(c.facets))
        dd = dual(dual(c))
        ok = cone_equal(dd, c) and dd.facets == c.facets and dd.equations == c.equations
        report.add(f"double-dual[{inst.name}]", "dual(dual(C)) = C", ok,
                   {"type": "dual_pair", "cone": icert(c), "dual": cone_cert(dual(c))} if ok else None)
    return report


def min_equals_max_suite(instances=None) -> Report:
    report = Report(["check", "corpus-min-equals-max"])
    for inst in proper_generating(_corpus(instances)):
        report.describe(inst.name, inst.description)
        check_equivalences(report, inst)
    sq = square_cone()
    report.describe("square", "homogenized square")
    tr = min_trace_positive_map(sq)
    report.add("trace-lp[square]", "the trace LP minimum is strictly negative", tr.value < 0,
               positive_map_cert(tr.argmin, sq, sq, with_trace=True), value=tr.value)
    W = rotation_witness()
    ok = is_positive_map(W, sq, sq) and rl.trace(W) == -1
    report.add("rotation[square]", "the 180-degree rotation diag(-1,-1,1) is positive with trace -1", ok,
               positive_map_cert(W, sq, sq, with_trace=True) if ok else None)
    return report


def polygon_3x3_suite(pairs=((4, 4), (5, 4), (6, 8)), seed: int = 0) -> Report:
    report = Report(["check", "thm-3x3", "--seed", str(seed)])
    rng = random.Random(seed)
    for m, n in pairs:
        E, F = random_polygon(m, rng), random_polygon(n, rng)
        label = f"{m}x{n}"
        report.describe(f"{label}/E", f"random rational convex {m}-gon, homogenized")
        report.describe(f"{label}/F", f"random rational convex {n}-gon, homogenized")
        check_3x3(report, E, F, label)
    return report


def random_positive_map(F: Cone, E: Cone, rng: random.Random):
    """Random positive map F -> E for a simplex cone E: rows, in the
    coordinates of E's rays, are random elements of dual(F)."""
    B = rl.transpose(E.rays, E.dim)
    duals = F.all_inequalities
    rows = []
    for _ in range(E.dim):
        row = rl.zeros(F.dim)
        for d in duals:
            k = rng.choice((0, 0, 1, 2, 3))
            if k:
                row = rl.add(row, rl.scale(Fraction(k, rng.randint(1, 3)), d))
        rows.append(row)
    return rl.matmul(B, tuple(rows), F.dim)


def simplex_absorption_suite(instances=None, maps_per_cone: int = 50, seed: int = 0) -> Report:
    report = Report(["check", "simplex-absorption", "--seed", str(seed)])
    corpus = _corpus(instances)
    by_name = {i.name: i for i in corpus}
    simplices = [by_name[n] for n in ("orthant2", "simplex3_skew") if n in by_name]
    rng = random.Random(seed)
    for S in simplices:
        report.describe(S.name, S.description)
        for inst in corpus:
            report.describe(inst.name, inst.description)
            v = min_equals_max(S.cone, inst.cone)
            report.add(f"absorb[{S.name},{inst.name}]", "min(E, F) = max(E, F) for simplex E",
                       isinstance(v, Equal), equal_cert(S.cone, inst.cone) if isinstance(v, Equal) else None)
    E = simplices[-1]
    for inst in corpus:
        F = inst.cone
        bad = []
        for i in range(maps_per_cone):
            T = random_positive_map(F, E.cone, rng)
            v = is_separable(T, F, E.cone)
            if not isinstance(v, Separable) or len(v.terms) > F.dim * E.cone.dim:
                bad.append(i)
                continue
            report.add(f"maps[{inst.name}->{E.name}]#{i}",
                       "a random positive map into a simplex cone is separable", True,
                       separable_cert(T, F, E.cone, v), terms=len(v.terms))
        for i in bad:
            report.add(f"maps[{inst.name}->{E.name}]#{i}",
                       "a random positive map into a simplex cone is separable", False)
    return report


def partial_simplex_suite() -> Report:
    report = Report(["check", "aubrun-example"])
    E = square_cone()
    F = Cone(3, generators=[(1, 0, 0), (0, 1, 0)])
    report.describe("E", "homogenized square")
    report.describe("F", "two independent rays in R^3")
    check_partial_simplex(report, E, F, "square, 2 rays")
    return report


def retract_suite(instances=None) -> Report:
    report = Report(["check", "corpus-retracts"])
    for inst in proper_generating(_corpus(instances)):
        E = inst.cone
        report.describe(inst.name, inst.description)
        if E.dim < 2:
            report.skip(f"retract[{inst.name}]", "vertex figures and facets",
                        "a one-dimensional cone has only the zero face")
        else:
            for i in range(len(E.facets)):
                check_retraction(report, facet_retract(E, i), f"{inst.name}/facet{i}",
                                 "the facet retraction verifies")
            for i in range(len(E.rays)):
                check_retraction(report, vertex_figure(E, i), f"{inst.name}/vertex-figure{i}",
                                 "the vertex-figure retraction verifies")
        check_scan(report, inst)
    return report


def lorentz_suite(seed: int = 0, samples: int = 100) -> Report:
    report = Report(["check", "lorentz", "--seed", str(seed)])
    rng = random.Random(seed)
    W = rotation_witness()
    from .lorentz import preserves_lorentz_form, sampled_positive
    ok = preserves_lorentz_form(W) and rl.trace(W) == -1 and sampled_positive(W)
    report.add("rotation/form", "diag(-1,-1,1) preserves the Lorentz form, fixes x3, has trace -1", ok,
               {"type": "form_preserving", "T": J(W), "trace": "-1",
                "samples": J(rational_boundary_rays(64))})
    mats = []
    for _ in range(samples):
        a, b, c = (Fraction(rng.randint(-12, 12), rng.randint(1, 5)) for _ in range(3))
        mats.append([rl.rat_str(a), rl.rat_str(b), rl.rat_str(c)])
    from .lorentz import is_psd_2x2, l3_to_sym2, lorentz_membership, sym2_to_l3
    ok = all(is_psd_2x2(*map(Fraction, m)) == lorentz_membership(sym2_to_l3(*map(Fraction, m))).inside
             and l3_to_sym2(sym2_to_l3(*map(Fraction, m))) == tuple(map(Fraction, m)) for m in mats)
    report.add("s2-iso", f"PSD <=> L^3 membership on {samples} random symmetric 2x2 matrices", ok,
               {"type": "psd_iso", "samples": mats})
    n, m = 3, 5
    T, S = lorentz_retract_maps(n, m)
    amb = [random_lorentz_point(m, rng) for _ in range(samples)]
    sub = [random_lorentz_point(n, rng) for _ in range(samples)]
    ok = (rl.matmul(S, T, n) == rl.identity(n)
          and all(lorentz_membership(rl.matvec(S, p)).inside for p in amb)
          and all(lorentz_membership(rl.matvec(T, p)).inside for p in sub))
    report.add("padding", f"L^{n} is a retract of L^{m} via coordinate padding, on {samples} points each", ok,
               {"type": "padding", "T": J(T), "S": J(S), "ambient_points": J(amb), "sub_points": J(sub)})
    lifted = rl.matmul(rl.matmul(T, W, n), S, m)
    report.add("rotation/lifted", f"T W S is a positive map of L^{m} with trace -1",
               rl.trace(lifted) == -1,
               conj({"type": "value", "matrix": J(lifted), "factors": [J(T), J(W), J(S)], "trace": "-1"},
                    {"type": "form_preserving", "T": J(W), "trace": "-1"},
                    {"type": "padding", "T": J(T), "S": J(S), "ambient_points": J(amb),
                     "sub_points": J(sub)}))
    for k in (4, 6, 8, 12):
        C = inner_polyhedral_approx(k)
        p = outside_ray_for_approx(k)
        report.add(f"approx{k}", f"the inscribed {k}-gon cone lies in L^3 and misses a boundary ray",
                   all(lorentz_membership(r).inside for r in C.rays) and not C.contains(p),
                   {"type": "lorentz_approx", "cone": icert(C), "outside": rl.vec_to_json(p)})
    sq = square_cone()
    L2 = Cone(2, generators=[(1, 1), (-1, 1)])
    T2, S2 = lorentz_retract_maps(2, 3)
    check_retraction(report, Retraction(sq, L2, T2, S2), "lorentz-padding/square",
                     "padding maps retract the square approximation of L^3 onto L^2")
    return report


SUITES = {
    "corpus-dd": dd_duality_suite,
    "corpus-min-equals-max": min_equals_max_suite,
    "corpus-3x3": polygon_3x3_suite,
    "simplex-absorption": simplex_absorption_suite,
    "partial-simplex": partial_simplex_suite,
    "corpus-retracts": retract_suite,
    "lorentz": lorentz_suite,
}
