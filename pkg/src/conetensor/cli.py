"""Command-line front end.

Every command prints a report (JSON or text) whose passing claims carry
certificates; ``verify`` re-checks such a report.  Exit codes: 0 when all
claims pass, 1 when one fails, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ratlin as rl
from .cone import Cone, ConeError, cone_from_json, strictly_positive_functional
from .corpus import get_instance
from .report import J, Report, cone_cert, verify_report
from .retract import facet_retract, vertex_figure
from .sep import Separable, factor_through_simplex
from .tensorcone import injective_cone, projective_cone

USAGE_ERROR = 2

SUITE_KINDS = ("corpus-dd", "corpus-min-equals-max", "corpus-3x3", "simplex-absorption",
               "partial-simplex", "corpus-retracts", "lorentz")
CHECK_KINDS = ("min-eq-max", "duality", "thm-min-equals-max", "thm-3x3", "aubrun-example") + SUITE_KINDS


class UsageError(Exception):
    pass


def load_cone_arg(arg: str) -> tuple[str, Cone]:
    """A cone JSON file, or the name of a bundled corpus instance."""
    p = Path(arg)
    if p.exists():
        try:
            return p.stem, cone_from_json(json.loads(p.read_text()))
        except (ValueError, KeyError, TypeError) as e:
            raise UsageError(f"{arg}: not a cone file ({e})")
    try:
        return arg, get_instance(arg).cone
    except KeyError:
        raise UsageError(f"{arg}: no such file or corpus instance")


def _cones(args, count: int) -> list[tuple[str, Cone]]:
    given = args.cone or []
    if len(given) != count:
        raise UsageError(f"{args.command} needs exactly {count} --cone argument(s)")
    return [load_cone_arg(c) for c in given]


def _write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_analyze(args) -> Report:
    name, c = _cones(args, 1)[0]
    defining = "generators" if c._gens is not None else "inequalities"
    data = cone_cert(c, defining)
    report = Report(["analyze", name])
    report.describe(name, f"cone in R^{c.dim} read from {name}")
    report.add("cone-data", "canonical rays, lineality, facets and equations", True, data,
               dim=c.dim, rays=J(c.rays), lineality=J(c.lineality), facets=J(c.facets),
               equations=J(c.equations))
    counts = {"type": "ray_count", "cone": data, "count": len(c.rays), "lineality": len(c.lineality),
              "facets": len(c.facets), "equations": len(c.equations)}
    report.add("proper", "the cone is proper" if c.is_proper() else "the cone is not proper", True, counts,
               value=c.is_proper())
    report.add("generating", "the cone is generating" if c.is_generating() else "the cone is not generating",
               True, counts, value=c.is_generating())
    report.add("simplex", "the cone is a simplex cone" if c.is_simplex() else "the cone is not a simplex cone",
               True, {"type": "simplex", "cone": data, "expected": c.is_simplex()}, value=c.is_simplex())
    ps = c.is_partial_simplex()
    report.add("partial-simplex", "the cone is a partial simplex cone" if ps
               else "the cone is not a partial simplex cone",
               True, {"type": "partial_simplex", "cone": data, "expected": ps}, value=ps)
    if c.is_proper():
        f = strictly_positive_functional(c)
        report.add("strictly-positive", "a functional positive on every extremal ray", True,
                   {"type": "strictly_positive", "cone": data, "functional": rl.vec_to_json(f)},
                   functional=f)
    else:
        report.skip("strictly-positive", "a functional positive on every extremal ray",
                    "the cone has a nontrivial lineality space")
    return report


def cmd_tensor(args) -> Report:
    (na, A), (nb, B) = _cones(args, 2)
    report = Report(["tensor", args.kind, na, nb])
    report.describe(na, f"E, a cone in R^{A.dim}")
    report.describe(nb, f"F, a cone in R^{B.dim}")
    if args.kind == "min":
        T = projective_cone(A, B)
        form, what = "generators", "min(E, F), generated by products of extremal rays"
    else:
        T = injective_cone(A, B)
        form, what = "inequalities", "max(E, F), cut out by products of dual generators"
    report.add(f"tensor-{args.kind}", what, True, cone_cert(T, form), dim=T.dim, rays=len(T.rays),
               lineality=len(T.lineality), facets=len(T.facets), equations=len(T.equations))
    if args.emit:
        _write_json(args.emit, _minimal_json(T, form))
    return report


def _minimal_json(T: Cone, form: str) -> dict:
    if form == "generators":
        gens = list(T.rays) + list(T.lineality) + [rl.neg(l) for l in T.lineality]
        return {"dim": T.dim, "generators": J(gens)}
    ineqs = list(T.facets) + list(T.equations) + [rl.neg(e) for e in T.equations]
    return {"dim": T.dim, "inequalities": J(ineqs)}


def cmd_check(args) -> Report:
    from . import suites
    kind = args.kind
    if kind in ("min-eq-max", "duality"):
        (na, A), (nb, B) = _cones(args, 2)
        report = Report(["check", kind, na, nb])
        report.describe(na, f"E, a cone in R^{A.dim}")
        report.describe(nb, f"F, a cone in R^{B.dim}")
        label = f"{na}, {nb}"
        if kind == "min-eq-max":
            suites.check_min_eq_max(report, A, B, label)
        else:
            suites.check_duality(report, A, B, label)
        return report
    if kind == "thm-min-equals-max":
        if not args.cone:
            return suites.min_equals_max_suite()
        name, E = _cones(args, 1)[0]
        if not (E.is_proper() and E.is_generating()):
            raise UsageError("thm-min-equals-max needs a proper generating cone")
        from .corpus import Instance
        report = Report(["check", kind, name])
        report.describe(name, f"a proper generating cone in R^{E.dim}")
        suites.check_equivalences(report, Instance(name, "", E))
        return report
    if kind == "thm-3x3":
        if not args.cone:
            return suites.polygon_3x3_suite(seed=args.seed)
        (na, A), (nb, B) = _cones(args, 2)
        from .cone import as_polygon_cone
        try:
            A, B = as_polygon_cone(A), as_polygon_cone(B)
        except ConeError as e:
            raise UsageError(f"thm-3x3 needs two homogenized polygons: {e}")
        if A.m < 4 or B.m < 4:
            raise UsageError("thm-3x3 needs polygons with at least 4 vertices")
        report = Report(["check", kind, na, nb])
        report.describe(na, f"homogenized {A.m}-gon; F_(k,l) indices are 1-based and cyclic")
        report.describe(nb, f"homogenized {B.m}-gon")
        suites.check_3x3(report, A, B, f"{A.m}x{B.m}")
        return report
    if kind == "aubrun-example":
        if not args.cone:
            return suites.partial_simplex_suite()
        (na, A), (nb, B) = _cones(args, 2)
        if not (A.is_proper() and A.is_generating()) or not B.is_partial_simplex():
            raise UsageError("aubrun-example needs a proper generating cone and a partial simplex cone")
        report = Report(["check", kind, na, nb])
        report.describe(na, f"E, a proper generating cone in R^{A.dim}")
        report.describe(nb, f"F, a partial simplex cone in R^{B.dim}")
        suites.check_partial_simplex(report, A, B, f"{na}, {nb}")
        return report
    fn = suites.SUITES[kind]
    if args.cone:
        raise UsageError(f"{kind} runs on the bundled corpus and takes no --cone")
    if kind in ("corpus-3x3", "simplex-absorption", "lorentz"):
        return fn(seed=args.seed)
    return fn()


def cmd_separable(args) -> Report:
    from . import suites
    (na, E), (nb, F) = _cones(args, 2)
    try:
        data = json.loads(Path(args.map).read_text())
    except (OSError, ValueError) as e:
        raise UsageError(f"{args.map}: {e}")
    T = rl.mat(data["matrix"] if isinstance(data, dict) else data)
    if len(T) != F.dim or any(len(r) != E.dim for r in T):
        raise UsageError(f"the map must be a {F.dim} x {E.dim} matrix")
    report = Report(["separable", Path(args.map).name, na, nb])
    report.describe(na, f"domain cone in R^{E.dim}")
    report.describe(nb, f"codomain cone in R^{F.dim}")
    v = suites.check_separability(report, T, E, F, Path(args.map).stem)
    if args.emit and v is not None:
        if isinstance(v, Separable):
            fac = factor_through_simplex(v, T)
            out = {"verdict": "separable", "n": fac.n, "R": J(fac.R), "S": J(fac.S)}
        else:
            out = {"verdict": "entangled", "witness": v.witness.to_json()}
        _write_json(args.emit, out)
    return report


def cmd_retract(args) -> Report:
    from . import suites
    from .corpus import Instance
    name, E = _cones(args, 1)[0]
    if not (E.is_proper() and E.is_generating()):
        raise UsageError("retracts are built for proper generating cones")
    report = Report(["retract", args.kind, name] + ([str(args.index)] if args.index is not None else []))
    report.describe(name, f"a proper generating cone in R^{E.dim}")
    if args.kind == "scan3":
        from .retract import three_dim_retract_scan
        suites.check_scan(report, Instance(name, "", E))
        r = three_dim_retract_scan(E)
    else:
        if args.index is None:
            raise UsageError(f"{args.kind} needs --index")
        count = len(E.rays) if args.kind == "vertex-figure" else len(E.facets)
        if not 0 <= args.index < count:
            raise UsageError(f"--index must be in 0..{count - 1}")
        build = vertex_figure if args.kind == "vertex-figure" else facet_retract
        r = build(E, args.index)
        suites.check_retraction(report, r, f"{name}/{args.kind}{args.index}",
                                f"the {args.kind} retraction verifies")
    if args.emit and r is not None:
        _write_json(args.emit, r.to_json())
    return report


def cmd_verify(args) -> Report:
    try:
        data = json.loads(Path(args.report).read_text())
    except (OSError, ValueError) as e:
        raise UsageError(f"{args.report}: {e}")
    report = Report(["verify", Path(args.report).name])
    try:
        claims = [c for c in data["claims"] if c["status"] != "skipped"]
        results = verify_report(data)
    except (KeyError, TypeError) as e:
        raise UsageError(f"{args.report}: not a report ({e})")
    for claim, v in zip(claims, results):
        # a re-checked claim carries its own certificate, so this report verifies too
        report.add(v.claim, claim["statement"], v.ok, claim.get("certificate") if v.ok else None,
                   reason=v.reason)
    return report


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cone", action="append", help="cone JSON file or corpus instance name (repeatable)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized corpus generation")

    p = argparse.ArgumentParser(prog="conetensor", description="Exact tensor products of polyhedral cones.")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="canonical data of one cone")
    a.add_argument("file", nargs="?", help="cone file (same as --cone)")
    t = sub.add_parser("tensor", parents=[common], help="min or max tensor product of two cones")
    t.add_argument("kind", choices=("min", "max"))
    t.add_argument("--emit", help="write the product cone JSON here")
    c = sub.add_parser("check", parents=[common], help="run a verification suite")
    c.add_argument("kind", choices=CHECK_KINDS)
    s = sub.add_parser("separable", parents=[common], help="decide separability of a positive map")
    s.add_argument("map", help='JSON file {"matrix": dimF x dimE}')
    s.add_argument("--emit", help="write the factorization or witness here")
    r = sub.add_parser("retract", parents=[common], help="vertex-figure and facet retracts")
    r.add_argument("kind", choices=("vertex-figure", "facet", "scan3"))
    r.add_argument("--index", type=int, help="0-based ray or facet index")
    r.add_argument("--emit", help="write the retraction JSON here")
    v = sub.add_parser("verify", parents=[common], help="re-check every certificate in a report")
    v.add_argument("report")
    return p


COMMANDS = {"analyze": cmd_analyze, "tensor": cmd_tensor, "check": cmd_check,
            "separable": cmd_separable, "retract": cmd_retract, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR
    if args.command == "analyze" and args.file:
        args.cone = [args.file] + (args.cone or [])
    try:
        report = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"conetensor: error: {e}", file=sys.stderr)
        return USAGE_ERROR
    text = report.dumps() if args.format == "json" else report.render_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
