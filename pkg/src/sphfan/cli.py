"""``sphfan`` command-line front end.

Exit status: 0 when the property holds or the operation succeeded, 1 when
it fails (a witness is part of the output), 2 for invalid input.  Every run
writes exactly one JSON document to standard output.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import io
from .ambient import build_ambient, equivalence_report
from .colored import (
    complete_for_global_sections,
    has_a2_property,
    satisfies_global_sections_criterion,
    validate_colored_fan,
)
from .datum import validate_datum
from .enumeration import (
    bunch_to_fan,
    decide_a2,
    enumerate_supported_psi_cones,
    enumerate_true_maximal_phi_bunches,
    enumerate_true_maximal_psi_fans,
    fan_to_bunch,
    random_configuration,
    shrink_counterexample,
    verify_duality_theorem,
)
from .errors import SchemaError, SphfanError
from .gale import (
    DEFAULT_CAP,
    is_true_maximal_phi_bunch,
    is_true_maximal_psi_fan,
    psi_cone_predicates,
    supported_pointed_psi_cones,
)

OK, FAIL, INVALID = 0, 1, 2


class Invalid(Exception):
    """Input rejected; the message becomes the diagnostic document."""


def _datum(problem):
    report = validate_datum(problem.datum)
    if not report:
        raise Invalid("invalid spherical datum: " + "; ".join(report.errors))
    return report


def _config(problem, args):
    _datum(problem)
    return problem.configuration(cap=args.cap)


def _fan(problem):
    _datum(problem)
    fan = problem.colored_fan()
    report = validate_colored_fan(problem.datum, fan.cones)
    return fan, report


def _report_json(report):
    out = {"ok": report.ok, "errors": list(report.errors), "warnings": list(report.warnings)}
    if report.witness is not None:
        out["witness"] = report.witness
    return out


# -- commands -------------------------------------------------------------------

def cmd_validate_datum(problem, args):
    report = _datum(problem)
    return OK, {"valid": True, "warnings": list(report.warnings)}


def cmd_validate_fan(problem, args):
    fan, report = _fan(problem)
    out = _report_json(report)
    out["valid"] = out.pop("ok")
    if report.ok:
        out["fan"] = io.colored_fan_json(fan.cones)
    return (OK if report.ok else FAIL), out


def _a2_witness(witness):
    s1, s2, v = witness
    return {"v": io.vector_json(v), "cones": [io.colored_cone_json(s1), io.colored_cone_json(s2)]}


def cmd_check_a2(problem, args):
    fan, report = _fan(problem)
    if not report:
        raise Invalid("invalid colored fan: " + "; ".join(report.errors))
    if not fan.is_pointed:
        res = has_a2_property(fan)
        if not res.a2:
            return FAIL, {"a2": False, "witness": _a2_witness(res.witness)}
        return OK, {"a2": True, "certificate": None}
    cert = decide_a2(problem.datum, fan, cap=args.cap)
    if not cert.a2:
        return FAIL, {"a2": False, "witness": _a2_witness(cert.witness)}
    conf = cert.configuration
    return OK, {"a2": True, "certificate": {
        "completed_fan": io.colored_fan_json(cert.completed.cones),
        "rays": [list(u) for u in conf.rays],
        "psi_fan": [io.psi_cone_json(conf, s) for s in cert.extension],
        "true_maximal": bool(is_true_maximal_psi_fan(conf, cert.extension)),
    }}


def _index_members(conf, pairs, kind):
    out = []
    for I, J in pairs:
        mask = conf.mask_of(I, J)
        out.append(conf.psi(mask) if kind == "psi" else conf.phi(mask))
    return out


def cmd_fan_to_bunch(problem, args):
    conf = _config(problem, args)
    if problem.psi_fan is None:
        raise SchemaError("/psi_fan", "this command needs a psi-fan")
    fan = _index_members(conf, problem.psi_fan, "psi")
    check = is_true_maximal_psi_fan(conf, fan)
    bunch = fan_to_bunch(conf, fan)
    out = {"input_true_maximal": check.ok, "errors": list(check.errors),
           "bunch": [io.phi_cone_json(conf, t) for t in bunch],
           "image_true_maximal": bool(is_true_maximal_phi_bunch(conf, bunch))}
    return (OK if check.ok else FAIL), out


def cmd_bunch_to_fan(problem, args):
    conf = _config(problem, args)
    if problem.bunch is None:
        raise SchemaError("/bunch", "this command needs a phi-bunch")
    bunch = _index_members(conf, problem.bunch, "phi")
    check = is_true_maximal_phi_bunch(conf, bunch)
    fan = bunch_to_fan(conf, bunch)
    out = {"input_true_maximal": check.ok, "errors": list(check.errors),
           "psi_fan": [io.psi_cone_json(conf, s) for s in fan],
           "image_true_maximal": bool(is_true_maximal_psi_fan(conf, fan))}
    return (OK if check.ok else FAIL), out


def cmd_enumerate_fans(problem, args):
    conf = _config(problem, args)
    fans = enumerate_true_maximal_psi_fans(conf, args.threads)
    return OK, {"supported_psi_cones": [io.psi_cone_json(conf, s)
                                        for s in enumerate_supported_psi_cones(conf, args.threads)],
                "fans": [[io.psi_cone_json(conf, s) for s in f] for f in fans],
                "count": len(fans)}


def cmd_enumerate_bunches(problem, args):
    conf = _config(problem, args)
    bunches = enumerate_true_maximal_phi_bunches(conf, args.threads)
    return OK, {"bunches": [[io.phi_cone_json(conf, t) for t in b] for b in bunches],
                "count": len(bunches)}


def _duality_json(conf, rep):
    out = {
        "ok": rep.ok,
        "checks": dict(rep.checks),
        "families": {"fans": [[io.psi_cone_json(conf, s) for s in f] for f in rep.fans],
                     "bunches": [[io.phi_cone_json(conf, t) for t in b] for b in rep.bunches]},
        "bijection": [{"fan": j, "bunch": i,
                       "simplicial": all(psi_cone_predicates(conf, s).simplicial for s in rep.fans[j])}
                      for j, i in rep.pairings],
    }
    if rep.counterexample is not None:
        small = shrink_counterexample(conf)
        out["counterexample"] = {"detail": io._plain(_jsonable(conf, rep.counterexample)),
                                 "minimal_configuration": _configuration_json(small)}
    return out


def _jsonable(conf, x):
    from .gale import PhiCone, PsiCone
    if isinstance(x, PsiCone):
        return io.psi_cone_json(conf, x)
    if isinstance(x, PhiCone):
        return io.phi_cone_json(conf, x)
    if isinstance(x, dict):
        return {k: _jsonable(conf, v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(conf, v) for v in x]
    return x


def _configuration_json(conf):
    return io.problem_json(io.Problem(conf.datum, rays=list(conf.rays)))


def cmd_verify_duality(problem, args):
    if args.random is not None:
        runs = []
        ok = True
        for s in range(args.seed, args.seed + args.random):
            conf = random_configuration(s)
            rep = verify_duality_theorem(conf, args.threads)
            entry = {"seed": s, "ok": rep.ok, "fans": len(rep.fans), "bunches": len(rep.bunches)}
            if not rep.ok:
                ok = False
                entry["report"] = _duality_json(conf, rep)
                entry["configuration"] = _configuration_json(conf)
            runs.append(entry)
        return (OK if ok else FAIL), {"ok": ok, "runs": runs, "seed": args.seed, "count": args.random}
    conf = _config(problem, args)
    rep = verify_duality_theorem(conf, args.threads)
    return (OK if rep.ok else FAIL), _duality_json(conf, rep)


def cmd_complete_fan(problem, args):
    fan, report = _fan(problem)
    if not report:
        raise Invalid("invalid colored fan: " + "; ".join(report.errors))
    if not fan.is_pointed:
        raise Invalid("completion needs a pointed colored fan")
    try:
        done = complete_for_global_sections(fan)
    except SphfanError as exc:
        return FAIL, {"completed": False, "reason": str(exc)}
    added = sorted(set(done.cones) - set(fan.cones), key=lambda s: s.sort_key())
    return OK, {"completed": True, "fan": io.colored_fan_json(done.cones),
                "added": [io.colored_cone_json(s) for s in added],
                "criterion": satisfies_global_sections_criterion(done)}


def cmd_ambient_check(problem, args):
    conf = _config(problem, args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        amb = build_ambient(conf, problem.multiplicities)
    sigmas = supported_pointed_psi_cones(conf)
    results = []
    ok = True
    for b, bunch in enumerate(enumerate_true_maximal_phi_bunches(conf, args.threads)):
        for s, mask, eq in equivalence_report(amb, bunch, sigmas):
            ok &= eq.agree
            results.append({"bunch": b, "sigma": io.psi_cone_json(conf, s),
                            "realization": conf.describe(mask),
                            "lhs": eq.lhs, "rhs": eq.rhs, "agree": eq.agree})
    return (OK if ok else FAIL), {"ok": ok, "multiplicities": list(amb.multiplicities),
                                  "ambient_dimension": amb.dim,
                                  "ambient_rays": {lab: io.vector_json(v)
                                                   for lab, v in zip(amb.labels, amb.ambient_rays)},
                                  "warnings": [str(w.message) for w in caught],
                                  "results": results}


COMMANDS = {
    "validate-datum": cmd_validate_datum,
    "validate-fan": cmd_validate_fan,
    "check-a2": cmd_check_a2,
    "fan-to-bunch": cmd_fan_to_bunch,
    "bunch-to-fan": cmd_bunch_to_fan,
    "enumerate-fans": cmd_enumerate_fans,
    "enumerate-bunches": cmd_enumerate_bunches,
    "verify-duality": cmd_verify_duality,
    "complete-fan": cmd_complete_fan,
    "ambient-check": cmd_ambient_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphfan", description="Colored fans, A2 checks and Gale duality.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("problem", nargs="?", help="problem JSON file")
    p.add_argument("--quiet", action="store_true", help="print only the verdict")
    p.add_argument("--seed", type=int, default=0, help="first seed for --random")
    p.add_argument("--random", type=int, metavar="N", help="verify-duality on N random configurations")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum number of colors plus rays")
    p.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")
    return p


def run(argv=None) -> tuple[int, str]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if not exc.code:
            return OK, ""
        return INVALID, io.emit_report({"error": "bad command line"})
    try:
        if args.threads < 1:
            raise Invalid("--threads must be at least 1")
        if args.command == "verify-duality" and args.random is not None:
            if args.random < 0:
                raise Invalid("--random must be nonnegative")
            problem = None
        elif args.problem is None:
            raise Invalid("a problem file is required")
        else:
            problem = io.load_problem(args.problem)
        status, doc = COMMANDS[args.command](problem, args)
    except SchemaError as exc:
        return INVALID, io.emit_report({"error": exc.message, "pointer": exc.pointer})
    except (Invalid, SphfanError) as exc:
        return INVALID, io.emit_report({"error": str(exc)})
    if args.quiet:
        doc = {"verdict": status == OK}
    return status, io.emit_report(doc)


def main(argv=None) -> int:
    status, text = run(argv)
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
