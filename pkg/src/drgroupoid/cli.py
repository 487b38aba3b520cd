"""Command-line interface.

Exit codes: 0 ok, 1 certification failure, 2 input error, 3 search bound exhausted.
"""

from __future__ import annotations

import argparse
import sys as _sys
from pathlib import Path

from . import lattice as lat
from . import primcat
from . import serialize as ser
from .dynsys import FiniteSystem, quasi_orbits
from .errors import BatteryFailure, BoundTooSmall, DRError, InputError
from .pathspace import graph_catalogue
from .periodicity import profile
from .representations import DEFAULT_TOLERANCE, BatteryReport, identity_battery, intertwiner


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return ser.loads(text)


def load_system(path: str) -> FiniteSystem:
    return ser.system_from_json(_read_json(path))


def _pairs(sigma_min) -> list[list[list[int]]]:
    return [[list(m), list(n)] for m, n in sigma_min]


def battery_summary(report: BatteryReport) -> dict:
    return {
        "seed": report.seed,
        "trials": report.trials,
        "tolerance": report.tolerance,
        "max_residual": f"{report.overall_residual:.3e}",
        "per_identity": {str(i): f"{r:.3e}" for i, r in sorted(report.max_residual.items())},
        "passed": report.passed,
    }


def analysis_report(sys: FiniteSystem, trials: int = 100, seed: int = 0,
                    tolerance: float = DEFAULT_TOLERANCE, max_invariant_subsets: int = 8,
                    retries: int = 4) -> tuple[dict, bool]:
    """The full pipeline as a JSON-ready document, and whether the battery passed."""
    part = quasi_orbits(sys, max_invariant_subsets)
    profiles = []
    for c in part.classes:
        prof = profile(sys, c.representative, retries=retries)
        profiles.append({
            "quasi_orbit": prof.quasi_orbit,
            "H": ser.lattice_to_json(prof.H),
            "Y": list(prof.Y),
            "sigma_min": _pairs(prof.sigma_min),
            "isotropy": {y: str(L) for y, L in prof.per_point},
            "search_bound": prof.search_bound,
        })
    cat = [{
        "quasi_orbit": e.quasi_orbit,
        "points": list(e.points),
        "H": ser.lattice_to_json(e.H),
        "smith_invariants": list(e.smith_invariants[0]),
        "free_rank": e.smith_invariants[1],
        "Y": list(e.Y),
        "dual": e.dual_description,
    } for e in primcat.catalogue(sys, retries)]
    top = primcat.jacobson_topology(sys, retries)
    topology = {
        "determined": top.determined,
        "irreducible": top.irreducible,
        "statement": top.statement,
        "components": [{
            "quasi_orbit": c.quasi_orbit,
            "applied_to": list(c.applied_to),
            "whole_component": c.whole_component,
            "hypothesis_holds": c.hypothesis_holds,
            "H": str(c.H),
        } for c in top.components],
    }
    try:
        report = identity_battery(sys, trials, tolerance, seed)
    except BatteryFailure as exc:
        report = exc.report
    subsets = part.closed_invariant_subsets
    doc = {
        "digest": ser.digest(sys),
        "system": ser.system_to_json(sys),
        "quasi_orbits": [{"representative": c.representative, "points": list(c.points)} for c in part.classes],
        "closed_invariant_subsets": None if subsets is None else [list(sys.sort(s)) for s in subsets],
        "profiles": profiles,
        "catalogue": cat,
        "topology": topology,
        "battery": battery_summary(report),
    }
    return doc, report.passed


def _label(sys, x, theta) -> dict:
    return ser.label_to_json(primcat.classify(sys, x, theta))


def cmd_validate(args) -> tuple[dict, int]:
    raw = _read_json(args.file)
    if isinstance(raw, dict) and "vertices" in raw:
        G = ser.graph_from_json(raw)
        return {"kind": "graph", "valid": True, "vertices": len(G.vertices), "edges": len(G.edges)}, 0
    sys = ser.system_from_json(raw)
    return {"kind": "system", "valid": True, "digest": ser.digest(sys), "points": len(sys)}, 0


def cmd_analyze(args) -> tuple[dict, int]:
    sys = load_system(args.file)
    doc, ok = analysis_report(sys, args.trials, args.seed, args.tolerance,
                              args.max_invariant_subsets, args.sigma_bound_retries)
    return doc, 0 if ok else 1


def cmd_classify(args) -> tuple[dict, int]:
    sys = load_system(args.file)
    theta = lat.parse_angle(args.angle, sys.k)
    return {"point": args.point, "angle": ser.angle_to_json(theta), "label": _label(sys, args.point, theta)}, 0


def _two_pairs(args):
    sys = load_system(args.file)
    a = (args.x, lat.parse_angle(args.theta, sys.k))
    b = (args.y, lat.parse_angle(args.omega, sys.k))
    return sys, a, b


def cmd_equiv(args) -> tuple[dict, int]:
    sys, a, b = _two_pairs(args)
    v = primcat.equivalent(sys, a, b)
    doc = {
        "verdict": "equivalent" if v.equivalent else "inequivalent",
        "reason": v.reason,
        "labels": [_label(sys, *a), _label(sys, *b)],
        "c0_kernel_order": primcat.c0_kernel_order(sys, a, b),
    }
    if v.equivalent:
        U = intertwiner(sys, a[0], a[1], b[1], args.tolerance)
        doc["intertwiner"] = {
            "displacements": {y: list(g) for y, g in U.displacements.items()},
            "residual": f"{U.residual:.3e}",
        }
    return doc, 0


def cmd_witness(args) -> tuple[dict, int]:
    sys, a, b = _two_pairs(args)
    w = primcat.separating_witness(sys, a, b, args.tolerance)
    return {
        "function": ser.function_to_json(w.function),
        "kind": w.kind,
        "n": None if w.n is None else list(w.n),
        "killed": {"point": w.killed[0], "angle": ser.angle_to_json(w.killed[1]), "norm": f"{w.killed_norm:.3e}"},
        "survivor": {"point": w.survivor[0], "angle": ser.angle_to_json(w.survivor[1]),
                     "norm": f"{w.surviving_norm:.3e}"},
    }, 0


def cmd_battery(args) -> tuple[dict, int]:
    sys = load_system(args.file)
    try:
        report = identity_battery(sys, args.trials, args.tolerance, args.seed)
    except BatteryFailure as exc:
        report = exc.report
    doc = battery_summary(report)
    doc["lines"] = report.lines()
    return doc, 0 if report.passed else 1


def _order_text(names, i, j, verdict) -> dict:
    a, b = names[i], names[j]
    closure = {
        "equal": f"closure[{a}] = closure[{b}]",
        "first_contained": f"closure[{b}] strictly inside closure[{a}]",
        "second_contained": f"closure[{a}] strictly inside closure[{b}]",
        "incomparable": f"closure[{a}] and closure[{b}] are incomparable",
    }[verdict]
    kernels = {
        "equal": f"ker pi_({a},.) and ker pi_({b},.) agree on C_0",
        "first_contained": f"ker pi_({a},.) & C_0 strictly inside ker pi_({b},.) & C_0",
        "second_contained": f"ker pi_({b},.) & C_0 strictly inside ker pi_({a},.) & C_0",
        "incomparable": "C_0 parts of the kernels are incomparable",
    }[verdict]
    return {"first": a, "second": b, "verdict": verdict, "closure": closure, "c0_kernels": kernels}


def cmd_graph(args) -> tuple[dict, int]:
    raw = _read_json(args.file)
    G = ser.graph_from_json(raw)
    if args.rep:
        reps = [ser.parse_path(G, r) for r in args.rep]
    elif isinstance(raw, dict) and raw.get("representatives"):
        reps = [ser.path_from_json(G, r) for r in raw["representatives"]]
    else:
        raise InputError("no representatives: pass --rep or list them in the graph file")
    cat = graph_catalogue(G, reps)
    names = [str(e.representative) for e in cat.entries]
    doc = {
        "graph": ser.graph_to_json(G),
        "quasi_orbits": [{
            "representative": str(e.representative),
            "path": ser.path_to_json(e.representative),
            "H": str(e.H.lattice),
            "H_criterion": str(e.H.criterion),
            "H_oracle": str(e.H.oracle),
            "oracle_agrees": e.H.agrees,
            "closure_vertices": list(e.closure_vertices),
            "whole_space": e.whole_space,
            "dual": e.dual_description,
        } for e in cat.entries],
        "order": [_order_text(names, i, j, v) for i, j, v in cat.order],
        "known_closure": cat.known_closure,
        "scope": "eventually periodic paths only",
    }
    return doc, 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-invariant-subsets", type=int, default=8)
    common.add_argument("--sigma-bound-retries", type=int, default=4)
    common.add_argument("--output", default="-", help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="drgroupoid", description="Primitive ideals of Deaconu-Renault groupoid algebras")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("file")
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check a system or graph file")
    add("analyze", cmd_analyze, "full catalogue report for a system")
    sp = add("classify", cmd_classify, "label of the primitive ideal ker pi_(x,theta)")
    sp.add_argument("point")
    sp.add_argument("angle", help="e.g. 1/3 or 1/4,1/2")
    for name, func, help_ in (("equiv", cmd_equiv, "compare two labels"),
                              ("witness", cmd_witness, "separating element for two inequivalent labels")):
        sp = add(name, func, help_)
        sp.add_argument("x")
        sp.add_argument("theta")
        sp.add_argument("y")
        sp.add_argument("omega")
    add("battery", cmd_battery, "seeded identity battery")
    sp = add("graph", cmd_graph, "quasi-orbit report for a graph")
    sp.add_argument("--rep", action="append", help="path 'prefix;cycle', edges comma separated")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return 2
    except BoundTooSmall as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return 3
    except DRError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return 1
    text = ser.dumps(doc)
    if args.output == "-":
        _sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
