"""Command-line entry point ``sskg``.

Exit codes: 0 success, 1 hypothesis or validation failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .action import faithfulness_report, is_pseudo_free, nucleus_closure
from .config import BOUND_ENV, DEFAULT_BOUND_COMPONENT, SearchConfig
from .kgraph import CompositionError, DegreeError, _jsonable
from .periodicity import (QueryError, aperiodicity_check, check_cyc_all_tails, compute_H_T,
                          per_group, per_on_H_T)
from .prim import is_primitive_algebra, primitive_spectrum, simplicity_report, tail_closure
from .spec_io import SpecError, build_odometer, dumps, emit_spec, parse_spec, report, to_dot
from .tails import (LITERAL, STANDARD, SizeError, enumerate_invariant_subsets,
                    enumerate_maximal_tails, is_maximal_tail, restrict_to, sorted_members)
from .verdicts import HypothesisError

class UsageError(Exception):
    pass


def parse_degree(text: str, k: int, what: str = "bound") -> tuple[int, ...]:
    try:
        parts = [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated non-negative integers, got {text!r}") from None
    if any(x < 0 for x in parts) or not parts:
        raise UsageError(f"{what} must be comma-separated non-negative integers, got {text!r}")
    if len(parts) == 1:
        parts = parts * k
    if len(parts) != k:
        raise UsageError(f"{what} {text!r} has {len(parts)} entries but k = {k}")
    return tuple(parts)


def make_config(args, k: int) -> SearchConfig:
    kw = {"max_vertices": args.max_vertices, "max_nucleus": args.max_nucleus,
          "assume_cyc": args.assume_cyc}
    if args.bound is not None:
        return SearchConfig(parse_degree(args.bound, k), **kw)
    try:
        cfg = SearchConfig.default(k, **kw)
    except ValueError:
        raise UsageError(f"{BOUND_ENV} must be comma-separated non-negative integers") from None
    return SearchConfig(parse_degree(",".join(map(str, cfg.bound)), k, BOUND_ENV), **kw)


def parse_vertex_set(text: str, vertices) -> frozenset:
    if text == "ALL":
        return frozenset(vertices)
    names = [x for x in text.split("+") if x]
    bad = [x for x in names if x not in vertices]
    if bad or not names:
        raise UsageError(f"unknown vertices {bad} in {text!r}; use names joined by '+' or ALL")
    return frozenset(names)


# ---------------------------------------------------------------------------
# subcommands: each returns (verdicts, results, exit code)
# ---------------------------------------------------------------------------

def cmd_validate(args, sk, a):
    nuc = nucleus_closure(a, args.cfg.max_nucleus)
    faith = faithfulness_report(a, nucleus=nuc)
    verdicts = {"pseudo_free": is_pseudo_free(a, nucleus=nuc), **faith}
    results = {"valid": True, "k": sk.k, "vertices": len(sk.vertices), "edges": len(sk.edges),
               "squares": len(sk.squares), "group": a.group.kind,
               "nucleus_size": len(nuc), "nucleus_cap_exceeded": nuc.cap_exceeded}
    return verdicts, results, 0


def cmd_paths(args, sk, a):
    if args.vertex not in sk.vertex_index:
        raise UsageError(f"unknown vertex {args.vertex!r}")
    p = parse_degree(args.degree, sk.k, "degree")
    paths = sk.enumerate_paths(args.vertex, p)
    return {}, {"vertex": args.vertex, "degree": list(p), "count": len(paths),
                "paths": [list(x.edges) for x in paths]}, 0


def cmd_ideals(args, sk, a):
    rule = LITERAL if args.literal_saturation else STANDARD
    lat = enumerate_invariant_subsets(a, args.cfg.max_vertices, rule)
    order = list(sk.vertices)
    res = {"saturation_rule": rule, "count": len(lat), "ideals": [d.as_dict(order) for d in lat]}
    faith = faithfulness_report(a, nucleus=nucleus_closure(a, args.cfg.max_nucleus))
    if faith["strongly_locally_faithful"].value != "yes":
        res["caveat"] = ("the action is not known to be strongly locally faithful, so gauge-invariant "
                         "ideals that are not diagonal-invariant may exist beyond this list")
    return {}, res, 0


def cmd_tails(args, sk, a):
    order = list(sk.vertices)
    tails = enumerate_maximal_tails(a, args.cfg.max_vertices)
    return {}, {"count": len(tails), "tails": [t.as_dict(order) for t in tails],
                "complements": [sorted_members(set(order) - t.vertices, order) for t in tails]}, 0


def _restricted(args, sk, a, need_tail: bool):
    if args.tail is None:
        T = frozenset(sk.vertices)
    else:
        T = parse_vertex_set(args.tail, sk.vertices)
    if need_tail:
        cond = is_maximal_tail(a, T)
        bad = [c for c, ok in cond.items() if not ok]
        if bad:
            raise HypothesisError("maximal tail", f"{sorted_members(T, list(sk.vertices))} fails "
                                  f"tail condition(s) {', '.join(bad)}")
    _, a_T = restrict_to(a, T)
    return T, a_T


def cmd_per(args, sk, a):
    T, a_T = _restricted(args, sk, a, False)
    per = per_group(a_T, args.cfg.bound)
    return {}, {"tail": sorted_members(T, list(sk.vertices)), "per": per.as_dict(a_T),
                "definition": "generated by d(mu)-d(nu) over cycline pairs"}, 0


def cmd_ht(args, sk, a):
    T, a_T = _restricted(args, sk, a, True)
    ht = compute_H_T(a_T, args.cfg.bound)
    res = {"tail": sorted_members(T, list(sk.vertices)), **ht.as_dict(list(sk.vertices))}
    if ht.vertices:
        res["per_H_T"] = per_on_H_T(a_T, ht, args.cfg.bound).as_dict(a_T)
    return {}, res, 0


def cmd_aperiodicity(args, sk, a):
    T, a_T = _restricted(args, sk, a, False)
    v = aperiodicity_check(a_T, args.cfg.bound, nucleus_closure(a, args.cfg.max_nucleus))
    return {"aperiodicity": v}, {"tail": sorted_members(T, list(sk.vertices))}, 0


def cmd_cyc(args, sk, a):
    v = check_cyc_all_tails(a, args.cfg.bound, args.cfg.max_vertices, nucleus_closure(a, args.cfg.max_nucleus))
    return {"cyc": v}, {}, 0


def cmd_prim(args, sk, a):
    space = primitive_spectrum(a, args.cfg.bound, args.cfg.max_vertices, args.cfg.assume_cyc,
                               nucleus_closure(a, args.cfg.max_nucleus))
    order = list(sk.vertices)
    return {"strongly_aperiodic": space.strongly_aperiodic}, space.as_dict(order), 0


def cmd_primitive(args, sk, a):
    return {"primitive": is_primitive_algebra(a, args.cfg.bound, nucleus_closure(a, args.cfg.max_nucleus))}, {}, 0


def cmd_closure(args, sk, a):
    order = list(sk.vertices)
    tails = enumerate_maximal_tails(a, args.cfg.max_vertices)
    if args.tails == "ALL":
        Y = [t.vertices for t in tails]
    else:
        Y = [parse_vertex_set(x, sk.vertices) for x in args.tails.split(",") if x]
    out = tail_closure(a, Y, args.cfg.bound, args.cfg.max_vertices)
    return {}, {"Y": [sorted_members(y, order) for y in Y],
                "closure": [sorted_members(t.vertices, order) for t in out]}, 0


def cmd_simplicity(args, sk, a):
    v = simplicity_report(a, args.cfg.bound, args.cfg.max_vertices, nucleus_closure(a, args.cfg.max_nucleus))
    return {"simplicity": v}, {}, 0


COMMANDS = {
    "validate": cmd_validate, "paths": cmd_paths, "ideals": cmd_ideals, "tails": cmd_tails,
    "per": cmd_per, "ht": cmd_ht, "aperiodicity": cmd_aperiodicity, "cyc": cmd_cyc,
    "prim": cmd_prim, "primitive": cmd_primitive, "closure": cmd_closure,
    "simplicity": cmd_simplicity,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--bound", help=f"degree bound, e.g. 3 or 3,2 (default {DEFAULT_BOUND_COMPONENT} per color)")
    common.add_argument("--max-vertices", type=int, default=20)
    common.add_argument("--max-nucleus", type=int, default=1000)
    common.add_argument("--assume-cyc", action="store_true",
                        help="skip the (Cyc) search and mark it as user-asserted")
    common.add_argument("--emit-dot", metavar="FILE", help="also write the 1-skeleton as DOT")

    ap = argparse.ArgumentParser(prog="sskg", description="Finite self-similar k-graph toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("spec")
        if name == "paths":
            p.add_argument("--vertex", required=True)
            p.add_argument("--degree", required=True)
        if name in ("per", "ht", "aperiodicity"):
            p.add_argument("--tail", required=name == "ht", help="vertices joined by '+', or ALL")
        if name == "ideals":
            p.add_argument("--literal-saturation", action="store_true")
        if name == "closure":
            p.add_argument("--tails", required=True, help="tails separated by ',' or ALL")
    p = sub.add_parser("odometer", parents=[common])
    p.add_argument("n", nargs="+", type=int)
    p.add_argument("--emit", metavar="FILE")
    return ap


def _render_text(doc: dict) -> str:
    lines = [f"command: {' '.join(doc['command'])}"]
    if doc.get("bounds"):
        lines.append(f"bounds: {doc['bounds']}")
    for name, v in doc.get("verdicts", {}).items():
        extra = f" bound={v['bound']}" if "bound" in v else ""
        lines.append(f"{name}: {v['value']} [{v['certification']}]{extra}")
        if "witness" in v:
            lines.append(f"  witness: {v['witness']}")
        if v.get("note"):
            lines.append(f"  note: {v['note']}")
    for key, val in doc.get("results", {}).items():
        lines.append(f"{key}: {val}")
    return "\n".join(lines)


def _emit(doc: dict, as_json: bool) -> None:
    sys.stdout.write(dumps(doc) if as_json else _render_text(doc) + "\n")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = ["sskg"] + argv

    if args.command == "odometer":
        try:
            sk, a = build_odometer(args.n)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        text = dumps(emit_spec(sk, a))
        if args.emit:
            Path(args.emit).write_text(text)
            if args.json:
                _emit(report(command, text.encode(), {}, {}, {"written": args.emit}), True)
        else:
            sys.stdout.write(text)
        if args.emit_dot:
            Path(args.emit_dot).write_text(to_dot(sk))
        return 0

    try:
        raw = Path(args.spec).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.spec}: {exc}", file=sys.stderr)
        return 2
    bounds = {}
    try:
        sk, a = parse_spec(raw)
        args.cfg = make_config(args, sk.k)
        bounds = args.cfg.as_dict()
        if args.emit_dot:
            Path(args.emit_dot).write_text(to_dot(sk))
        verdicts, results, code = COMMANDS[args.command](args, sk, a)
        if args.assume_cyc:
            results = {**results, "cyc_assumption": "user-asserted"}
    except SpecError as exc:
        doc = report(command, raw, bounds, {}, {"error": "invalid spec", "diagnostics": exc.diagnostics})
        _emit(doc, args.json)
        if not args.json:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    except HypothesisError as exc:
        doc = report(command, raw, bounds, {}, {"error": "hypothesis", "assumption": exc.assumption,
                                                "message": str(exc), "witness": _jsonable(exc.witness)})
        _emit(doc, args.json)
        if not args.json:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, SizeError, QueryError, DegreeError, CompositionError, KeyError) as exc:
        doc = report(command, raw, bounds, {}, {"error": "usage", "message": str(exc)})
        if args.json:
            _emit(doc, True)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report(command, raw, bounds, verdicts, results), args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
