"""Command line entry point: ``onci <subcommand> ...``.

Exit status: 0 success, 1 computational failure or failed verdict, 2 usage
or input error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import (
    BoundError,
    conditional_max,
    derive_onci_bound,
    ks_bound,
    make_onci_spec,
    polytope_bound,
)
from .graphs import GraphError, maximal_cliques
from .pipeline import PipelineError, canonical, render_report, run_pipeline
from .polytope import PolytopeError, build_polytope, enumerate_vertices, slice, vertices_to_json
from .quantum import QuantumError, quantum_onci_values, quantum_value, random_pure_states
from .rational import Q, fmt
from .scenario import ScenarioError, builtin_scenario, dump_scenario, resolve_scenario

_SLICE = re.compile(r"^\s*SUM\(\s*([^)]*)\)\s*(<=|>=)\s*(-?\d+(?:/\d+)?)\s*$")


class UsageError(Exception):
    pass


def parse_slice(expr: str):
    """``SUM(A,B,C) >= 7/6`` -> ({A: 1, B: 1, C: 1}, ">=", Fraction(7, 6))."""
    m = _SLICE.match(expr)
    if not m:
        raise UsageError(f"bad slice expression {expr!r}; expected SUM(label,...) >= p/q or <= p/q")
    labels = [x.strip() for x in m.group(1).split(",") if x.strip()]
    if not labels:
        raise UsageError(f"slice {expr!r} names no labels")
    return {v: 1 for v in labels}, m.group(2), Fraction(m.group(3))


def _emit(obj, fmt_: str) -> None:
    if fmt_ == "json":
        sys.stdout.write(json.dumps(canonical(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        for key, val in _flatten(canonical(obj)):
            print(f"{key:<48} {val}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj, ensure_ascii=False) if isinstance(obj, list) else obj


def _scenario(ref):
    return resolve_scenario(ref)


def cmd_builtin(args):
    s = builtin_scenario(args.name)
    text = dump_scenario(s)
    if args.emit:
        Path(args.emit).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_cliques(args):
    s = _scenario(args.scenario)
    cliques = maximal_cliques(s.graph)
    if args.format == "json":
        _emit({"count": len(cliques), "cliques": [list(c) for c in cliques]}, "json")
    else:
        for c in cliques:
            print("(" + ",".join(c) + ")")
    return 0


def cmd_vertices(args):
    s = _scenario(args.scenario)
    p = build_polytope(s.graph, s.contexts, s.dimension)
    if args.slice:
        p = slice(p, [parse_slice(e) for e in args.slice])
    verts = enumerate_vertices(p)
    if args.count_only:
        print(len(verts))
    elif args.format == "json":
        _emit(vertices_to_json(verts), "json")
    else:
        print("  ".join(p.variables))
        for v in verts:
            print("  ".join(fmt(c) for c in v.coords))
    return 0


def cmd_bound(args):
    s = _scenario(args.scenario)
    p = build_polytope(s.graph, s.contexts, s.dimension)
    kind = args.kind
    if kind == "onci":
        if s.constraint is None:
            raise UsageError(f"scenario {s.name!r} has no constraint block")
        cs = s.constraint
        samples = cs.samples or None
        if args.range:
            lo, hi = (Q(x) for x in args.range)
            samples = (lo, ((lo + hi) / 2).limit_denominator(8), hi)
        spec = make_onci_spec(p, s.functional("F"), cs.value, cs.c, s.functional("T"),
                              samples=samples, slice_limit=args.slice_limit)
        rep = derive_onci_bound(spec).to_json()
        _emit(rep, args.format)
        return 0
    verts = enumerate_vertices(p)
    if kind == "aprime":
        print(fmt(polytope_bound(verts, s.functional(args.functional or "aprime"))))
    elif kind == "ks":
        print(fmt(ks_bound(verts, s.functional(args.functional or "I"))))
    elif kind == "polytope":
        print(fmt(polytope_bound(verts, s.functional(args.functional or "I"))))
    elif kind == "conditional":
        if not args.range:
            raise UsageError("bound conditional needs --range A B")
        a, b = (Q(x) for x in args.range)
        val, wit = conditional_max(p, s.functional("F"), a, b, s.functional(args.functional or "T"))
        if args.format == "json":
            _emit({"a": a, "b": b, "max": val, "witness": wit.to_json()}, "json")
        else:
            print(fmt(val))
    return 0


def cmd_quantum(args):
    s = _scenario(args.scenario)
    q = s.quantum
    if q is None:
        raise UsageError(f"scenario {s.name!r} has no quantum block")
    prep = "maximally_mixed" if q.state is None else "state"
    f = s.functional(args.functional or "I")
    out = {"functional": args.functional or "I", "preparation": prep, "value": quantum_value(f, q, prep)}
    vals = [quantum_value(f, q, psi) for psi in random_pure_states(s.dimension, 20, args.seed)]
    out["random_states"] = {"count": len(vals), "seed": args.seed, "min": min(vals), "max": max(vals)}
    if s.aprime is not None and s.a_contexts:
        out.update(quantum_onci_values(s, q))
    _emit(out, args.format)
    return 0


def cmd_report(args):
    s = _scenario(args.scenario)
    report = run_pipeline(s, slice_limit=args.slice_limit, seed=args.seed)
    if args.format == "json":
        sys.stdout.write(render_report(report))
    else:
        _emit(report, "table")
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for random-state checks")
    common.add_argument("--slice-limit", choices=["v", "r"], default="v",
                        help="cap envelope slices at the operational value (v) or the polytope maximum (r)")

    parser = argparse.ArgumentParser(prog="onci", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"onci {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("builtin", parents=[common], help="export a built-in scenario")
    p.add_argument("name", help="yo13, kcbs or cycle:N")
    p.add_argument("--emit", metavar="PATH")
    p.set_defaults(func=cmd_builtin)

    p = sub.add_parser("cliques", parents=[common], help="maximal cliques of the scenario graph")
    p.add_argument("scenario", help="scenario file or built-in name")
    p.set_defaults(func=cmd_cliques)

    p = sub.add_parser("vertices", parents=[common], help="vertices of the response polytope")
    p.add_argument("scenario")
    p.add_argument("--slice", action="append", metavar="EXPR", help="SUM(label,...) >= p/q (repeatable)")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("bound", parents=[common], help="noncontextual bounds")
    p.add_argument("kind", choices=["ks", "polytope", "conditional", "onci", "aprime"])
    p.add_argument("scenario")
    p.add_argument("--functional", metavar="NAME")
    p.add_argument("--range", nargs=2, metavar=("A", "B"))
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("quantum", parents=[common], help="quantum values")
    p.add_argument("scenario")
    p.add_argument("--functional", metavar="NAME")
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("report", parents=[common], help="full pipeline report")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ScenarioError, GraphError) as exc:
        print(f"onci: error: {exc}", file=sys.stderr)
        return 2
    except (PipelineError, BoundError, PolytopeError, QuantumError, ValueError, ArithmeticError) as exc:
        print(f"onci: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
