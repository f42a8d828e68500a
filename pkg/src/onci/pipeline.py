"""End-to-end runs over a scenario, producing a byte-stable JSON report."""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from . import __version__
from .bounds import derive_onci_bound, ks_bound, make_onci_spec, polytope_bound
from .graphs import maximal_cliques
from .polytope import (
    build_polytope,
    deterministic_vertices,
    enumerate_vertices,
    is_extremal,
    is_feasible,
    max_functional,
)
from .quantum import (
    quantum_onci_values,
    quantum_value,
    random_pure_states,
    verify_realization,
    verify_uniform_average,
)
from .rational import fmt
from .scenario import Scenario, dump_scenario

__all__ = ["PipelineError", "run_pipeline", "render_report", "canonical"]

RANDOM_STATES = 20


class PipelineError(RuntimeError):
    def __init__(self, step: str, message: str):
        super().__init__(f"[{step}] {message}")
        self.step = step


def canonical(obj):
    """Rationals to "p/q", floats to 12 significant digits, recursively."""
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if hasattr(obj, "item"):
        return canonical(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def render_report(report: dict) -> str:
    return json.dumps(canonical(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _step(name):
    def wrap(fn):
        def run(*args, **kw):
            try:
                return fn(*args, **kw)
            except PipelineError:
                raise
            except (ValueError, ArithmeticError) as exc:
                raise PipelineError(name, str(exc)) from exc
        return run
    return wrap


@_step("cliques")
def _cliques(s: Scenario):
    cliques = maximal_cliques(s.graph)
    d = s.dimension
    return {
        "count": len(cliques),
        "cliques": [list(c) for c in cliques],
        "contexts_match_maximal_cliques": sorted(s.graph.sort_labels(c) for c in s.contexts) == sorted(cliques),
        "full_contexts": sum(len(c) == d for c in s.contexts),
        "partial_contexts": sum(len(c) < d for c in s.contexts),
    }


@_step("polytope")
def _polytope(s: Scenario):
    return build_polytope(s.graph, s.contexts, s.dimension)


@_step("vertices")
def _vertices(p):
    verts = enumerate_vertices(p)
    return verts, {
        "count": len(verts),
        "deterministic": len(deterministic_vertices(verts)),
        "all_feasible": all(is_feasible(p, v) for v in verts),
        "all_extremal": all(is_extremal(p, v) for v in verts),
    }


@_step("bounds")
def _bounds(s: Scenario, verts):
    out = {}
    for name in sorted(s.functionals):
        f = s.functionals[name]
        val, wit = max_functional(verts, f)
        entry = {"polytope": val, "witness": wit.to_json()}
        if f.is_linear and deterministic_vertices(verts):
            entry["ks"] = ks_bound(verts, f)
        out[name] = entry
    return out


@_step("onci")
def _onci(s: Scenario, p, verts, slice_limit):
    cs = s.constraint
    spec = make_onci_spec(
        p, s.functional("F"), cs.value, cs.c, s.functional("T"),
        samples=cs.samples or None, slice_limit=slice_limit, vertices=verts,
    )
    return spec, derive_onci_bound(spec)


@_step("quantum")
def _quantum(s: Scenario, seed: int):
    q = s.quantum
    out = {"verification": verify_realization(s.graph, q, s.contexts).to_json()}
    full = [c for c in s.contexts if len(c) == s.dimension]
    out["uniform_average"] = verify_uniform_average(full, q).to_json()
    prep = "maximally_mixed" if q.state is None else "state"
    out["preparation"] = prep
    if "I" in s.functionals:
        I = s.functionals["I"]
        out["I"] = quantum_value(I, q, prep)
        vals = [quantum_value(I, q, psi) for psi in random_pure_states(s.dimension, RANDOM_STATES, seed)]
        out["I_random_states"] = {"count": len(vals), "seed": seed, "min": min(vals), "max": max(vals)}
    if s.constraint is not None:
        out["F"] = quantum_value(s.functional("F"), q, prep)
        out["F_matches_value"] = abs(out["F"] - float(s.constraint.value)) <= 1e-9
    if s.aprime is not None and s.a_contexts:
        vals = quantum_onci_values(s, q)
        out["A"], out["aprime"] = vals["A"], vals["aprime"]
    return out


def run_pipeline(s: Scenario, slice_limit: str = "v", seed: int = 0) -> dict:
    """Clique check, polytope, vertices, functional bounds, the bound on A,
    quantum values, then verdicts for every declared golden value."""
    computed: dict = {}
    steps: dict = {}
    notes = list(s.notes)

    steps["cliques"] = _cliques(s)
    computed["clique_count"] = steps["cliques"]["count"]

    p = _polytope(s)
    steps["polytope"] = {
        "variables": p.dim,
        "equalities": len(p.equalities),
        "inequalities": len(p.inequalities),
        "constraints": p.describe(),
    }
    verts, steps["vertices"] = _vertices(p)
    computed["vertex_count"] = steps["vertices"]["count"]
    computed["deterministic_count"] = steps["vertices"]["deterministic"]

    steps["bounds"] = _bounds(s, verts)
    for name, entry in steps["bounds"].items():
        computed[f"polytope_{name}"] = entry["polytope"]
        if "ks" in entry:
            computed[f"ks_{name}"] = entry["ks"]
    if "aprime" in steps["bounds"]:
        computed["aprime_bound"] = steps["bounds"]["aprime"]["polytope"]

    if s.constraint is not None and ("T" in s.functionals):
        F = s.functional("F")
        r, wit = max_functional(verts, F)
        steps["F_max"] = {"value": r, "witness": wit.to_json()}
        computed["F_max"] = r
        spec, rep = _onci(s, p, verts, slice_limit)
        steps["onci"] = rep.to_json()
        steps["onci"]["slice_limit"] = slice_limit
        computed.update(
            onci_bound=rep.bound, onci_a_star=rep.a_star,
            envelope_alpha=rep.alpha, envelope_beta=rep.beta,
        )
        for a, m, _ in rep.samples:
            computed[f"sample:{fmt(a)}"] = m
    else:
        notes.append("no constraint functional with envelope T; bound on A not derived")

    if s.quantum is not None:
        steps["quantum"] = _quantum(s, seed)
        qs = steps["quantum"]
        for key, src in (("quantum_I", "I"), ("quantum_A", "A"), ("quantum_aprime", "aprime")):
            if src in qs:
                computed[key] = qs[src]

    verdicts = {}
    for name in sorted(s.golden):
        g = s.golden[name]
        if name not in computed:
            verdicts[name] = {"expected": g.value, "tol": g.tol, "value": None, "pass": False}
            continue
        val = computed[name]
        verdicts[name] = {"expected": g.value, "tol": g.tol, "value": val, "pass": g.check(val)}

    checks_ok = steps["vertices"]["all_feasible"] and steps["vertices"]["all_extremal"]
    if "quantum" in steps:
        checks_ok = checks_ok and steps["quantum"]["verification"]["passed"]
    passed = checks_ok and all(v["pass"] for v in verdicts.values())

    text = dump_scenario(s)
    return {
        "tool": {"name": "onci", "version": __version__},
        "scenario": {
            "name": s.name,
            "dimension": s.dimension,
            "vertices": len(s.graph),
            "edges": len(s.graph.edges),
            "contexts": len(s.contexts),
            "sha256": hashlib.sha256(text.encode()).hexdigest(),
        },
        "steps": steps,
        "verdicts": verdicts,
        "notes": notes,
        "passed": passed,
    }
