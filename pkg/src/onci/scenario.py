"""Scenario files: graph, contexts, functionals, quantum realization and
declared golden values, as versioned JSON (``"schema": 1``).

Context and outcome indices in scenario files are 1-based: ``[5, 2]`` is the
second outcome of the fifth context.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import jsonschema

from .bounds import builtin_functionals
from .functional import Functional, linear_sum
from .graphs import ExclusivityGraph, GraphError, build_graph, builtin_graph
from .quantum import QuantumError, QuantumRealization, builtin_realization
from .rational import Q, Scalar, fmt, parse_scalar

__all__ = [
    "ScenarioError",
    "Scenario",
    "ConstraintSpec",
    "AprimeSpec",
    "Golden",
    "SCENARIO_SCHEMA",
    "load_scenario",
    "scenario_from_json",
    "dump_scenario",
    "builtin_scenario",
    "resolve_scenario",
]


class ScenarioError(ValueError):
    """Invalid scenario; ``pointer`` is a JSON pointer to the offending value."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.message = message


_rational = {"type": "string", "pattern": r"^\s*-?\d+(/\d+)?\s*$"}
_scalar_text = {"type": "string", "minLength": 1}
_label_list = {"type": "array", "items": {"type": "string"}}
_position = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2}
_functional = {
    "type": "object",
    "properties": {
        "constant": _rational,
        "linear": {"type": "object", "additionalProperties": _rational},
        "max_groups": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"coeff": _rational, "labels": {**_label_list, "minItems": 1}},
                "required": ["coeff", "labels"],
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["schema", "name", "dimension", "vertices", "edges", "contexts"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": 1},
        "name": {"type": "string"},
        "dimension": {"type": "integer", "minimum": 1},
        "vertices": _label_list,
        "edges": {"type": "array", "items": {**_label_list, "minItems": 2, "maxItems": 2}},
        "contexts": {"type": "array", "items": {**_label_list, "minItems": 1}, "minItems": 1},
        "a_contexts": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "constraint": {
            "type": "object",
            "required": ["labels", "value", "c"],
            "additionalProperties": False,
            "properties": {
                "labels": {**_label_list, "minItems": 1},
                "outcome_positions": {"type": "array", "items": _position},
                "value": _scalar_text,
                "c": _rational,
                "samples": {"type": "array", "items": _rational},
            },
        },
        "aprime": {
            "type": "object",
            "required": ["mode", "terms"],
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["mixed_state_term", "plus_I"]},
                "terms": {"type": "array", "items": _position},
            },
        },
        "functionals": {"type": "object", "additionalProperties": _functional},
        "quantum": {
            "type": "object",
            "required": ["vectors", "state"],
            "additionalProperties": False,
            "properties": {
                "vectors": {
                    "type": "object",
                    "additionalProperties": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                },
                "state": {
                    "oneOf": [
                        {"const": "maximally_mixed"},
                        {"type": "array", "items": {"type": "number"}, "minItems": 1},
                    ]
                },
            },
        },
        "golden": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["value", "tol"],
                "additionalProperties": False,
                "properties": {"value": _scalar_text, "tol": {"type": "number", "minimum": 0}},
            },
        },
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}


@dataclass(frozen=True)
class ConstraintSpec:
    labels: tuple[str, ...]
    outcome_positions: tuple[tuple[int, int], ...]
    value: Scalar
    c: Fraction
    samples: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class AprimeSpec:
    mode: str
    terms: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Golden:
    value: str
    tol: float

    def check(self, computed) -> bool:
        target = parse_scalar(self.value)
        if self.tol == 0 and isinstance(computed, (int, Fraction)) and target.is_rational:
            return Q(computed) == target.rational()
        return abs(float(computed) - float(target)) <= self.tol


@dataclass(frozen=True)
class Scenario:
    name: str
    dimension: int
    graph: ExclusivityGraph
    contexts: tuple[tuple[str, ...], ...]
    a_contexts: tuple[int, ...] = ()
    constraint: ConstraintSpec | None = None
    aprime: AprimeSpec | None = None
    functionals: Mapping[str, Functional] = field(default_factory=dict)
    quantum: QuantumRealization | None = None
    golden: Mapping[str, Golden] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def functional(self, name: str) -> Functional:
        if name in self.functionals:
            return self.functionals[name]
        if name == "F" and self.constraint is not None:
            return linear_sum(self.constraint.labels)
        raise ScenarioError("/functionals", f"scenario {self.name!r} defines no functional {name!r}")

    def to_json(self) -> dict:
        out: dict = {
            "schema": 1,
            "name": self.name,
            "dimension": self.dimension,
            "vertices": list(self.graph.labels),
            "edges": [list(e) for e in self.graph.edge_list()],
            "contexts": [list(c) for c in self.contexts],
        }
        if self.a_contexts:
            out["a_contexts"] = list(self.a_contexts)
        if self.constraint is not None:
            cs = self.constraint
            out["constraint"] = {
                "labels": list(cs.labels),
                "outcome_positions": [list(p) for p in cs.outcome_positions],
                "value": str(cs.value),
                "c": fmt(cs.c),
            }
            if cs.samples:
                out["constraint"]["samples"] = [fmt(a) for a in cs.samples]
        if self.aprime is not None:
            out["aprime"] = {"mode": self.aprime.mode, "terms": [list(t) for t in self.aprime.terms]}
        if self.functionals:
            out["functionals"] = {k: f.to_json() for k, f in self.functionals.items()}
        if self.quantum is not None:
            out["quantum"] = self.quantum.to_json()
        if self.golden:
            out["golden"] = {k: {"value": g.value, "tol": g.tol} for k, g in self.golden.items()}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def scenario_from_json(obj: Mapping) -> Scenario:
    errors = sorted(jsonschema.Draft7Validator(SCENARIO_SCHEMA).iter_errors(obj), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        raise ScenarioError(_pointer(e.absolute_path), e.message)

    try:
        graph = build_graph(obj["vertices"], obj["edges"])
    except GraphError as exc:
        raise ScenarioError("/edges", str(exc)) from None
    d = obj["dimension"]
    labels = set(graph.labels)

    def check_labels(seq, ptr):
        for j, v in enumerate(seq):
            if v not in labels:
                raise ScenarioError(f"{ptr}/{j}", f"unknown label {v!r}")

    contexts = []
    for i, ctx in enumerate(obj["contexts"]):
        check_labels(ctx, f"/contexts/{i}")
        if not graph.is_clique(ctx):
            raise ScenarioError(f"/contexts/{i}", f"context {ctx} is not a clique")
        if len(ctx) > d:
            raise ScenarioError(f"/contexts/{i}", f"context larger than dimension {d}")
        contexts.append(tuple(ctx))

    def check_position(pos, ptr):
        i, k = pos
        if i > len(contexts):
            raise ScenarioError(ptr, f"context index {i} out of range (1..{len(contexts)})")
        if k > len(contexts[i - 1]):
            raise ScenarioError(ptr, f"outcome {k} out of range for context {i}")
        return (i, k)

    a_ctx = tuple(obj.get("a_contexts", ()))
    for j, i in enumerate(a_ctx):
        if i > len(contexts):
            raise ScenarioError(f"/a_contexts/{j}", f"context index {i} out of range (1..{len(contexts)})")

    constraint = None
    if "constraint" in obj:
        c = obj["constraint"]
        check_labels(c["labels"], "/constraint/labels")
        positions = tuple(
            check_position(p, f"/constraint/outcome_positions/{j}")
            for j, p in enumerate(c.get("outcome_positions", ()))
        )
        for j, (i, k) in enumerate(positions):
            if contexts[i - 1][k - 1] not in c["labels"]:
                raise ScenarioError(
                    f"/constraint/outcome_positions/{j}",
                    f"outcome {k} of context {i} is {contexts[i - 1][k - 1]!r}, not a constraint label",
                )
        try:
            value = parse_scalar(c["value"])
        except ValueError as exc:
            raise ScenarioError("/constraint/value", str(exc)) from None
        coeff = Q(c["c"])
        if not 0 < coeff <= 1:
            raise ScenarioError("/constraint/c", f"mixing coefficient {fmt(coeff)} outside (0, 1]")
        constraint = ConstraintSpec(
            tuple(c["labels"]), positions, value, coeff, tuple(Q(a) for a in c.get("samples", ()))
        )

    aprime = None
    if "aprime" in obj:
        ap = obj["aprime"]
        terms = tuple(check_position(t, f"/aprime/terms/{j}") for j, t in enumerate(ap["terms"]))
        aprime = AprimeSpec(ap["mode"], terms)

    functionals = {}
    for name, fobj in obj.get("functionals", {}).items():
        f = Functional.from_json(fobj)
        bad = sorted(f.labels() - labels)
        if bad:
            raise ScenarioError(f"/functionals/{name}", f"unknown labels {bad}")
        if not f.is_convex:
            raise ScenarioError(f"/functionals/{name}", "negative max-group coefficient")
        functionals[name] = f
    if aprime is not None and aprime.mode == "plus_I" and "I" not in functionals:
        raise ScenarioError("/aprime/mode", "plus_I needs a functional named 'I'")

    quantum = None
    if "quantum" in obj:
        q = obj["quantum"]
        check_labels(list(q["vectors"]), "/quantum/vectors")
        try:
            quantum = QuantumRealization.from_vectors(q["vectors"], q["state"])
        except QuantumError as exc:
            raise ScenarioError("/quantum", str(exc)) from None
        if quantum.dimension != d:
            raise ScenarioError("/quantum/vectors", f"vectors have dimension {quantum.dimension}, scenario {d}")

    golden = {}
    for name, g in obj.get("golden", {}).items():
        try:
            parse_scalar(g["value"])
        except ValueError as exc:
            raise ScenarioError(f"/golden/{name}/value", str(exc)) from None
        golden[name] = Golden(g["value"], g["tol"])

    return Scenario(
        name=obj["name"],
        dimension=d,
        graph=graph,
        contexts=tuple(contexts),
        a_contexts=a_ctx,
        constraint=constraint,
        aprime=aprime,
        functionals=functionals,
        quantum=quantum,
        golden=golden,
        notes=tuple(obj.get("notes", ())),
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"{path}: invalid JSON ({exc})") from None
    return scenario_from_json(obj)


def dump_scenario(s: Scenario) -> str:
    return json.dumps(s.to_json(), indent=2, ensure_ascii=False) + "\n"


def _kcbs_sign_note() -> str:
    s5 = math.sqrt(5)
    inner = s5 + math.sqrt(5 - 2 * s5) - 3
    return (
        "the frequently quoted closed form 1 - (2/5)(sqrt(5) + sqrt(5 - 2 sqrt(5)) - 3) "
        f"evaluates to {1 - 0.4 * inner:.6f}; the optimum found here, "
        f"{1 + 0.4 * inner:.6f}, equals 1 + (2/5)(sqrt(5) + sqrt(5 - 2 sqrt(5)) - 3), "
        "so that expression has a sign error while its decimal value 0.985 is right"
    )


def builtin_scenario(name: str) -> Scenario:
    """``yo13``, ``kcbs`` or ``cycle:n`` (also ``cycle(n)``), n >= 4."""
    key = name.strip().lower()
    if key == "yo13":
        fs = builtin_functionals("yo13")
        golden = {
            "clique_count": Golden("16", 0),
            "vertex_count": Golden("420", 0),
            "F_max": Golden("8/3", 0),
            "ks_I": Golden("7", 0),
            "aprime_bound": Golden("4", 0),
            "sample:7/6": Golden("17/18", 0),
            "envelope_alpha": Golden("4/3", 0),
            "envelope_beta": Golden("1/3", 0),
            "onci_bound": Golden("4/9*sqrt(5)", 1e-9),
            "onci_a_star": Golden(repr((8 - 2 * math.sqrt(5)) / 3), 1e-9),
            "quantum_I": Golden("22/3", 1e-9),
            "quantum_A": Golden("1", 1e-12),
            "quantum_aprime": Golden("13/3", 1e-9),
        }
        return Scenario(
            name="yo13",
            dimension=3,
            graph=builtin_graph("yo13"),
            contexts=fs.contexts,
            a_contexts=fs.a_contexts,
            constraint=ConstraintSpec(tuple("ABCD"), fs.F_positions, fs.F_value, fs.c),
            aprime=AprimeSpec("mixed_state_term", fs.F_positions),
            functionals={"I": fs.I, "F": fs.F, "T": fs.T, "aprime": fs.aprime},
            quantum=builtin_realization("yo13"),
            golden=golden,
        )
    if key == "kcbs":
        fs = builtin_functionals("kcbs")
        golden = {
            "clique_count": Golden("5", 0),
            "vertex_count": Golden("12", 0),
            "deterministic_count": Golden("11", 0),
            "F_max": Golden("5/2", 0),
            "ks_I": Golden("2", 0),
            "envelope_alpha": Golden("17/5", 0),
            "envelope_beta": Golden("6/5", 0),
            "onci_bound": Golden("0.9850", 1e-4),
            "aprime_bound": Golden("5", 0),
            "quantum_I": Golden("sqrt(5)", 1e-9),
            "quantum_A": Golden("1", 1e-12),
            "quantum_aprime": Golden(repr(3 + math.sqrt(5)), 1e-9),
        }
        return Scenario(
            name="kcbs",
            dimension=3,
            graph=builtin_graph("kcbs5-extended"),
            contexts=fs.contexts,
            a_contexts=fs.a_contexts,
            constraint=ConstraintSpec(tuple("12345"), fs.F_positions, fs.F_value, fs.c),
            aprime=AprimeSpec("plus_I", ()),
            functionals={"I": fs.I, "F": fs.F, "T": fs.T, "aprime": fs.aprime},
            quantum=builtin_realization("kcbs5-extended"),
            golden=golden,
            notes=(_kcbs_sign_note(),),
        )
    for prefix in ("cycle:", "cycle(", "cycle-extended(", "cycle-extended:"):
        if key.startswith(prefix):
            rest = key[len(prefix):].rstrip(")")
            if not rest.isdigit():
                break
            n = int(rest)
            try:
                graph = builtin_graph(f"cycle-extended({n})")
            except GraphError as exc:
                raise ScenarioError("", str(exc)) from None
            fs = builtin_functionals(f"cycle({n})")
            cos = math.cos(math.pi / n)
            q_aprime = 3 + (n * cos / (1 + cos) if n % 2 else n / 2)
            golden = {
                "clique_count": Golden(str(n), 0),
                "ks_I": Golden(str(n // 2), 0),
                "aprime_bound": Golden(str(n // 2 + 3), 0),
                "quantum_A": Golden("1", 1e-12),
                "quantum_aprime": Golden(repr(q_aprime), 1e-9),
            }
            return Scenario(
                name=f"cycle:{n}",
                dimension=3,
                graph=graph,
                contexts=fs.contexts,
                a_contexts=fs.a_contexts,
                aprime=AprimeSpec("plus_I", ()),
                functionals={"I": fs.I, "T": fs.T, "aprime": fs.aprime},
                quantum=builtin_realization(f"cycle-extended({n})"),
                golden=golden,
            )
    raise ScenarioError("", f"unknown built-in scenario {name!r}")


def resolve_scenario(ref: str) -> Scenario:
    """A path to a scenario file, or the name of a built-in scenario."""
    p = Path(ref)
    if p.exists():
        return load_scenario(p)
    if p.suffix == ".json":
        raise ScenarioError("", f"no such scenario file {ref!r}")
    return builtin_scenario(ref)
