"""Ray realizations of exclusivity graphs and their quantum values."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .functional import Functional
from .graphs import ExclusivityGraph, builtin_graph, maximal_cliques

__all__ = [
    "QuantumError",
    "QuantumRealization",
    "VerificationReport",
    "OperationalStats",
    "builtin_realization",
    "verify_realization",
    "orthogonality_graph_matches",
    "quantum_value",
    "operational_stats",
    "quantum_onci_values",
    "verify_uniform_average",
    "random_pure_states",
    "projector_sum",
]

NORM_TOL = 1e-12
ORTH_TOL = 1e-9
COMPLETE_TOL = 1e-12


class QuantumError(ValueError):
    pass


@dataclass(frozen=True)
class QuantumRealization:
    dimension: int
    vectors: Mapping[str, np.ndarray]
    state: np.ndarray | None = None   # None means the maximally mixed state
    raw: Mapping | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_vectors(cls, vectors: Mapping[str, Sequence[float]], state=None) -> "QuantumRealization":
        """Normalise the given vectors (and state) on the way in."""
        vecs = {}
        dim = None
        for lab, v in vectors.items():
            arr = np.asarray(v, dtype=float)
            if dim is None:
                dim = arr.shape[0]
            if arr.shape != (dim,):
                raise QuantumError(f"vector of {lab!r} has shape {arr.shape}, expected ({dim},)")
            nrm = np.linalg.norm(arr)
            if nrm == 0:
                raise QuantumError(f"zero vector for {lab!r}")
            vecs[str(lab)] = arr / nrm
        if dim is None:
            raise QuantumError("no vectors")
        psi = None
        if state is not None and not (isinstance(state, str) and state == "maximally_mixed"):
            psi = np.asarray(state, dtype=complex if np.iscomplexobj(state) else float)
            if psi.shape != (dim,):
                raise QuantumError(f"state has shape {psi.shape}, expected ({dim},)")
            psi = psi / np.linalg.norm(psi)
        raw = {
            "vectors": {str(k): list(v) for k, v in vectors.items()},
            "state": state if state is not None else "maximally_mixed",
        }
        return cls(dim, vecs, psi, raw)

    def projector(self, label: str) -> np.ndarray:
        v = self.vectors[label]
        return np.outer(v, v.conj())

    def probability(self, label: str, preparation="state") -> float:
        """Born probability of the ray ``label``.

        ``preparation`` is ``"state"`` (the stored state), ``"maximally_mixed"``,
        a pure state vector or a density matrix.
        """
        rho = self._density(preparation)
        if rho is None:
            return 1.0 / self.dimension
        if rho.ndim == 1:
            return float(abs(np.vdot(rho, self.vectors[label])) ** 2)
        return float(np.real(np.trace(rho @ self.projector(label))))

    def _density(self, preparation):
        if isinstance(preparation, str):
            if preparation == "maximally_mixed":
                return None
            if preparation == "state":
                return self.state
            raise QuantumError(f"unknown preparation {preparation!r}")
        arr = np.asarray(preparation)
        if arr.ndim == 1:
            return arr / np.linalg.norm(arr)
        if arr.shape != (self.dimension, self.dimension):
            raise QuantumError(f"density matrix has shape {arr.shape}")
        return arr

    def to_json(self) -> dict:
        """The vectors as supplied (before normalisation), so files round-trip."""
        if self.raw is not None:
            state = self.raw["state"]
            if not isinstance(state, str):
                state = [_num(x) for x in state]
            return {
                "vectors": {k: [_num(x) for x in v] for k, v in self.raw["vectors"].items()},
                "state": state,
            }
        state = "maximally_mixed" if self.state is None else [float(x) for x in np.real(self.state)]
        return {
            "vectors": {k: [float(x) for x in v] for k, v in self.vectors.items()},
            "state": state,
        }


def _num(x):
    x = x.item() if isinstance(x, np.generic) else x
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    for x in v:
        if abs(x) > 1e-12:
            return v if x > 0 else -v
    return v


def _complete_by_cross(vectors: dict, contexts: Sequence[Sequence[str]]) -> None:
    for ctx in contexts:
        missing = [v for v in ctx if v not in vectors]
        if not missing:
            continue
        if len(missing) != 1 or len(ctx) != 3:
            raise QuantumError(f"cannot complete context {ctx} by a cross product")
        a, b = (vectors[v] for v in ctx if v in vectors)
        w = np.cross(a, b)
        vectors[missing[0]] = _canonical_sign(_unit(w))


def _umbrella(n: int) -> tuple[list[np.ndarray], np.ndarray]:
    """n rays on a cone around e1, consecutive ones orthogonal (odd n)."""
    cos_pi = math.cos(math.pi / n)
    cos_t = math.sqrt(cos_pi / (1 + cos_pi))
    sin_t = math.sqrt(1 - cos_t ** 2)
    step = math.pi * (n - 1) / n
    vecs = [np.array([cos_t, sin_t * math.cos(j * step), sin_t * math.sin(j * step)]) for j in range(n)]
    return vecs, np.array([1.0, 0.0, 0.0])


_CYC = re.compile(r"^cycle-extended\s*[(:]\s*(\d+)\s*\)?$")

_YO13_RAYS = {
    "1": (1, 0, 0), "2": (0, 1, 0), "3": (0, 0, 1),
    "4": (0, 1, -1), "5": (-1, 0, 1), "6": (1, -1, 0),
    "7": (0, 1, 1), "8": (1, 0, 1), "9": (1, 1, 0),
    "A": (-1, 1, 1), "B": (1, -1, 1), "C": (1, 1, -1), "D": (1, 1, 1),
}


def builtin_realization(name: str) -> QuantumRealization:
    """Rays for ``yo13``, ``kcbs5-extended`` or ``cycle-extended(n)``."""
    key = name.strip().lower()
    if key == "yo13":
        real = QuantumRealization.from_vectors(_YO13_RAYS)
        g = builtin_graph("yo13")
        if not orthogonality_graph_matches(g, real):
            raise QuantumError("yo13 rays do not reproduce the 13-vertex exclusivity graph")
        return real
    if key in ("kcbs5-extended", "kcbs"):
        n, extra = 5, list("ABCDE")
    else:
        m = _CYC.match(key)
        if not m:
            raise QuantumError(f"unknown built-in realization {name!r}")
        n = int(m.group(1))
        extra = [f"{i}'" for i in range(1, n + 1)]
    cyc = [str(i) for i in range(1, n + 1)]
    if n % 2:
        rays, psi = _umbrella(n)
    else:
        e1, e2 = np.eye(3)[0], np.eye(3)[1]
        rays = [e1 if j % 2 == 0 else e2 for j in range(n)]
        psi = (e1 + e2) / math.sqrt(2)
    vectors = dict(zip(cyc, rays))
    _complete_by_cross(vectors, [(cyc[i], cyc[(i + 1) % n], extra[i]) for i in range(n)])
    ordered = {lab: vectors[lab] for lab in cyc + extra}
    return QuantumRealization.from_vectors(ordered, psi)


@dataclass
class VerificationReport:
    norm_checks: int = 0
    orthogonality_checks: int = 0
    completeness_checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "norm_checks": self.norm_checks,
            "orthogonality_checks": self.orthogonality_checks,
            "completeness_checks": self.completeness_checks,
            "failures": list(self.failures),
        }


def verify_realization(
    graph: ExclusivityGraph,
    real: QuantumRealization,
    contexts: Sequence[Sequence[str]] | None = None,
) -> VerificationReport:
    """Unit norms, orthogonality on every edge and completeness of every
    full context (maximal cliques of size d unless ``contexts`` is given)."""
    rep = VerificationReport()
    missing = [v for v in graph.labels if v not in real.vectors]
    if missing:
        rep.failures.append(f"no vector for labels {missing}")
        return rep
    for lab in graph.labels:
        rep.norm_checks += 1
        nrm = np.linalg.norm(real.vectors[lab])
        if abs(nrm - 1) > NORM_TOL:
            rep.failures.append(f"norm of {lab} is {nrm!r}")
    for u, v in graph.edge_list():
        rep.orthogonality_checks += 1
        dot = abs(np.vdot(real.vectors[u], real.vectors[v]))
        if dot >= ORTH_TOL:
            rep.failures.append(f"edge ({u}, {v}) not orthogonal: |<u|v>| = {dot:.3g}")
    if contexts is None:
        contexts = [c for c in maximal_cliques(graph) if len(c) == real.dimension]
    ident = np.eye(real.dimension)
    for ctx in contexts:
        if len(ctx) != real.dimension:
            continue
        rep.completeness_checks += 1
        dev = np.max(np.abs(projector_sum(real, ctx) - ident))
        if dev > COMPLETE_TOL:
            rep.failures.append(f"context {tuple(ctx)} projectors do not sum to identity (dev {dev:.3g})")
    return rep


def orthogonality_graph_matches(graph: ExclusivityGraph, real: QuantumRealization) -> bool:
    labs = graph.labels
    for i, u in enumerate(labs):
        for v in labs[i + 1:]:
            orth = abs(np.vdot(real.vectors[u], real.vectors[v])) < ORTH_TOL
            if orth != graph.adjacent(u, v):
                return False
    return True


def projector_sum(real: QuantumRealization, labels, coeffs=None) -> np.ndarray:
    coeffs = [1.0] * len(labels) if coeffs is None else coeffs
    out = np.zeros((real.dimension, real.dimension), dtype=complex)
    for lab, c in zip(labels, coeffs):
        out += float(c) * real.projector(lab)
    return np.real_if_close(out)


def quantum_value(f: Functional, real: QuantumRealization, preparation="state") -> float:
    """``constant + sum(c_v * Tr(rho P_v))``; max-groups have no quantum value."""
    if not f.is_linear:
        raise QuantumError("quantum value undefined for functionals with max-groups")
    total = float(f.constant)
    for lab, c in f.linear:
        total += float(c) * real.probability(lab, preparation)
    return total


@dataclass(frozen=True)
class OperationalStats:
    preparation: str
    probabilities: Mapping[tuple[int, int], float]   # (context, outcome), 1-based


def operational_stats(contexts: Sequence[Sequence[str]], real: QuantumRealization, preparation="state") -> OperationalStats:
    probs = {}
    for i, ctx in enumerate(contexts, 1):
        for k, lab in enumerate(ctx, 1):
            probs[(i, k)] = real.probability(lab, preparation)
        if len(ctx) == real.dimension:
            tot = sum(probs[(i, k)] for k in range(1, len(ctx) + 1))
            if abs(tot - 1) > COMPLETE_TOL:
                raise QuantumError(f"outcome probabilities of context {i} sum to {tot!r}")
    tag = preparation if isinstance(preparation, str) else "explicit"
    return OperationalStats(tag, probs)


def quantum_onci_values(scenario, real: QuantumRealization) -> dict[str, float]:
    """Quantum A (eigenstate preparations) and A' for a scenario.

    ``scenario`` needs ``contexts``, ``a_contexts`` (1-based) and ``aprime``
    with ``mode`` and ``terms``; ``plus_I`` also reads ``functionals["I"]``.
    """
    aprime = getattr(scenario, "aprime", None)
    if aprime is None:
        raise QuantumError("scenario has no A' definition")
    probs = []
    for i in scenario.a_contexts:
        for lab in scenario.contexts[i - 1]:
            probs.append(real.probability(lab, real.vectors[lab]))
    A = sum(probs) / len(probs)
    if aprime.mode == "mixed_state_term":
        second = 0.0
        for i, k in aprime.terms:
            second += real.probability(scenario.contexts[i - 1][k - 1], "maximally_mixed")
    elif aprime.mode == "plus_I":
        second = quantum_value(scenario.functionals["I"], real, "state")
    else:
        raise QuantumError(f"unknown A' mode {aprime.mode!r}")
    return {"A": A, "aprime": 3 * A + second}


def verify_uniform_average(contexts: Sequence[Sequence[str]], real: QuantumRealization) -> VerificationReport:
    """Each full context's uniform mixture of eigenstates is the maximally
    mixed state."""
    rep = VerificationReport()
    d = real.dimension
    target = np.eye(d) / d
    for ctx in contexts:
        if len(ctx) != d:
            rep.failures.append(f"context {tuple(ctx)} is not a full context")
            continue
        rep.completeness_checks += 1
        avg = projector_sum(real, ctx) / d
        dev = np.max(np.abs(avg - target))
        if dev > COMPLETE_TOL:
            rep.failures.append(f"uniform average over {tuple(ctx)} is not maximally mixed (dev {dev:.3g})")
    return rep


def random_pure_states(d: int, count: int, seed: int = 0) -> list[np.ndarray]:
    """Haar-random complex unit vectors."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        z = rng.normal(size=d) + 1j * rng.normal(size=d)
        out.append(z / np.linalg.norm(z))
    return out
