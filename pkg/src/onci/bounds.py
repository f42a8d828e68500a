"""Noncontextual bounds: deterministic (KS) bounds, polytope bounds of convex
functionals, sliced conditional maxima with linear envelopes, and the
measure-theoretic bound on the average predictability ``A``.

The bound on ``A`` combines three facts about ontic states with
``F(w) >= a``:

* their measure is at least ``c * (v - a) / (r - a)``, where ``v`` is the
  operational value of the constraint functional ``F`` and ``r`` its maximum
  over the response polytope;
* on them the envelope functional satisfies ``T <= alpha - beta * a``;
* elsewhere ``T <= 1``.

So ``A <= 1 - c * beta * (a - p) * (v - a) / (r - a)`` with
``p = (alpha - 1) / beta``, minimised at ``a* = r - sqrt((r - p) * (r - v))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from scipy.optimize import minimize_scalar

from .functional import Functional, eta_sum, linear_sum
from .graphs import YO13_CLIQUES, builtin_graph, maximal_cliques
from .polytope import (
    HRepPolytope,
    RfVertex,
    build_polytope,
    deterministic_vertices,
    enumerate_vertices,
    max_functional,
    slice,
)
from .rational import Q, Scalar, fmt, parse_scalar

__all__ = [
    "BoundError",
    "EnvelopeError",
    "ks_bound",
    "polytope_bound",
    "conditional_max",
    "fit_linear_envelope",
    "measure_lower_bound",
    "OnciSpec",
    "BoundReport",
    "make_onci_spec",
    "derive_onci_bound",
    "ncycle_aprime_bound",
    "FunctionalSet",
    "builtin_functionals",
    "builtin_contexts",
]


class BoundError(ValueError):
    pass


class EnvelopeError(BoundError):
    pass


def ks_bound(vertices: Sequence[RfVertex], f: Functional) -> Fraction:
    """Maximum of a linear functional over the deterministic vertices."""
    if not f.is_linear:
        raise BoundError("a KS inequality is linear; functional has max-groups")
    det = deterministic_vertices(vertices)
    if not det:
        raise BoundError("no deterministic vertices: the contexts admit no 0/1 assignment")
    return max_functional(det, f)[0]


def polytope_bound(vertices: Sequence[RfVertex], f: Functional) -> Fraction:
    return max_functional(vertices, f)[0]


def conditional_max(polytope: HRepPolytope, F: Functional, a, b, T: Functional) -> tuple[Fraction, RfVertex]:
    """Maximum of ``T`` over ``{w in polytope : a <= F(w) <= b}``."""
    a, b = Q(a), Q(b)
    if a > b:
        raise BoundError(f"empty threshold range [{fmt(a)}, {fmt(b)}]")
    coeffs = dict(zip(polytope.variables, F.coefficients(polytope.variables)))
    shift = F.constant
    sliced = slice(polytope, [(coeffs, ">=", a - shift), (coeffs, "<=", b - shift)])
    return max_functional(enumerate_vertices(sliced), T)


def fit_linear_envelope(samples: Sequence[tuple]) -> tuple[Fraction, Fraction]:
    """Line ``alpha - beta * a`` through the lowest- and highest-threshold
    samples. Raises :class:`EnvelopeError` if any sample lies above it."""
    pts = sorted((Q(a), Q(m)) for a, m in samples)
    if len(pts) < 3:
        raise EnvelopeError("need at least three samples")
    if len({a for a, _ in pts}) != len(pts):
        raise EnvelopeError("sample thresholds must be distinct")
    (a0, m0), (a1, m1) = pts[0], pts[-1]
    beta = (m0 - m1) / (a1 - a0)
    alpha = m0 + beta * a0
    above = [(a, m) for a, m in pts if m > alpha - beta * a]
    if above:
        listed = ", ".join(f"({fmt(a)}, {fmt(m)})" for a, m in above)
        raise EnvelopeError(
            f"samples above the line {fmt(alpha)} - {fmt(beta)}*a: {listed}"
        )
    return alpha, beta


def measure_lower_bound(v, a, r) -> float:
    """``(v - a) / (r - a)``: least measure of the states with ``F >= a``."""
    v, a, r = float(v), float(a), float(r)
    if a == r:
        raise BoundError("threshold equals the polytope maximum; measure bound undefined")
    return (v - a) / (r - a)


@dataclass(frozen=True)
class OnciSpec:
    polytope: HRepPolytope
    F: Functional
    v: Scalar
    r: Fraction
    c: Fraction
    T: Functional
    lower: Fraction
    samples: tuple[Fraction, ...]
    slice_upper: Fraction

    def __post_init__(self):
        if not (0 < self.c <= 1):
            raise BoundError(f"mixing coefficient {fmt(self.c)} outside (0, 1]")
        if not self.T.is_convex:
            raise BoundError("envelope functional must be convex")
        if not (float(self.lower) < float(self.v) <= float(self.r)):
            raise BoundError(
                f"need lower < v <= r, got {fmt(self.lower)}, {self.v}, {fmt(self.r)}"
            )


@dataclass
class BoundReport:
    bound: float
    a_star: float
    alpha: Fraction
    beta: Fraction
    p: Fraction | None
    v: Scalar
    r: Fraction
    c: Fraction
    lower: Fraction
    slice_upper: Fraction
    samples: list[tuple[Fraction, Fraction, RfVertex]]
    collinear: bool
    numeric_a_star: float | None = None
    notes: list[str] = field(default_factory=list)

    def B(self, a: float) -> float:
        """The certified bound obtained at threshold ``a``."""
        if self.p is None:
            return 1.0
        v, r, p = float(self.v), float(self.r), float(self.p)
        return 1.0 - float(self.c) * float(self.beta) * (a - p) * measure_lower_bound(v, a, r)

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "a_star": self.a_star,
            "numeric_a_star": self.numeric_a_star,
            "envelope": {
                "alpha": fmt(self.alpha),
                "beta": fmt(self.beta),
                "p": None if self.p is None else fmt(self.p),
                "collinear": self.collinear,
            },
            "inputs": {
                "v": str(self.v),
                "r": fmt(self.r),
                "c": fmt(self.c),
                "lower": fmt(self.lower),
                "slice_upper": fmt(self.slice_upper),
            },
            "samples": [
                {"a": fmt(a), "max": fmt(m), "witness": w.to_json()} for a, m, w in self.samples
            ],
            "notes": list(self.notes),
        }


def _default_samples(lower: Fraction, top: Fraction) -> tuple[Fraction, ...]:
    mid = ((lower + top) / 2).limit_denominator(8)
    if not lower < mid < top:
        mid = (lower + top) / 2
    return (lower, mid, top)


def make_onci_spec(
    polytope: HRepPolytope,
    F: Functional,
    v,
    c,
    T: Functional,
    samples: Sequence | None = None,
    slice_limit: str = "v",
    vertices: Sequence[RfVertex] | None = None,
) -> OnciSpec:
    """Fill in ``r`` (polytope max of F), the lower threshold (deterministic
    max of F), the slice cap and default sample thresholds.

    ``slice_limit="v"`` caps slices at the operational value (a rational
    upper approximation when it is a surd); ``"r"`` caps them at ``r``.
    """
    v = parse_scalar(v) if not isinstance(v, Scalar) else v
    vertices = enumerate_vertices(polytope) if vertices is None else vertices
    r = polytope_bound(vertices, F)
    lower = ks_bound(vertices, F)
    v_cap = v.upper_rational()
    if slice_limit == "v":
        upper = v_cap
    elif slice_limit == "r":
        upper = r
    else:
        raise BoundError(f"slice limit must be 'v' or 'r', got {slice_limit!r}")
    thr = tuple(Q(a) for a in samples) if samples else _default_samples(lower, v_cap)
    return OnciSpec(polytope, F, v, r, Q(c), T, lower, thr, upper)


def derive_onci_bound(spec: OnciSpec) -> BoundReport:
    notes: list[str] = []
    samples = []
    for a in spec.samples:
        m, w = conditional_max(spec.polytope, spec.F, a, spec.slice_upper, spec.T)
        samples.append((a, m, w))
    alpha, beta = fit_linear_envelope([(a, m) for a, m, _ in samples])
    collinear = all(m == alpha - beta * a for a, m, _ in samples)
    if not collinear:
        notes.append("interior envelope samples lie strictly below the fitted line")
    if not spec.v.is_rational:
        notes.append(
            f"operational value {spec.v} is irrational; slices use the rational cap "
            f"{fmt(spec.v.upper_rational())} >= {spec.v}, which can only raise conditional maxima"
        )

    v, r, c = float(spec.v), float(spec.r), float(spec.c)
    report = BoundReport(
        bound=1.0, a_star=v, alpha=alpha, beta=beta, p=None, v=spec.v, r=spec.r, c=spec.c,
        lower=spec.lower, slice_upper=spec.slice_upper, samples=samples, collinear=collinear,
        notes=notes,
    )
    if beta <= 0:
        notes.append("envelope does not decrease with the threshold; no nontrivial bound")
        return report
    p = (alpha - 1) / beta
    report.p = p
    lo, hi = max(float(p), float(spec.lower)), v
    if lo > hi:
        raise BoundError(f"threshold interval [{lo}, {hi}] is empty")
    if lo == hi:
        report.a_star = lo
        notes.append("no violation region: threshold interval is a single point")
        return report
    if v >= r:
        raise BoundError("operational value reaches the polytope maximum; measure bound degenerate")

    a_star = r - math.sqrt((r - float(p)) * (r - v))
    a_star = min(max(a_star, lo), hi)
    report.a_star = a_star
    report.bound = report.B(a_star)

    res = minimize_scalar(report.B, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    report.numeric_a_star = float(res.x)
    if report.bound > float(res.fun) + 1e-12:
        raise BoundError(
            f"closed-form optimum {report.bound!r} exceeds numeric optimum {float(res.fun)!r}"
        )
    for a, _, _ in samples:
        if lo <= float(a) <= hi and report.B(float(a)) < report.bound - 1e-12:
            raise BoundError(f"sample threshold {fmt(a)} beats the optimum")
    return report


def builtin_contexts(name: str) -> list[tuple[str, ...]]:
    """Contexts M_1, M_2, ... of the named scenario, in measurement order."""
    key = name.strip().lower()
    if key == "yo13":
        return list(YO13_CLIQUES)
    if key in ("kcbs", "kcbs5-extended"):
        cyc, extra = [str(i) for i in range(1, 6)], "ABCDE"
        return [(cyc[i], cyc[(i + 1) % 5], extra[i]) for i in range(5)]
    n = _cycle_n(key)
    return [(str(i), str(i % n + 1), f"{i}'") for i in range(1, n + 1)]


def _cycle_n(key: str) -> int:
    for prefix in ("cycle-extended", "cycle"):
        if key.startswith(prefix):
            rest = key[len(prefix):].strip("(): ")
            if rest.isdigit() and int(rest) >= 4:
                return int(rest)
    raise BoundError(f"unknown scenario {key!r}")


@dataclass(frozen=True)
class FunctionalSet:
    contexts: tuple[tuple[str, ...], ...]
    a_contexts: tuple[int, ...]          # 1-based indices into contexts
    I: Functional
    F: Functional
    F_positions: tuple[tuple[int, int], ...]   # (context, outcome), both 1-based
    F_value: Scalar | None
    c: Fraction
    T: Functional
    aprime: Functional


def builtin_functionals(name: str) -> FunctionalSet:
    """The inequality, constraint, envelope and A' functionals of a built-in
    scenario (``yo13``, ``kcbs`` or ``cycle(n)``)."""
    key = name.strip().lower()
    ctx = builtin_contexts(key)
    if key == "yo13":
        a_ctx = (2, 3, 4)
        eta = eta_sum([ctx[i - 1] for i in a_ctx])
        F = linear_sum("ABCD")
        return FunctionalSet(
            contexts=tuple(ctx),
            a_contexts=a_ctx,
            I=linear_sum("123456789", 2) + linear_sum("ABCD"),
            F=F,
            F_positions=((5, 2), (7, 2), (9, 2), (10, 2)),
            F_value=Scalar(Fraction(4, 3)),
            c=Fraction(1),
            T=eta.scaled(Fraction(1, 3)),
            aprime=eta + F,
        )
    n = 5 if key in ("kcbs", "kcbs5-extended") else _cycle_n(key)
    cyc = [str(i) for i in range(1, n + 1)]
    eta = eta_sum(ctx)
    I = linear_sum(cyc)
    return FunctionalSet(
        contexts=tuple(ctx),
        a_contexts=tuple(range(1, n + 1)),
        I=I,
        F=I,
        F_positions=tuple((i, 1) for i in range(1, n + 1)),
        F_value=Scalar(Fraction(1), 5) if n == 5 else None,
        c=Fraction(1, 3),
        T=eta.scaled(Fraction(1, n)),
        aprime=eta.scaled(Fraction(1, n)) + I + Functional(constant=Fraction(2)),
    )


def ncycle_aprime_bound(n: int) -> Fraction:
    """Enumerated maximum of ``(1/n) sum max{w_i, w_i+1, w_i'} + sum w_j + 2``
    over the completed n-cycle, checked against ``n // 2 + 3``."""
    if n < 4:
        raise BoundError(f"cycle length must be at least 4, got {n}")
    g = builtin_graph(f"cycle-extended({n})")
    fs = builtin_functionals(f"cycle({n})")
    verts = enumerate_vertices(build_polytope(g, maximal_cliques(g), 3))
    value = polytope_bound(verts, fs.aprime)
    if value != n // 2 + 3:
        raise BoundError(f"enumerated A' bound {fmt(value)} differs from {n // 2 + 3} at n={n}")
    return value
