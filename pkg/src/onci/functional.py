"""Convex piecewise-linear functionals over response-function values.

A functional is ``constant + sum(c_v * w_v) + sum(k_j * max(w_v for v in S_j))``
with every ``k_j >= 0``; the max-groups make it convex, so its maximum over a
polytope is attained at a vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .rational import Q, fmt

__all__ = ["Functional", "linear_sum", "eta_sum"]


@dataclass(frozen=True)
class Functional:
    constant: Fraction = Fraction(0)
    linear: tuple[tuple[str, Fraction], ...] = ()
    max_groups: tuple[tuple[Fraction, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constant", Q(self.constant))
        object.__setattr__(self, "linear", tuple((str(v), Q(c)) for v, c in self.linear))
        object.__setattr__(
            self, "max_groups", tuple((Q(c), tuple(str(v) for v in s)) for c, s in self.max_groups)
        )
        for c, s in self.max_groups:
            if not s:
                raise ValueError("empty max-group")

    @property
    def is_linear(self) -> bool:
        return not self.max_groups

    @property
    def is_convex(self) -> bool:
        return all(c >= 0 for c, _ in self.max_groups)

    def labels(self) -> set[str]:
        out = {v for v, _ in self.linear}
        for _, s in self.max_groups:
            out.update(s)
        return out

    def evaluate(self, w: Mapping[str, Fraction]):
        total = self.constant
        for v, c in self.linear:
            total += c * w[v]
        for c, s in self.max_groups:
            total += c * max(w[v] for v in s)
        return total

    def scaled(self, k) -> "Functional":
        k = Q(k)
        return Functional(
            self.constant * k,
            tuple((v, c * k) for v, c in self.linear),
            tuple((c * k, s) for c, s in self.max_groups),
        )

    def __add__(self, other: "Functional") -> "Functional":
        if not isinstance(other, Functional):
            return NotImplemented
        return Functional(
            self.constant + other.constant,
            self.linear + other.linear,
            self.max_groups + other.max_groups,
        )

    def coefficients(self, variables: Iterable[str]) -> list[Fraction]:
        """Dense linear coefficient vector; only valid for linear functionals."""
        if not self.is_linear:
            raise ValueError("functional has max-groups; no coefficient vector")
        acc: dict[str, Fraction] = {}
        for v, c in self.linear:
            acc[v] = acc.get(v, Fraction(0)) + c
        variables = list(variables)
        missing = set(acc) - set(variables)
        if missing:
            raise KeyError(f"labels not among variables: {sorted(missing)}")
        return [acc.get(v, Fraction(0)) for v in variables]

    def to_json(self) -> dict:
        lin: dict[str, str] = {}
        for v, c in self.linear:
            lin[v] = fmt(Q(lin.get(v, "0")) + c)
        return {
            "constant": fmt(self.constant),
            "linear": lin,
            "max_groups": [{"coeff": fmt(c), "labels": list(s)} for c, s in self.max_groups],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Functional":
        return cls(
            Q(str(obj.get("constant", "0"))),
            tuple((v, Q(str(c))) for v, c in obj.get("linear", {}).items()),
            tuple((Q(str(g["coeff"])), tuple(g["labels"])) for g in obj.get("max_groups", [])),
        )


def linear_sum(labels: Iterable[str], coeff=1) -> Functional:
    c = Q(coeff)
    return Functional(linear=tuple((v, c) for v in labels))


def eta_sum(contexts: Iterable[Iterable[str]], coeff=1) -> Functional:
    """``coeff * sum_i max_{v in C_i} w_v``: the best single-outcome response
    per context, summed."""
    c = Q(coeff)
    return Functional(max_groups=tuple((c, tuple(ctx)) for ctx in contexts))
