"""Exact rational helpers: parsing, formatting, small dense linear algebra,
and scalar values of the form ``q * sqrt(k)``.

Rationals are plain :class:`fractions.Fraction` objects throughout the package.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Q",
    "fmt",
    "rank",
    "rref",
    "solve",
    "Scalar",
    "parse_scalar",
    "sqrt_upper_convergent",
    "primitive",
]


def Q(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected so that inexact values never leak into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ValueError(f"not a rational: {x!r}") from None
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def fmt(x: Fraction) -> str:
    """Render as ``"num/den"`` (``"n"`` for integers)."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Returns the nonzero rows of the reduced matrix and the pivot columns.
    """
    m = [[Q(v) for v in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve a square nonsingular system exactly; None when singular."""
    n = len(a)
    aug = [list(row) + [Q(rhs)] for row, rhs in zip(a, b)]
    red, piv = rref(aug)
    if piv != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def primitive(v: Iterable[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    v = tuple(v)
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g <= 1:
        return v
    return tuple(x // g for x in v)


def sqrt_upper_convergent(k: int, tol: Fraction = Fraction(1, 10**4)) -> Fraction:
    """Smallest-denominator continued-fraction convergent ``r >= sqrt(k)``
    with ``r - sqrt(k) <= tol``.

    For ``k = 5`` and the default tolerance this is ``161/72``.
    """
    if k < 0:
        raise ValueError("negative radicand")
    root = math.isqrt(k)
    if root * root == k:
        return Fraction(root)
    # periodic continued fraction of sqrt(k)
    m, d, a = 0, 1, root
    p_prev, p = 1, a
    q_prev, q = 0, 1
    while True:
        m = d * a - m
        d = (k - m * m) // d
        a = (root + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        r = Fraction(p, q)
        # r >= sqrt(k)  <=>  r^2 >= k; r - sqrt(k) = (r^2 - k) / (r + sqrt(k)) <= (r^2 - k) / (2 * root)
        if r * r >= k and (r * r - k) / (2 * root) <= tol:
            return r


_SURD = re.compile(r"^\s*(?:([-+]?\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)(?:\s*/\s*(\d+))?\s*$")


@dataclass(frozen=True)
class Scalar:
    """An exact scalar ``coeff * sqrt(radicand)``; ``radicand == 1`` is rational."""

    coeff: Fraction
    radicand: int = 1

    def __post_init__(self):
        if self.radicand < 1:
            raise ValueError("radicand must be a positive integer")
        root = math.isqrt(self.radicand)
        if root * root == self.radicand and self.radicand != 1:
            object.__setattr__(self, "coeff", self.coeff * root)
            object.__setattr__(self, "radicand", 1)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1 or self.coeff == 0

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(self.radicand)

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.coeff

    def upper_rational(self) -> Fraction:
        """A rational ``>= self``: exact when rational, otherwise a continued
        fraction convergent of the surd scaled by the coefficient."""
        if self.is_rational:
            return self.coeff
        if self.coeff < 0:
            raise ValueError("upper approximation only supported for positive surds")
        return self.coeff * sqrt_upper_convergent(self.radicand)

    def __str__(self) -> str:
        if self.is_rational:
            return fmt(self.coeff)
        if self.coeff == 1:
            return f"sqrt({self.radicand})"
        return f"{fmt(self.coeff)}*sqrt({self.radicand})"


def parse_scalar(text) -> Scalar:
    """Parse ``"p/q"``, ``"sqrt(k)"``, ``"p/q*sqrt(k)"`` or ``"sqrt(k)/q"``."""
    if isinstance(text, (int, Fraction)):
        return Scalar(Q(text))
    if not isinstance(text, str):
        raise ValueError(f"unsupported scalar {text!r}")
    mt = _SURD.match(text)
    if mt:
        coeff = Fraction(mt.group(1)) if mt.group(1) else Fraction(1)
        if mt.group(3):
            coeff /= int(mt.group(3))
        return Scalar(coeff, int(mt.group(2)))
    if "sqrt" in text:
        raise ValueError(f"unsupported surd {text!r}; only q*sqrt(k) is recognised")
    return Scalar(Q(text))
