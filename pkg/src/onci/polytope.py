"""Response-function polytopes and exact vertex enumeration.

One variable ``w_v`` per graph vertex, ``w >= 0``, ``sum(w over C) == 1`` for
every full context and ``<= 1`` for every partial one. Vertices are found by
the double description method on integer rays, so every coordinate is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .functional import Functional
from .graphs import ExclusivityGraph
from .rational import Q, fmt, primitive, rank, rref, solve

__all__ = [
    "PolytopeError",
    "EmptyPolytopeError",
    "HRepPolytope",
    "RfVertex",
    "build_polytope",
    "enumerate_vertices",
    "slice",
    "max_functional",
    "deterministic_vertices",
    "is_feasible",
    "is_extremal",
    "vertices_to_json",
]

Row = tuple[tuple[Fraction, ...], Fraction]


class PolytopeError(ValueError):
    pass


class EmptyPolytopeError(PolytopeError):
    pass


@dataclass(frozen=True)
class HRepPolytope:
    """``{w >= 0 : E w == e, G w <= g}`` over the named variables."""

    variables: tuple[str, ...]
    equalities: tuple[Row, ...] = ()
    inequalities: tuple[Row, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.variables)

    def describe(self) -> list[str]:
        """Human-readable constraint listing (for reports and error messages)."""

        def term(coeffs):
            parts = []
            for v, c in zip(self.variables, coeffs):
                if c == 0:
                    continue
                parts.append(f"w_{v}" if c == 1 else f"{fmt(c)}*w_{v}")
            return " + ".join(parts) or "0"

        out = [f"{term(a)} = {fmt(b)}" for a, b in self.equalities]
        out += [f"{term(a)} <= {fmt(b)}" for a, b in self.inequalities]
        out.append("w >= 0")
        return out


@dataclass(frozen=True, order=True)
class RfVertex:
    coords: tuple[Fraction, ...]
    labels: tuple[str, ...]

    def __getitem__(self, label: str) -> Fraction:
        return self.coords[self.labels.index(label)]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.labels, self.coords))

    def is_deterministic(self) -> bool:
        return all(c in (0, 1) for c in self.coords)

    def to_json(self) -> dict[str, str]:
        return {v: fmt(c) for v, c in zip(self.labels, self.coords)}


def build_polytope(graph: ExclusivityGraph, contexts: Sequence[Sequence[str]], d: int) -> HRepPolytope:
    if not contexts:
        raise PolytopeError("no contexts: every variable would be unbounded")
    variables = graph.labels
    eqs, ineqs = [], []
    covered = set()
    for ctx in contexts:
        ctx = tuple(ctx)
        for v in ctx:
            graph.index(v)
        if not graph.is_clique(ctx):
            raise PolytopeError(f"context {ctx} is not a clique of the graph")
        if len(ctx) > d:
            raise PolytopeError(f"context {ctx} is larger than the dimension {d}")
        members = set(ctx)
        row = tuple(Fraction(1 if v in members else 0) for v in variables)
        (eqs if len(ctx) == d else ineqs).append((row, Fraction(1)))
        covered |= members
    loose = [v for v in variables if v not in covered]
    if loose:
        raise PolytopeError(f"unbounded polytope: variables {loose} appear in no context")
    return HRepPolytope(variables, tuple(eqs), tuple(ineqs))


def slice(p: HRepPolytope, constraints: Iterable[tuple]) -> HRepPolytope:
    """Append ``coeffs . w (<=|>=) rhs`` rows; ``coeffs`` is a dense sequence
    or a ``{label: coeff}`` mapping."""
    extra = list(p.inequalities)
    for coeffs, rel, rhs in constraints:
        if isinstance(coeffs, Mapping):
            unknown = set(coeffs) - set(p.variables)
            if unknown:
                raise PolytopeError(f"slice references unknown labels {sorted(unknown)}")
            row = [Q(coeffs.get(v, 0)) for v in p.variables]
        else:
            row = [Q(c) for c in coeffs]
            if len(row) != p.dim:
                raise PolytopeError(f"slice row has {len(row)} entries, polytope has {p.dim} variables")
        rhs = Q(rhs)
        if rel in ("<=", "≤"):
            extra.append((tuple(row), rhs))
        elif rel in (">=", "≥"):
            extra.append((tuple(-c for c in row), -rhs))
        else:
            raise PolytopeError(f"unknown relation {rel!r}")
    return HRepPolytope(p.variables, p.equalities, tuple(extra))


def _int_row(row: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for c in row:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return primitive(int(c * den) for c in row)


def _reduce_equalities(p: HRepPolytope):
    """Eliminate one variable per independent equality.

    Returns (free column indices, expressions) where expressions[j] gives the
    pivot variable j as ``const - sum(coef * x_free)``.
    """
    n = p.dim
    if not p.equalities:
        return list(range(n)), {}
    aug = [list(a) + [b] for a, b in p.equalities]
    red, piv = rref(aug)
    if n in piv:
        raise EmptyPolytopeError("equality constraints are inconsistent")
    free = [j for j in range(n) if j not in piv]
    expr = {}
    for r, j in enumerate(piv):
        expr[j] = (red[r][n], [red[r][f] for f in free])
    return free, expr


def _homogenised_rows(p: HRepPolytope, free, expr) -> list[tuple[int, ...]]:
    """Rows ``h*t - g.x >= 0`` in the (t, x_free) space, in canonical order:
    t >= 0, then w_v >= 0 in label order, then the inequalities."""
    k = len(free)
    pos = {f: i for i, f in enumerate(free)}
    rows: list[tuple[int, ...]] = [(1,) + (0,) * k]

    def substituted(a: Sequence[Fraction], b: Fraction):
        g = [Fraction(0)] * k
        h = b
        for j, c in enumerate(a):
            if c == 0:
                continue
            if j in pos:
                g[pos[j]] += c
            else:
                const, coefs = expr[j]
                h -= c * const
                for i, cf in enumerate(coefs):
                    g[i] -= c * cf
        return g, h

    for j in range(p.dim):
        unit = [Fraction(0)] * p.dim
        unit[j] = Fraction(-1)
        g, h = substituted(unit, Fraction(0))
        rows.append(_int_row([h] + [-x for x in g]))
    for a, b in p.inequalities:
        g, h = substituted(a, b)
        rows.append(_int_row([h] + [-x for x in g]))
    return rows


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _double_description(rows: list[tuple[int, ...]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{y : row . y >= 0 for all rows}``."""
    basis: list[int] = []
    for i, r in enumerate(rows):
        if rank([rows[j] for j in basis] + [r]) > len(basis):
            basis.append(i)
            if len(basis) == dim:
                break
    if len(basis) < dim:
        raise PolytopeError("constraint system has a lineality space; polytope is unbounded")

    # initial simplicial cone: rays are the columns of the inverse of the basis rows
    a0 = [[Fraction(x) for x in rows[i]] for i in basis]
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []
    for col in range(dim):
        e = [Fraction(int(col == i)) for i in range(dim)]
        y = solve(a0, e)
        den = 1
        for c in y:
            den = den * c.denominator // math.gcd(den, c.denominator)
        rays.append(primitive(int(c * den) for c in y))
        zeros.append(sum(1 << basis[i] for i in range(dim) if i != col))

    done = set(basis)
    for i, r in enumerate(rows):
        if i in done:
            continue
        bit = 1 << i
        vals = [_dot(r, y) for y in rays]
        pos = [j for j, s in enumerate(vals) if s > 0]
        neg = [j for j, s in enumerate(vals) if s < 0]
        new_rays, new_zeros = [], []
        for jp in pos:
            for jn in neg:
                common = zeros[jp] & zeros[jn]
                if common.bit_count() < dim - 2:
                    continue
                if any(
                    (zeros[m] & common) == common
                    for m in range(len(rays))
                    if m != jp and m != jn
                ):
                    continue
                sp, sn = vals[jp], vals[jn]
                y = primitive(sp * a - sn * b for a, b in zip(rays[jn], rays[jp]))
                new_rays.append(y)
                new_zeros.append(common | bit)
        kept = [j for j, s in enumerate(vals) if s >= 0]
        rays = [rays[j] for j in kept] + new_rays
        zeros = [zeros[j] | (bit if vals[j] == 0 else 0) for j in kept] + new_zeros
        done.add(i)
    return rays


def enumerate_vertices(p: HRepPolytope) -> list[RfVertex]:
    """All extremal points of ``p`` in exact rationals, lexicographically sorted.

    Raises :class:`EmptyPolytopeError` when the constraints are inconsistent.
    """
    free, expr = _reduce_equalities(p)
    n = p.dim

    def lift(xf: Sequence[Fraction]) -> tuple[Fraction, ...]:
        w = [Fraction(0)] * n
        for i, f in enumerate(free):
            w[f] = xf[i]
        for j, (const, coefs) in expr.items():
            w[j] = const - sum((c * x for c, x in zip(coefs, xf)), Fraction(0))
        return tuple(w)

    if not free:
        pts = [lift([])]
    else:
        rows = _homogenised_rows(p, free, expr)
        rays = _double_description(rows, len(free) + 1)
        pts = [lift([Fraction(c, y[0]) for c in y[1:]]) for y in rays if y[0] > 0]
    out = sorted({RfVertex(w, p.variables) for w in pts})
    out = [v for v in out if is_feasible(p, v)]
    if not out:
        raise EmptyPolytopeError("polytope is empty:\n  " + "\n  ".join(p.describe()))
    return out


def _coords(v) -> Sequence[Fraction]:
    return v.coords if isinstance(v, RfVertex) else v


def _lhs(row, w) -> Fraction:
    # rows are sparse; skipping zeros avoids most Fraction arithmetic
    return sum((a * x for a, x in zip(row, w) if a and x), Fraction(0))


def is_feasible(p: HRepPolytope, v) -> bool:
    w = _coords(v)
    if any(c < 0 for c in w):
        return False
    if any(_lhs(row, w) != b for row, b in p.equalities):
        return False
    return all(_lhs(row, w) <= b for row, b in p.inequalities)


def is_extremal(p: HRepPolytope, v) -> bool:
    """Active constraints at ``v`` have full rank (``v`` must be feasible)."""
    w = _coords(v)
    active = [list(row) for row, _ in p.equalities]
    active += [list(row) for row, b in p.inequalities if _lhs(row, w) == b]
    for j, x in enumerate(w):
        if x == 0:
            active.append([Fraction(int(i == j)) for i in range(p.dim)])
    return rank(active) == p.dim


def max_functional(vertices: Sequence[RfVertex], f: Functional) -> tuple[Fraction, RfVertex]:
    """Exact maximum of a convex functional over the vertices; first
    maximiser in vertex order wins ties."""
    if not f.is_convex:
        raise ValueError("max-group coefficient is negative; the vertex maximum would not bound the polytope")
    if not vertices:
        raise ValueError("empty vertex list")
    best, arg = None, None
    for v in vertices:
        val = f.evaluate(v.as_dict())
        if best is None or val > best:
            best, arg = val, v
    return best, arg


def deterministic_vertices(vertices: Iterable[RfVertex]) -> list[RfVertex]:
    return [v for v in vertices if v.is_deterministic()]


def vertices_to_json(vertices: Sequence[RfVertex], count_only: bool = False):
    if count_only:
        return len(vertices)
    return [v.to_json() for v in vertices]
