"""Exclusivity graphs: rays as vertices, orthogonality as edges.

Label order is canonical. Clique member order, clique list order and,
downstream, polytope variable order all derive from it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "GraphError",
    "ExclusivityGraph",
    "CompletionRecord",
    "MAX_VERTICES",
    "build_graph",
    "maximal_cliques",
    "complete_to_dimension",
    "builtin_graph",
    "YO13_CLIQUES",
]

MAX_VERTICES = 64

Context = tuple[str, ...]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ExclusivityGraph:
    labels: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    _adj: dict[str, frozenset[str]] = field(init=False, repr=False, compare=False)
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj: dict[str, set[str]] = {v: set() for v in self.labels}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", {v: frozenset(n) for v, n in adj.items()})
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown vertex label {label!r}") from None

    def neighbours(self, label: str) -> frozenset[str]:
        return self._adj[label]

    def adjacent(self, u: str, v: str) -> bool:
        return v in self._adj.get(u, ())

    def is_clique(self, members: Iterable[str]) -> bool:
        members = list(members)
        if len(set(members)) != len(members):
            return False
        return all(self.adjacent(u, v) for i, u in enumerate(members) for v in members[i + 1:])

    def sort_labels(self, members: Iterable[str]) -> Context:
        return tuple(sorted(members, key=self.index))

    def edge_list(self) -> list[tuple[str, str]]:
        """Edges as canonically ordered pairs, sorted by label order."""
        pairs = [self.sort_labels(e) for e in self.edges]
        return sorted(pairs, key=lambda p: (self.index(p[0]), self.index(p[1])))


@dataclass(frozen=True)
class CompletionRecord:
    original: ExclusivityGraph
    added: tuple[str, ...]
    attached: dict[Context, tuple[str, ...]]


def build_graph(labels: Sequence, edges: Iterable[Sequence]) -> ExclusivityGraph:
    labels = tuple(str(v) for v in labels)
    seen = set()
    for v in labels:
        if v in seen:
            raise GraphError(f"duplicate label {v!r}")
        seen.add(v)
    if len(labels) > MAX_VERTICES:
        raise GraphError(f"graph has {len(labels)} vertices; the limit is {MAX_VERTICES}")
    es = set()
    for e in edges:
        if len(e) != 2:
            raise GraphError(f"edge {list(e)!r} does not have two endpoints")
        u, v = str(e[0]), str(e[1])
        for x in (u, v):
            if x not in seen:
                raise GraphError(f"edge ({u}, {v}) references unknown label {x!r}")
        if u == v:
            raise GraphError(f"self-loop at {u!r}")
        es.add(frozenset((u, v)))
    return ExclusivityGraph(labels, frozenset(es))


def maximal_cliques(g: ExclusivityGraph) -> list[Context]:
    """All maximal cliques, members in label order, list in lexicographic
    order of label indices.

    Bron-Kerbosch with Tomita pivoting on index bitmasks.
    """
    n = len(g)
    nbr = [0] * n
    for e in g.edges:
        u, v = (g.index(x) for x in e)
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u

    found: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(r)
            return
        # pivot maximising |P ∩ N(u)|
        px = p | x
        best, best_cnt = -1, -1
        while px:
            u = (px & -px).bit_length() - 1
            px &= px - 1
            cnt = (p & nbr[u]).bit_count()
            if cnt > best_cnt:
                best, best_cnt = u, cnt
        cand = p & ~nbr[best]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            bit = 1 << v
            expand(r | bit, p & nbr[v], x & nbr[v])
            p &= ~bit
            x |= bit

    if n:
        expand(0, (1 << n) - 1, 0)
    cliques = [tuple(i for i in range(n) if mask >> i & 1) for mask in found]
    cliques.sort()
    return [tuple(g.labels[i] for i in c) for c in cliques]


def _cycle_order(g: ExclusivityGraph) -> int | None:
    """n when g is exactly the cycle 1-2-...-n-1 on labels "1".."n"."""
    n = len(g)
    if n < 3 or [v for v in g.labels] != [str(i) for i in range(1, n + 1)]:
        return None
    want = {frozenset((str(i), str(i % n + 1))) for i in range(1, n + 1)}
    return n if set(g.edges) == want else None


def complete_to_dimension(g: ExclusivityGraph, d: int) -> tuple[ExclusivityGraph, CompletionRecord]:
    """Extend every maximal clique of size s < d with d - s fresh vertices so
    that every edge lies in a d-clique.

    Fresh labels join the clique's members with "+" and carry a "'" suffix;
    cliques needing several fresh vertices get ordinals 1, 2, ... appended.
    On the cycle 1..n the fresh vertex of edge (i, i+1) is simply "i'".
    """
    cliques = maximal_cliques(g)
    big = max((len(c) for c in cliques), default=0)
    if d < big:
        raise GraphError(f"dimension {d} is smaller than an existing clique of size {big}")
    cycle_n = _cycle_order(g)
    taken = set(g.labels)
    labels = list(g.labels)
    edges = [tuple(e) for e in g.edges]
    added: list[str] = []
    attached: dict[Context, tuple[str, ...]] = {}
    if cycle_n:
        # edge (n, 1) comes last so fresh labels read 1'..n'
        cliques.sort(key=lambda c: int(c[1]) if c == ("1", str(cycle_n)) else int(c[0]))
    for c in cliques:
        k = d - len(c)
        if k <= 0:
            continue
        if cycle_n and len(c) == 2:
            i, j = int(c[0]), int(c[1])
            first = i if (j == i % cycle_n + 1) else j
            stems = [f"{first}'"]
        else:
            stem = "+".join(c) + "'"
            stems = [stem] if k == 1 else [f"{stem}{t}" for t in range(1, k + 1)]
        fresh = []
        for s in stems:
            lab, t = s, 1
            while lab in taken:
                t += 1
                lab = f"{s}{t}"
            taken.add(lab)
            fresh.append(lab)
        for f_i, f in enumerate(fresh):
            edges.extend((m, f) for m in c)
            edges.extend((f, h) for h in fresh[f_i + 1:])
        labels.extend(fresh)
        added.extend(fresh)
        attached[c] = tuple(fresh)
    if not added:
        return g, CompletionRecord(g, (), {})
    return build_graph(labels, edges), CompletionRecord(g, tuple(added), attached)


# Maximal cliques of the 13-ray set on vertices 1..9, A..D.
YO13_CLIQUES: tuple[Context, ...] = (
    ("1", "2", "3"), ("1", "4", "7"), ("2", "5", "8"), ("3", "6", "9"),
    ("4", "A"), ("4", "D"), ("5", "B"), ("5", "D"), ("6", "C"), ("6", "D"),
    ("7", "B"), ("7", "C"), ("8", "A"), ("8", "C"), ("9", "A"), ("9", "B"),
)

_NAMED = re.compile(r"^(cycle|cycle-extended)\s*[(:]\s*(\d+)\s*\)?$")


def _edges_of(cliques: Iterable[Sequence[str]]) -> list[tuple[str, str]]:
    out = []
    for c in cliques:
        out.extend((u, v) for i, u in enumerate(c) for v in c[i + 1:])
    return out


def _cycle(n: int) -> ExclusivityGraph:
    labels = [str(i) for i in range(1, n + 1)]
    return build_graph(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])


def builtin_graph(name: str) -> ExclusivityGraph:
    """Named graphs: ``yo13``, ``kcbs5``, ``kcbs5-extended``, ``cycle(n)``,
    ``cycle-extended(n)`` (``cycle:n`` also accepted), n >= 4."""
    key = name.strip().lower()
    if key == "yo13":
        labels = [str(i) for i in range(1, 10)] + list("ABCD")
        return build_graph(labels, _edges_of(YO13_CLIQUES))
    if key == "kcbs5":
        return _cycle(5)
    if key == "kcbs5-extended":
        cyc = [str(i) for i in range(1, 6)]
        extra = list("ABCDE")
        tri = [(cyc[i], cyc[(i + 1) % 5], extra[i]) for i in range(5)]
        return build_graph(cyc + extra, _edges_of(tri))
    m = _NAMED.match(key)
    if m:
        n = int(m.group(2))
        if n < 4:
            raise GraphError(f"cycle length must be at least 4, got {n}")
        g = _cycle(n)
        if m.group(1) == "cycle":
            return g
        return complete_to_dimension(g, 3)[0]
    raise GraphError(f"unknown built-in graph {name!r}")
