from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from onci.functional import Functional, eta_sum, linear_sum
from onci.graphs import YO13_CLIQUES, build_graph, builtin_graph, maximal_cliques
from onci.polytope import (
    EmptyPolytopeError,
    PolytopeError,
    build_polytope,
    deterministic_vertices,
    enumerate_vertices,
    is_extremal,
    is_feasible,
    max_functional,
    slice,
    vertices_to_json,
)
from oracles import active_set_vertices, deterministic_assignments

TRI = build_graph(["1", "2", "3"], [("1", "2"), ("2", "3"), ("1", "3")])


def simplex():
    return build_polytope(TRI, [("1", "2", "3")], 3)


def test_yo13_constraint_blocks(yo13_polytope):
    p = yo13_polytope
    assert (p.dim, len(p.equalities), len(p.inequalities)) == (13, 4, 12)
    assert p.describe()[0] == "w_1 + w_2 + w_3 = 1"
    assert p.describe()[4] == "w_4 + w_A <= 1"


def test_kcbs_constraint_blocks(kcbs_polytope):
    p = kcbs_polytope
    assert (p.dim, len(p.equalities), len(p.inequalities)) == (10, 5, 0)


def test_simplex_vertices():
    vs = enumerate_vertices(simplex())
    assert [v.coords for v in vs] == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert len(deterministic_vertices(vs)) == 3


def test_build_errors():
    with pytest.raises(PolytopeError, match="not a clique"):
        build_polytope(builtin_graph("kcbs5"), [("1", "3")], 3)
    with pytest.raises(PolytopeError, match="unbounded"):
        build_polytope(TRI, [("1", "2")], 3)
    with pytest.raises(PolytopeError, match="no contexts"):
        build_polytope(TRI, [], 3)
    with pytest.raises(PolytopeError, match="larger"):
        build_polytope(TRI, [("1", "2", "3")], 2)


def test_yo13_vertex_count(yo13_polytope, yo13_vertices):
    assert len(yo13_vertices) == 420
    assert all(is_feasible(yo13_polytope, v) and is_extremal(yo13_polytope, v) for v in yo13_vertices)
    assert yo13_vertices == sorted(yo13_vertices)
    assert len({v.coords for v in yo13_vertices}) == 420


def test_yo13_deterministic_matches_brute_force(yo13_vertices):
    labels = builtin_graph("yo13").labels
    brute = deterministic_assignments(labels, YO13_CLIQUES, 3)
    det = deterministic_vertices(yo13_vertices)
    assert sorted(tuple(int(c) for c in v.coords) for v in det) == sorted(brute)
    assert len(det) == 24


def test_kcbs_vertices(kcbs_vertices):
    assert len(kcbs_vertices) == 12
    det = deterministic_vertices(kcbs_vertices)
    assert len(det) == 11
    (frac,) = [v for v in kcbs_vertices if not v.is_deterministic()]
    assert frac.as_dict() == {**{str(i): Fraction(1, 2) for i in range(1, 6)}, **dict.fromkeys("ABCDE", 0)}
    # 11 = independent sets of the pentagon (including the empty set)
    g = builtin_graph("kcbs5")
    indep = [m for m in range(32) if all(not (m >> i & 1 and m >> ((i + 1) % 5) & 1) for i in range(5))]
    assert len(indep) == 11
    assert {tuple(v.coords[:5]) for v in det} == {tuple(m >> i & 1 for i in range(5)) for m in indep}
    assert g.labels == kcbs_vertices[0].labels[:5]


@pytest.mark.parametrize("name", ["simplex", "kcbs5-extended", "cycle-extended(5)"])
def test_oracle_equivalence(name):
    if name == "simplex":
        p = simplex()
    else:
        g = builtin_graph(name)
        p = build_polytope(g, maximal_cliques(g), 3)
    ours = {v.coords for v in enumerate_vertices(p)}
    oracle = {tuple(Fraction(int(x.p), int(x.q)) for x in pt) for pt in active_set_vertices(p.variables, p.equalities, p.inequalities)}
    assert ours == oracle


@st.composite
def small_scenarios(draw):
    """Random subgraphs of a few triangles plus edges, all vertices covered."""
    n = draw(st.integers(3, 7))
    labels = [str(i) for i in range(n)]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n)]
    edges = [p for p in pairs if draw(st.booleans())]
    return labels, edges


@settings(max_examples=25, deadline=None)
@given(small_scenarios(), st.integers(2, 3))
def test_random_polytopes_match_oracle(sc, d):
    labels, edges = sc
    g = build_graph(labels, edges)
    contexts = maximal_cliques(g)
    if any(len(c) > d for c in contexts):
        return
    p = build_polytope(g, contexts, d)
    oracle = {tuple(Fraction(int(x.p), int(x.q)) for x in pt) for pt in active_set_vertices(p.variables, p.equalities, p.inequalities)}
    try:
        ours = {v.coords for v in enumerate_vertices(p)}
    except EmptyPolytopeError:
        ours = set()
    assert ours == oracle


def test_empty_polytope_reported():
    p = slice(simplex(), [({"1": 1, "2": 1, "3": 1}, ">=", 2)])
    with pytest.raises(EmptyPolytopeError, match="empty"):
        enumerate_vertices(p)
    # inconsistent equalities
    g = build_graph(["1", "2"], [("1", "2")])
    p = build_polytope(g, [("1", "2")], 2)
    p = type(p)(p.variables, p.equalities + (((Fraction(1), Fraction(1)), Fraction(2)),), ())
    with pytest.raises(EmptyPolytopeError):
        enumerate_vertices(p)


def test_slice_leaves_original(yo13_polytope):
    abcd = {v: 1 for v in "ABCD"}
    s = slice(yo13_polytope, [(abcd, ">=", Fraction(7, 6)), (abcd, "<=", Fraction(4, 3))])
    assert len(s.inequalities) == len(yo13_polytope.inequalities) + 2
    assert len(yo13_polytope.inequalities) == 12
    assert enumerate_vertices(s)


def test_kcbs_slice_nonempty(kcbs_polytope):
    cyc = {str(i): 1 for i in range(1, 6)}
    s = slice(kcbs_polytope, [(cyc, ">=", 2), (cyc, "<=", Fraction(161, 72))])
    assert enumerate_vertices(s)


def test_trivial_slice(kcbs_polytope, kcbs_vertices):
    s = slice(kcbs_polytope, [([0] * 10, "<=", 0)])
    assert enumerate_vertices(s) == kcbs_vertices


def test_slice_errors(kcbs_polytope):
    with pytest.raises(PolytopeError):
        slice(kcbs_polytope, [({"Z": 1}, "<=", 1)])
    with pytest.raises(PolytopeError):
        slice(kcbs_polytope, [([1, 2], "<=", 1)])
    with pytest.raises(PolytopeError):
        slice(kcbs_polytope, [([0] * 10, "<", 1)])


@pytest.mark.parametrize("thr", [Fraction(1), Fraction(7, 6), Fraction(5, 4)])
def test_slice_keeps_surviving_vertices(yo13_polytope, yo13_vertices, thr):
    abcd = {v: 1 for v in "ABCD"}
    s = slice(yo13_polytope, [(abcd, ">=", thr)])
    sv = {v.coords for v in enumerate_vertices(s)}
    kept = {v.coords for v in yo13_vertices if sum(v[x] for x in "ABCD") >= thr}
    assert kept <= sv


def test_max_functional(yo13_vertices, kcbs_vertices):
    val, wit = max_functional(yo13_vertices, linear_sum("ABCD"))
    assert val == Fraction(8, 3)
    assert sum(wit[x] for x in "ABCD") == val
    assert max_functional(kcbs_vertices, linear_sum("12345"))[0] == Fraction(5, 2)
    assert max_functional(kcbs_vertices, Functional(constant=1))[0] == 1


def test_max_functional_tie_break(kcbs_vertices):
    _, wit = max_functional(kcbs_vertices, Functional(constant=1))
    assert wit == kcbs_vertices[0]


def test_max_functional_rejects_concave(kcbs_vertices):
    with pytest.raises(ValueError, match="negative"):
        max_functional(kcbs_vertices, eta_sum([("1", "2")], -1))
    with pytest.raises(ValueError):
        max_functional([], linear_sum("1"))


@pytest.mark.parametrize("n", range(4, 12))
def test_cycle_vertices_half_integral(n):
    g = builtin_graph(f"cycle-extended({n})")
    vs = enumerate_vertices(build_polytope(g, maximal_cliques(g), 3))
    assert all(c in (0, Fraction(1, 2), 1) for v in vs for c in v.coords)


def test_vertex_export(kcbs_vertices):
    assert vertices_to_json(kcbs_vertices, count_only=True) == 12
    out = vertices_to_json(kcbs_vertices)
    assert out[-1]["1"] in {"0", "1", "1/2"}
    assert any(v["1"] == "1/2" for v in out)
