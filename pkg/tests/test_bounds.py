import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from onci.bounds import (
    BoundError,
    EnvelopeError,
    OnciSpec,
    builtin_functionals,
    conditional_max,
    derive_onci_bound,
    fit_linear_envelope,
    ks_bound,
    make_onci_spec,
    measure_lower_bound,
    ncycle_aprime_bound,
    polytope_bound,
)
from onci.functional import Functional, eta_sum, linear_sum
from onci.graphs import build_graph, builtin_graph
from onci.polytope import build_polytope, enumerate_vertices
from onci.rational import Scalar, parse_scalar
from oracles import grid_minimum

S5 = math.sqrt(5)
YO = builtin_functionals("yo13")
KC = builtin_functionals("kcbs")


def simplex_vertices():
    g = build_graph("123", [("1", "2"), ("2", "3"), ("1", "3")])
    return enumerate_vertices(build_polytope(g, [("1", "2", "3")], 3))


def test_ks_bounds(yo13_vertices, kcbs_vertices):
    assert ks_bound(yo13_vertices, YO.I) == 7
    assert ks_bound(kcbs_vertices, KC.I) == 2
    assert ks_bound(simplex_vertices(), linear_sum("1")) == 1


def test_ks_rejects_max_groups(yo13_vertices):
    with pytest.raises(BoundError):
        ks_bound(yo13_vertices, YO.aprime)


def test_ks_needs_deterministic_vertices(kcbs_vertices):
    frac = [v for v in kcbs_vertices if not v.is_deterministic()]
    with pytest.raises(BoundError, match="deterministic"):
        ks_bound(frac, KC.I)


def test_polytope_bounds(yo13_vertices):
    assert polytope_bound(yo13_vertices, YO.aprime) == 4
    assert polytope_bound(yo13_vertices, linear_sum("ABCD")) == Fraction(8, 3)
    assert polytope_bound(yo13_vertices, linear_sum("123")) == 1


def test_ks_below_polytope(yo13_vertices, kcbs_vertices):
    for verts, f in [(yo13_vertices, YO.I), (yo13_vertices, YO.F), (kcbs_vertices, KC.I)]:
        assert ks_bound(verts, f) <= polytope_bound(verts, f)
    assert polytope_bound(yo13_vertices, YO.I) == Fraction(26, 3)


def test_conditional_max_yo13(yo13_polytope):
    val, wit = conditional_max(yo13_polytope, YO.F, Fraction(7, 6), Fraction(4, 3), YO.T)
    assert val == Fraction(17, 18)
    assert Fraction(7, 6) <= YO.F.evaluate(wit.as_dict()) <= Fraction(4, 3)
    assert conditional_max(yo13_polytope, YO.F, 1, Fraction(4, 3), YO.T)[0] == 1
    assert conditional_max(yo13_polytope, YO.F, Fraction(4, 3), Fraction(4, 3), YO.T)[0] == Fraction(8, 9)


def test_conditional_max_unrestricted(yo13_polytope, yo13_vertices):
    full = conditional_max(yo13_polytope, YO.F, 0, Fraction(8, 3), YO.T)[0]
    assert full == polytope_bound(yo13_vertices, YO.T)


def test_conditional_max_errors(yo13_polytope):
    with pytest.raises(BoundError):
        conditional_max(yo13_polytope, YO.F, Fraction(3, 2), 1, YO.T)
    with pytest.raises(ValueError):
        conditional_max(yo13_polytope, YO.F, 3, 4, YO.T)


def test_conditional_max_monotone(yo13_polytope, kcbs_polytope):
    thr = [Fraction(1), Fraction(13, 12), Fraction(7, 6), Fraction(5, 4), Fraction(4, 3)]
    vals = [conditional_max(yo13_polytope, YO.F, a, Fraction(4, 3), YO.T)[0] for a in thr]
    assert vals == sorted(vals, reverse=True)
    thr = [Fraction(2), Fraction(21, 10), Fraction(17, 8), Fraction(161, 72)]
    vals = [conditional_max(kcbs_polytope, KC.F, a, Fraction(161, 72), KC.T)[0] for a in thr]
    assert vals == sorted(vals, reverse=True)


def test_kcbs_samples_on_line(kcbs_polytope):
    for a in (Fraction(2), Fraction(17, 8), Fraction(161, 72)):
        val = conditional_max(kcbs_polytope, KC.F, a, Fraction(161, 72), KC.T)[0]
        assert val == (17 - 6 * a) / 5


@pytest.mark.parametrize("k", [Fraction(2), Fraction(5, 7)])
def test_conditional_max_scaling(yo13_polytope, k):
    base, wit = conditional_max(yo13_polytope, YO.F, Fraction(7, 6), Fraction(4, 3), YO.T)
    scaled, wit2 = conditional_max(yo13_polytope, YO.F, Fraction(7, 6), Fraction(4, 3), YO.T.scaled(k))
    assert scaled == k * base
    assert wit2 == wit


def test_fit_envelope():
    assert fit_linear_envelope([(1, 1), (Fraction(7, 6), Fraction(17, 18)), (Fraction(4, 3), Fraction(8, 9))]) == (
        Fraction(4, 3), Fraction(1, 3))
    assert fit_linear_envelope([(2, 1), (Fraction(17, 8), Fraction(17, 20)), (Fraction(161, 72), Fraction(43, 60))]) == (
        Fraction(17, 5), Fraction(6, 5))
    assert fit_linear_envelope([(0, 1), (1, 1), (2, 1)]) == (1, 0)


def test_fit_envelope_errors():
    with pytest.raises(EnvelopeError, match="above"):
        fit_linear_envelope([(0, 1), (1, 2), (2, 1)])
    with pytest.raises(EnvelopeError):
        fit_linear_envelope([(0, 1), (1, 1)])
    with pytest.raises(EnvelopeError):
        fit_linear_envelope([(0, 1), (0, 1), (2, 1)])


def test_fit_envelope_accepts_points_below():
    alpha, beta = fit_linear_envelope([(0, 1), (1, 0), (2, 0)])
    assert (alpha, beta) == (1, Fraction(1, 2))


def test_measure_lower_bound():
    assert measure_lower_bound(Fraction(4, 3), Fraction(7, 6), Fraction(8, 3)) == pytest.approx(1 / 9, abs=1e-15)
    assert measure_lower_bound(2, 2, 3) == 0
    assert measure_lower_bound(S5, 2, 2.5) == pytest.approx(2 * S5 - 4, abs=1e-12)
    with pytest.raises(BoundError):
        measure_lower_bound(1, 2, 2)


def yo13_spec(yo13_polytope, **kw):
    return make_onci_spec(yo13_polytope, YO.F, YO.F_value, YO.c, YO.T, **kw)


def test_spec_defaults(yo13_polytope, kcbs_polytope):
    spec = yo13_spec(yo13_polytope)
    assert (spec.r, spec.lower, spec.slice_upper) == (Fraction(8, 3), 1, Fraction(4, 3))
    assert spec.samples == (1, Fraction(7, 6), Fraction(4, 3))
    kspec = make_onci_spec(kcbs_polytope, KC.F, KC.F_value, KC.c, KC.T)
    assert kspec.samples == (2, Fraction(17, 8), Fraction(161, 72))
    assert kspec.r == Fraction(5, 2) and kspec.c == Fraction(1, 3)
    assert yo13_spec(yo13_polytope, slice_limit="r").slice_upper == Fraction(8, 3)
    with pytest.raises(BoundError):
        yo13_spec(yo13_polytope, slice_limit="x")


def test_yo13_onci(yo13_polytope):
    rep = derive_onci_bound(yo13_spec(yo13_polytope))
    assert (rep.alpha, rep.beta, rep.p) == (Fraction(4, 3), Fraction(1, 3), 1)
    assert rep.collinear
    assert rep.bound == pytest.approx(4 * S5 / 9, abs=1e-12)
    assert rep.a_star == pytest.approx((8 - 2 * S5) / 3, abs=1e-12)
    assert rep.numeric_a_star == pytest.approx(rep.a_star, abs=1e-6)


def test_kcbs_onci(kcbs_polytope):
    rep = derive_onci_bound(make_onci_spec(kcbs_polytope, KC.F, KC.F_value, KC.c, KC.T))
    assert (rep.alpha, rep.beta, rep.p) == (Fraction(17, 5), Fraction(6, 5), 2)
    a = rep.a_star
    assert a == pytest.approx(2.5 - math.sqrt((5 - 2 * S5) / 4), abs=1e-12)
    assert a == pytest.approx((5 - math.sqrt(5 - 2 * S5)) / 2, abs=1e-12)
    assert rep.bound == pytest.approx(1 - 0.4 * (a - 2) * (S5 - a) / (2.5 - a), abs=1e-12)
    assert rep.bound == pytest.approx(1 + 0.4 * (S5 + math.sqrt(5 - 2 * S5) - 3), abs=1e-12)
    assert abs(rep.bound - 0.985) < 1e-4
    assert any("161/72" in n for n in rep.notes)


def test_onci_matches_grid_search(yo13_polytope, kcbs_polytope):
    for spec in (yo13_spec(yo13_polytope), make_onci_spec(kcbs_polytope, KC.F, KC.F_value, KC.c, KC.T)):
        rep = derive_onci_bound(spec)
        best, _ = grid_minimum(rep.B, float(rep.p), float(spec.v), steps=20001)
        assert rep.bound <= best + 1e-12
        assert best - rep.bound < 1e-8
        # every sampled threshold certifies a bound no better than the optimum
        for a, _, _ in rep.samples:
            if float(rep.p) <= float(a) <= float(spec.v):
                assert rep.B(float(a)) >= rep.bound


def test_slice_limit_r_same_bound(yo13_polytope):
    a = derive_onci_bound(yo13_spec(yo13_polytope))
    b = derive_onci_bound(yo13_spec(yo13_polytope, slice_limit="r"))
    assert a.bound == b.bound


def test_degenerate_spec(yo13_polytope):
    # operational value at the envelope root: no violation region
    spec = yo13_spec(yo13_polytope)
    spec = OnciSpec(spec.polytope, spec.F, Scalar(Fraction(9, 8)), spec.r, spec.c,
                    spec.T, spec.lower, (Fraction(1), Fraction(17, 16), Fraction(9, 8)), Fraction(9, 8))
    rep = derive_onci_bound(spec)
    assert rep.bound < 1
    flat = OnciSpec(spec.polytope, spec.F, Scalar(Fraction(9, 8)), spec.r, spec.c,
                    Functional(constant=1), spec.lower, spec.samples, spec.slice_upper)
    rep = derive_onci_bound(flat)
    assert rep.bound == 1


def test_degenerate_v_equals_p():
    # envelope 2 - a  => p = 1 = lower = v... built directly on a tiny polytope
    g = build_graph(["x", "y"], [("x", "y")])
    p = build_polytope(g, [("x", "y")], 3)
    spec = OnciSpec(p, linear_sum("x"), Scalar(Fraction(1)), Fraction(1), Fraction(1),
                    Functional(constant=1), Fraction(0), (Fraction(0), Fraction(1, 2), Fraction(1)), Fraction(1))
    rep = derive_onci_bound(spec)
    assert rep.bound == 1


def test_spec_invariants(yo13_polytope):
    spec = yo13_spec(yo13_polytope)
    with pytest.raises(BoundError):
        OnciSpec(spec.polytope, spec.F, spec.v, spec.r, Fraction(0), spec.T, spec.lower, spec.samples, spec.slice_upper)
    with pytest.raises(BoundError):
        OnciSpec(spec.polytope, spec.F, parse_scalar("3"), spec.r, spec.c, spec.T, spec.lower, spec.samples, spec.slice_upper)
    with pytest.raises(BoundError):
        OnciSpec(spec.polytope, spec.F, spec.v, spec.r, spec.c, eta_sum([("1", "2")], -1), spec.lower,
                 spec.samples, spec.slice_upper)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.0, 4 / 3), st.floats(0.05, 1.0))
def test_bound_is_certificate(a, c):
    """Closed-form optimum never exceeds B(a) at any admissible threshold."""
    beta, p, v, r = 1 / 3, 1.0, 4 / 3, 8 / 3
    B = lambda x: 1 - c * beta * (x - p) * (v - x) / (r - x)  # noqa: E731
    a_star = r - math.sqrt((r - p) * (r - v))
    assert B(a_star) <= B(a) + 1e-15


@pytest.mark.parametrize("n, expected", [(4, 5), (5, 5), (6, 6), (7, 6), (8, 7), (9, 7), (10, 8), (11, 8)])
def test_ncycle_aprime(n, expected):
    assert ncycle_aprime_bound(n) == expected


def test_ncycle_small():
    with pytest.raises(BoundError):
        ncycle_aprime_bound(3)


def test_builtin_functionals():
    assert dict(YO.I.linear) == {**{str(i): 2 for i in range(1, 10)}, **dict.fromkeys("ABCD", 1)}
    assert [YO.contexts[i - 1] for i in YO.a_contexts] == [("1", "4", "7"), ("2", "5", "8"), ("3", "6", "9")]
    assert [YO.contexts[i - 1][k - 1] for i, k in YO.F_positions] == list("ABCD")
    assert YO.F_value == Scalar(Fraction(4, 3))
    cyc = builtin_functionals("cycle(7)")
    assert dict(cyc.I.linear) == {str(i): 1 for i in range(1, 8)}
    assert cyc.contexts[6] == ("7", "1", "7'")
    assert KC.contexts[4] == ("5", "1", "E")
    with pytest.raises(BoundError):
        builtin_functionals("nope")
