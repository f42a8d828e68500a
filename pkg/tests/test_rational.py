import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from onci.rational import Q, Scalar, fmt, parse_scalar, rank, rref, solve, sqrt_upper_convergent

fractions = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


def test_coercion():
    assert Q("8/3") == Fraction(8, 3)
    assert Q(3) == Fraction(3)
    assert Q(" -4/6 ") == Fraction(-2, 3)
    with pytest.raises(TypeError):
        Q(0.5)
    with pytest.raises(ValueError):
        Q("eight")


@given(fractions)
def test_fmt_round_trip(x):
    assert Q(fmt(x)) == x
    assert fmt(Fraction(0)) == "0"


def test_fmt_reduced():
    assert fmt(Fraction(34, 36)) == "17/18"
    assert fmt(Fraction(-6, 3)) == "-2"


@given(st.lists(st.lists(fractions, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_matches_sympy(rows):
    assert rank(rows) == sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in rows]).rank()


def test_rref_pivots():
    red, piv = rref([[1, 1, 0], [2, 2, 1]])
    assert piv == [0, 2]
    assert red == [[1, 1, 0], [0, 0, 1]]


def test_solve():
    assert solve([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert solve([[1, 1], [2, 2]], [1, 2]) is None


def test_sqrt5_convergent():
    r = sqrt_upper_convergent(5)
    assert r == Fraction(161, 72)
    assert r * r > 5
    # the previous upper convergent 9/4 misses the 1e-4 tolerance
    assert Fraction(9, 4) - Fraction(161, 72) > Fraction(1, 10**4)
    assert float(r) - math.sqrt(5) < 1e-4


def test_sqrt_perfect_square():
    assert sqrt_upper_convergent(9) == 3


@pytest.mark.parametrize("k", [2, 3, 5, 7, 10, 13])
def test_convergent_is_upper(k):
    r = sqrt_upper_convergent(k)
    assert r * r >= k
    assert float(r) - math.sqrt(k) <= 1e-4


@pytest.mark.parametrize(
    "text, coeff, radicand",
    [
        ("4/3", Fraction(4, 3), 1),
        ("sqrt(5)", Fraction(1), 5),
        ("4/9*sqrt(5)", Fraction(4, 9), 5),
        ("sqrt(5)/2", Fraction(1, 2), 5),
        ("sqrt(4)", Fraction(2), 1),
        ("0.9850", Fraction(197, 200), 1),
    ],
)
def test_parse_scalar(text, coeff, radicand):
    s = parse_scalar(text)
    assert (s.coeff, s.radicand) == (coeff, radicand)


def test_parse_scalar_rejects_other_surds():
    with pytest.raises(ValueError):
        parse_scalar("sqrt(5-2*sqrt(5))")
    with pytest.raises(ValueError):
        parse_scalar("cbrt(2)")


def test_scalar_behaviour():
    s = parse_scalar("sqrt(5)")
    assert not s.is_rational
    assert float(s) == pytest.approx(math.sqrt(5), abs=1e-15)
    assert s.upper_rational() == Fraction(161, 72)
    assert str(s) == "sqrt(5)"
    with pytest.raises(ValueError):
        s.rational()
    assert Scalar(Fraction(4, 3)).upper_rational() == Fraction(4, 3)
