from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, strategies as st

from strichartz_gap.exactnum import (
    RatPoly,
    central_binomial,
    exp_moment_integrate,
    exp_moment_integrate_weighted,
    factorial,
    mat_mul,
    parse_rational,
    render_rational,
)

fractions = st.fractions(max_denominator=10**6).filter(lambda f: abs(f) < 10**6)
polys = st.lists(fractions, max_size=8).map(RatPoly)


def pascal_row(n):
    row = [1]
    for _ in range(n):
        row = [1] + [a + b for a, b in zip(row, row[1:])] + [1]
    return row


@pytest.mark.parametrize("k, expected", [(0, 1), (5, 120), (20, prod(range(1, 21)))])
def test_factorial(k, expected):
    assert factorial(k) == expected


def test_factorial_20_literal():
    assert factorial(20) == 2432902008176640000


def test_factorial_rejects_negative():
    with pytest.raises(ValueError):
        factorial(-1)


@pytest.mark.parametrize("p", [0, 1, 5, 13])
def test_central_binomial_against_pascal(p):
    assert central_binomial(p) == pascal_row(2 * p)[p]


def test_central_binomial_examples():
    assert [central_binomial(p) for p in (0, 1, 5)] == [1, 2, 252]


def test_exp_moment_examples():
    assert exp_moment_integrate(RatPoly([1])) == 1
    assert exp_moment_integrate(RatPoly.monomial(2)) == 2
    # (1 - x/2)^4 = 1 - 2x + 3/2 x^2 - 1/2 x^3 + 1/16 x^4 -> 1 - 2 + 3 - 3 + 3/2
    quartic = RatPoly([1, Fraction(-1, 2)]) ** 4
    assert quartic == RatPoly([1, -2, Fraction(3, 2), Fraction(-1, 2), Fraction(1, 16)])
    assert exp_moment_integrate(quartic) == Fraction(1, 2)


def test_exp_moment_weighted_examples():
    assert exp_moment_integrate_weighted(RatPoly([1]), 1) == 1
    assert exp_moment_integrate_weighted(RatPoly.x(), 0) == 1
    assert exp_moment_integrate_weighted(RatPoly.x(), 1) == 2
    with pytest.raises(ValueError):
        exp_moment_integrate_weighted(RatPoly.x(), -1)


@pytest.mark.parametrize("k", range(31))
def test_monomial_moments_are_factorials(k):
    assert exp_moment_integrate(RatPoly.monomial(k)) == factorial(k)


@given(polys, polys)
def test_moment_integration_is_additive(p, q):
    assert exp_moment_integrate(p + q) == exp_moment_integrate(p) + exp_moment_integrate(q)


@given(polys, polys)
def test_degree_of_product(p, q):
    if not p.is_zero() and not q.is_zero():
        assert (p * q).degree == p.degree + q.degree


@given(polys, fractions)
def test_synthetic_division_reconstructs(p, r):
    q, rem = p.divmod_linear(r)
    assert q * RatPoly([-r, 1]) + rem == p
    assert rem == p(r)


@given(fractions)
def test_render_parse_roundtrip(r):
    text = render_rational(r)
    assert "/" in text and parse_rational(text) == r
    assert not text.split("/")[1].startswith("-")


def test_render_sign_on_numerator():
    assert render_rational(Fraction(-3, 6)) == "-1/2"
    assert render_rational(2) == "2/1"
    assert parse_rational("7") == 7


@given(st.lists(fractions, min_size=2, max_size=6))
def test_addition_order_independent(xs):
    assert sum(xs, Fraction(0)) == sum(reversed(xs), Fraction(0))


def test_scale_arg_and_eval():
    p = RatPoly([1, -1, Fraction(1, 2)])
    assert p.scale_arg(Fraction(1, 2)) == RatPoly([1, Fraction(-1, 2), Fraction(1, 8)])
    assert p(2) == 1 - 2 + 2


def test_render():
    assert RatPoly([1, Fraction(-1, 2)]).render() == "1/1 + -1/2*x"
    assert RatPoly().render() == "0"


def test_mat_mul_small():
    a = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
    assert mat_mul(a, a) == [[7, 10], [15, 22]]
