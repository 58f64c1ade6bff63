from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from laurent_inversion.polynomial import (DimensionMismatch, LaurentPolynomial, NotDivisible,
                                          ParseError, classical_period, constant_term,
                                          dumps_records, exact_divide, format_polynomial,
                                          loads_records, monomial_change, mul, parse,
                                          parse_with_variables, shifted_period_term)

from worked_examples import CUBIC, FOURFOLD, FOURFOLD_PERIOD, HEXAGON

V2 = ["x", "y"]


def polys(dim=2, max_terms=5, lo=-2, hi=2):
    exps = st.tuples(*[st.integers(lo, hi)] * dim)
    return st.dictionaries(exps, st.integers(-4, 4), max_size=max_terms).map(
        lambda d: LaurentPolynomial(d, dim))


def unimodular(n):
    """Random unimodular matrices as products of elementary matrices."""
    ops = st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-2, 2),
                             st.booleans()), max_size=6)

    def build(seq):
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for i, j, k, swap in seq:
            if swap:
                m[i], m[j] = m[j], m[i]
            elif i != j:
                m[i] = [a + k * b for a, b in zip(m[i], m[j])]
        return m
    return ops.map(build)


# -- parsing ------------------------------------------------------------------


def test_parse_hexagon():
    f = parse(HEXAGON)
    assert f.dim == 2 and len(f) == 6


def test_parse_zero():
    f = parse("0")
    assert f.is_zero() and len(f) == 0


def test_parse_expanded_cube():
    f = parse(CUBIC)
    assert len(f) == 10
    assert f.constant_term() == 6


@pytest.mark.parametrize("text, expected", [
    ("x*y/x", {(0, 1): 1}),
    ("x^-2 + x^2", {(-2, 0): 1, (2, 0): 1}),
    ("1/x*y", {(-1, -1): 1}),
    ("1/(x*y)", {(-1, -1): 1}),
    ("(1+y)/x", {(-1, 0): 1, (-1, 1): 1}),
    ("2*x - 2*x", {}),
    ("-(x - y)", {(1, 0): -1, (0, 1): 1}),
    ("x/y^2", {(1, -2): 1}),
])
def test_parse_forms(text, expected):
    assert dict(parse(text, V2).items()) == expected


def test_parse_header_fixes_order():
    f, names = parse_with_variables("vars: y,x; x + 2*y")
    assert names == ["y", "x"]
    assert f.coefficient((1, 0)) == 2


def test_first_appearance_order():
    _, names = parse_with_variables("(1+x)^2/(x*y*w) + z")
    assert names == ["x", "y", "w", "z"]


@pytest.mark.parametrize("text", ["x +", "(x", "x/(1+x)", "x/2", "x^y", "", "x $ y", "vars: x; y"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse("x + + y")
    assert exc.value.pos is not None


@given(polys())
def test_format_roundtrip(f):
    assert parse(format_polynomial(f, V2), V2) == f


@given(polys(dim=3))
def test_records_roundtrip(f):
    assert loads_records(dumps_records(f), 3) == f


# -- arithmetic ---------------------------------------------------------------


def test_mul_examples():
    x = parse("x", ["x"])
    assert mul(x, parse("1/x", ["x"])) == 1
    assert mul(parse("1+x"), parse("1+x")) == parse("1 + 2*x + x^2")
    f = parse(HEXAGON)
    assert constant_term(mul(f, f)) == 6


def test_mul_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mul(parse("x"), parse("x*y"))


@pytest.mark.parametrize("text, c", [("x + 1/x", 0), (CUBIC, 6), ("7", 7)])
def test_constant_term(text, c):
    assert constant_term(parse(text)) == c


@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0


@given(polys(max_terms=3), st.integers(0, 4))
def test_pow_is_repeated_mul(f, d):
    expected = LaurentPolynomial.constant(1, 2)
    for _ in range(d):
        expected = expected * f
    assert f ** d == expected


@given(polys(max_terms=4), polys(max_terms=3))
def test_exact_division_recovers_factor(q, h):
    if h.is_zero():
        return
    assert exact_divide(q * h, h) == q


def test_exact_division_refuses():
    with pytest.raises(NotDivisible):
        exact_divide(parse("1 + y^2", V2), parse("1 + y", V2))


def test_monomial_powers():
    x = parse("x", ["x"])
    assert x ** -2 == parse("1/x^2", ["x"])
    with pytest.raises(NotDivisible):
        parse("1+x") ** -1


# -- periods ------------------------------------------------------------------


def test_fourfold_period():
    assert classical_period(parse(FOURFOLD), 9) == FOURFOLD_PERIOD


def test_monomial_has_no_period():
    assert classical_period(parse("x"), 3) == [1, 0, 0, 0]


@pytest.mark.parametrize("d", range(11))
def test_cubic_closed_form(d):
    assert classical_period(parse(CUBIC), d, prune=True)[d] == factorial(3 * d) // factorial(d) ** 3


@pytest.mark.parametrize("text", [CUBIC, HEXAGON, FOURFOLD, "x + y + 1/(x*y) + 3", "x + 1/x"])
def test_pruned_equals_naive(text):
    f = parse(text)
    assert classical_period(f, 7, prune=True) == classical_period(f, 7)


def test_period_of_zero_and_constant():
    assert classical_period(parse("0", ["x"]), 3) == [1, 0, 0, 0]
    assert classical_period(parse("2", ["x"]), 3) == [1, 2, 4, 8]


@settings(max_examples=40, deadline=None)
@given(polys(max_terms=4, lo=-1, hi=1), unimodular(2), st.tuples(st.just(0), st.just(0)))
def test_period_invariant_under_monomial_change(f, u, shift):
    assert classical_period(monomial_change(f, u, shift), 6) == classical_period(f, 6)


@settings(max_examples=30, deadline=None)
@given(polys(max_terms=4, lo=-1, hi=1), st.integers(-3, 3), st.integers(0, 6))
def test_constant_shift_binomial(f, c, d):
    direct = classical_period(f + c, d)[d]
    assert direct == sum(comb(d, j) * c ** j * classical_period(f, d)[d - j] for j in range(d + 1))
    assert shifted_period_term(f, c, d) == direct


# -- monomial changes ---------------------------------------------------------


def test_monomial_change_identity():
    f = parse(HEXAGON)
    assert monomial_change(f, [[1, 0], [0, 1]], (0, 0)) == f


def test_monomial_change_swap_symmetric():
    assert monomial_change(parse("x + y"), [[0, 1], [1, 0]], (0, 0)) == parse("x + y")
    f = parse(HEXAGON)
    assert monomial_change(f, [[0, 1], [1, 0]], (0, 0)) == f


def test_monomial_change_shift():
    assert monomial_change(parse("x", V2), [[1, 0], [0, 1]], (0, 1)) == parse("x*y", V2)


def test_monomial_change_rejects_singular():
    with pytest.raises(ValueError):
        monomial_change(parse(HEXAGON), [[2, 0], [0, 1]], (0, 0))
