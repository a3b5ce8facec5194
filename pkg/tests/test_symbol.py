import math
from fractions import Fraction

import numpy as np
import pytest

from ncstar.errors import ParseError, PolynomialError
from ncstar.symbol.expr import (
    BinOp,
    Exp,
    Neg,
    Num,
    Pow,
    Var,
    compose_linear,
    differentiate,
    evaluate,
    max_index,
    to_text,
)
from ncstar.symbol.parser import parse, tokenize
from ncstar.symbol.poly import (
    PolySymbol,
    from_poly,
    gaussian,
    monomial_text,
    poly_to_terms,
    rationalize,
    to_poly,
)


@pytest.mark.parametrize(
    "text",
    [
        "x1*p1 + 3/2*x2^3",
        "x1 - (p1 - x2)",
        "exp(-x1^2)*p2",
        "x1 / 2",
        "(x1 + p1)^2",
    ],
)
def test_to_text_round_trip(text):
    e = parse(text, 2)
    assert parse(to_text(e), 2) == e


def test_precedence():
    assert parse("-x1^2", 1) == Neg(Pow(Var("x", 1), 2))
    assert parse("x1 - p1 - 1", 1) == BinOp("-", BinOp("-", Var("x", 1), Var("p", 1)), Num(Fraction(1)))
    assert evaluate(parse("2*x1 - p1 - 1", 1), [1.0, 1.0]) == 0.0
    assert evaluate(parse("-x1^2", 1), [3.0, 0.0]) == -9.0


def test_number_literals():
    assert parse("3/4", 1) == Num(Fraction(3, 4))
    assert parse("0.25", 1) == Num(Fraction(1, 4))
    assert [t.kind for t in tokenize("x1*2.5")] == ["ident", "op", "number", "end"]


@pytest.mark.parametrize("text, expected", [("x1^2/2", 4.5), ("x1^3/4", 6.75), ("-x1^2/2*p1", -9.0)])
def test_power_then_division(text, expected):
    e = parse(text, 1)
    assert isinstance(e, (BinOp, Neg))
    assert evaluate(e, [3.0, 2.0]) == pytest.approx(expected)
    assert [t.text for t in tokenize("x1^2/2")] == ["x1", "^", "2", "/", "2", ""]


@pytest.mark.parametrize(
    "text, column",
    [
        ("x1 + $", 6),
        ("x1 + y2", 6),
        ("x3", 1),
        ("x1 / p1", 4),
        ("(x1", 4),
        ("", 1),
    ],
)
def test_parse_error_column(text, column):
    with pytest.raises(ParseError) as info:
        parse(text, 2)
    assert info.value.column == column


def test_exponent_must_be_uint():
    with pytest.raises(ParseError):
        parse("x1^p1", 1)
    with pytest.raises(ParseError):
        parse("x1^1.5", 1)


def test_division_by_zero_literal():
    with pytest.raises(ParseError):
        parse("x1 / 0", 1)
    with pytest.raises(ParseError):
        parse("1/0", 1)


def test_max_index():
    assert max_index(parse("x1*p2 + 1", 2)) == 2
    assert max_index(parse("3", 2)) == 0


def test_evaluate_on_arrays():
    e = parse("x1*p1 + 1", 1)
    x = np.array([0.0, 1.0, 2.0])
    p = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(evaluate(e, [x, p]), x * p + 1)


def test_differentiate_chain_rule():
    e = parse("exp(x1^2)", 1)
    d = differentiate(e, "x1")
    assert evaluate(d, [1.0, 0.0]) == pytest.approx(2 * math.e)
    assert evaluate(differentiate(e, "p1"), [1.0, 0.0]) == 0


def test_differentiate_product():
    d = differentiate(parse("x1^3*p1", 1), Var("x", 1))
    assert evaluate(d, [2.0, 5.0]) == pytest.approx(3 * 4 * 5)


def test_compose_linear():
    e = parse("x1 + p1^2", 1)
    composed = compose_linear(e, [[2, 0], [1, 1]])
    # x1 → 2x1, p1 → x1 + p1
    assert evaluate(composed, [1.0, 2.0]) == pytest.approx(2 + 9)
    assert isinstance(compose_linear(parse("exp(x1)", 1), np.eye(2)), Exp)


def test_to_poly_expands():
    p = to_poly(parse("(x1 + p1)^2", 1), 1)
    assert p.exact
    assert p.coefficient((1, 1)) == gaussian(2)
    assert p.coefficient((2, 0)) == gaussian(1)
    assert p.degree == 2


def test_to_poly_division():
    p = to_poly(parse("x1 / 4 - p1 / -2", 1), 1)
    assert p.coefficient((1, 0)) == gaussian(Fraction(1, 4))
    assert p.coefficient((0, 1)) == gaussian(Fraction(1, 2))


def test_to_poly_rejects_exp():
    with pytest.raises(PolynomialError):
        to_poly(parse("x1*exp(p1)", 1), 1)


def test_float_literal_is_inexact():
    p = to_poly(BinOp("*", Num(0.5), Var("x", 1)), 1)
    assert not p.exact
    assert p.coefficient((1, 0)) == 0.5


def test_rationalize_uses_decimal_repr():
    assert rationalize(0.1) == Fraction(1, 10)
    assert rationalize(3) == Fraction(3)


def test_poly_arithmetic():
    x = PolySymbol.variable(2, 0)
    p = PolySymbol.variable(2, 1)
    assert (x + p) * (x - p) == x * x - p * p
    assert (x**2).derivative(0) == x.scale(2)
    assert (x * x * p).partial((2, 1)) == PolySymbol.constant(2, 2)
    assert (x - x).is_zero


def test_poly_evaluate():
    p = to_poly(parse("x1^2*p1 + 1/2", 1), 1)
    assert p.evaluate([2.0, 3.0]) == pytest.approx(12.5)
    assert p.evaluate_exact([2, 3]) == gaussian(Fraction(25, 2))


def test_monomial_text():
    assert monomial_text((2, 0, 1, 0)) == "x1^2*p1"
    assert monomial_text((0, 0, 0, 0)) == "const"


def test_poly_to_terms():
    p = to_poly(parse("x1*x2 + 1/4", 2), 2)
    assert poly_to_terms(p) == {
        "const": {"re": "1/4", "im": "0"},
        "x1*x2": {"re": "1", "im": "0"},
    }


def test_from_poly_round_trip():
    p = to_poly(parse("x1^2 - 3*x1*p1 + 2/3", 1), 1)
    assert to_poly(from_poly(p), 1) == p
