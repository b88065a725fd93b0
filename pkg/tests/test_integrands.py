from fractions import Fraction

import pytest

from condmodel.errors import FormulaSyntaxError
from condmodel.integrands import (
    BinOp,
    Call,
    Coord,
    Power,
    dimension,
    evaluate,
    format_expr,
    parse_expr,
)


def test_parse_quadratic():
    expr = parse_expr("(x - 1)^2")
    assert expr == Power(BinOp("-", Coord(0), parse_expr("1")), 2)
    assert evaluate(expr, (Fraction(3),)) == 4


@pytest.mark.parametrize(
    "text,point,value",
    [
        ("x1 + 2 * x2", (1, 3), 7),
        ("-x^2", (3,), -9),
        ("abs(x - 1/3)", (0,), Fraction(1, 3)),
        ("min(x1, x2, 0.5)", (1, 2), Fraction(1, 2)),
        ("max(x1, x2) / 4", (1, 2), Fraction(1, 2)),
        ("2 - 3 - 4", (), -5),
    ],
)
def test_evaluate(text, point, value):
    assert evaluate(parse_expr(text), tuple(Fraction(c) for c in point)) == value


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        evaluate(parse_expr("1 / x"), (Fraction(0),))


def test_dimension():
    assert dimension(parse_expr("x1 + x3")) == 3
    assert dimension(parse_expr("7")) == 0
    assert dimension(parse_expr("min(x, x2)")) == 2


def test_format_round_trip_by_value():
    expr = parse_expr("max(x1, -x2)^3 - 1/2")
    again = parse_expr(format_expr(expr))
    point = (Fraction(2), Fraction(-5))
    assert evaluate(again, point) == evaluate(expr, point) == Fraction(249, 2)


@pytest.mark.parametrize(
    "text,col",
    [
        ("x +", 4),
        ("x ^ y", 5),
        ("foo(x)", 1),
        ("x0", 1),
        ("abs(x, x)", 1),
        ("x $ 1", 3),
        ("(x", 3),
    ],
)
def test_syntax_errors(text, col):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_expr(text)
    assert info.value.col == col


def test_call_node():
    assert parse_expr("abs(x)") == Call("abs", (Coord(0),))
