import pytest

from traffic_stl.exceptions import ParseError
from traffic_stl.stl import (
    FULL,
    Always,
    And,
    Eventually,
    Implies,
    Interval,
    Mask,
    Not,
    Or,
    Until,
    atom,
    parse,
    to_text,
)


def test_always_defaults_to_whole_trace():
    assert parse("always (speed <= 31)") == Always(atom("speed", "<=", 31), FULL)


def test_headway_shape():
    f = parse("always[0,5] (h >= 4 or (h < 4 => eventually[0,2] h >= 4))")
    assert f == Always(
        Or(atom("h", ">=", 4), Implies(atom("h", "<", 4), Eventually(atom("h", ">=", 4), Interval(0, 2)))),
        Interval(0, 5),
    )


def test_dangling_comparison_reports_position():
    with pytest.raises(ParseError) as info:
        parse("eventually speed <")
    assert info.value.position == 18
    assert "position 18" in str(info.value)


@pytest.mark.parametrize(
    "text",
    ["", "   ", "speed", "speed > ", "always[5,1] x > 0", "always[0,] x > 0", "(x > 0", "x > 0)",
     "x > 0 and", "x >> 0", "x > 0 until y > 0", "not", "always[0,end x > 0", "3 > x", "x > 0 unless"],
)
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse(text)


def test_precedence_and_binds_tighter_than_or():
    a, b, c = (atom(n, ">", 0) for n in "abc")
    assert parse("a > 0 or b > 0 and c > 0") == Or(a, And(b, c))


def test_implication_is_loosest_and_right_associative():
    a, b, c = (atom(n, ">", 0) for n in "abc")
    assert parse("a > 0 => b > 0 => c > 0") == Implies(a, Implies(b, c))
    assert parse("a > 0 or b > 0 => c > 0") == Implies(Or(a, b), c)


def test_unary_binds_tightest():
    a, b = atom("a", ">", 0), atom("b", ">", 0)
    assert parse("not a > 0 and b > 0") == And(Not(a), b)
    assert parse("always a > 0 or b > 0") == Or(Always(a), b)


def test_until_requires_parentheses():
    a, b = atom("a", ">", 0), atom("b", ">", 0)
    assert parse("(a > 0 until[1,end] b > 0)") == Until(a, b, Interval(1, None))
    assert parse("(a > 0 until b > 0)") == Until(a, b, FULL)


def test_masked_atom():
    f = parse("headway >= 4 unless headway < 0")
    assert f == atom("headway", ">=", 4, Mask("headway", "<", 0))


def test_numbers():
    assert parse("x > -1.5e-1") == atom("x", ">", -0.15)
    assert parse("x < +2") == atom("x", "<", 2)


def test_pretty_printer_drops_trailing_zero():
    assert to_text(parse("always[0,5.0] x >= 4.0")) == "always[0,5] x >= 4"


def test_operator_sugar():
    a, b = atom("a", ">", 0), atom("b", ">", 0)
    assert (a & b) == And(a, b)
    assert (a | b) == Or(a, b)
    assert ~a == Not(a)


def test_round_trip_nested():
    text = "always ((a > 1 or b > 2) => (c > 3 and eventually[0,1] (d > 4 until[0,2] e < 5)))"
    f = parse(text)
    assert parse(to_text(f)) == f
