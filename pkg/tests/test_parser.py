import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quadreg import FieldSpec, Frame, PolyRing
from quadreg.parser import MAX_EXPONENT, ParseError, parse_expr, parse_lines, parse_poly
from quadreg.poly import format_poly
from strategies import polys, random_expression, rings

R22 = PolyRing(Frame(2, 2))


def x(s, t, ring=R22):
    return ring.var(s, t)


def test_examples():
    assert parse_poly("x[1,1]^2 + x[2,1]^2", R22) == x(1, 1) ** 2 + x(2, 1) ** 2
    assert parse_poly("0", R22).is_zero()
    assert parse_poly("(x[1,1]+x[1,2])^2", R22) == x(1, 1) ** 2 + x(1, 1) * x(1, 2).scale(2) + x(1, 2) ** 2
    assert parse_poly("-x[1,1] - -x[2,2]", R22) == x(2, 2) - x(1, 1)
    assert parse_poly("3/4*x[1,2]", R22) == x(1, 2).scale(R22.field(Fraction(3, 4)))
    assert parse_poly(" 2 * x[ 2 , 1 ]\n", R22) == x(2, 1).scale(2)


def test_precedence():
    assert parse_poly("2*x[1,1]^2", R22) == (x(1, 1) ** 2).scale(2)
    assert parse_poly("-x[1,1]^2", R22) == -(x(1, 1) ** 2)
    assert parse_poly("1 - x[1,1] + x[1,2]", R22) == R22.one() - x(1, 1) + x(1, 2)


def test_coefficients_reduce_mod_p():
    R = PolyRing(Frame(1, 1), FieldSpec(7))
    assert parse_poly("8*x[1,1]", R) == R.var(1, 1)
    assert parse_poly("1/2", R) == R.constant(4)
    with pytest.raises(ZeroDivisionError):
        parse_poly("1/7", R)


@pytest.mark.parametrize(
    "src,col,fragment",
    [
        ("x[1,1] +", 9, "end of input"),
        ("2x[1,1]", 2, "juxtaposition"),
        ("x[1,1] x[1,2]", 8, "juxtaposition"),
        ("x[1 1]", 5, "expected ','"),
        ("x[1,1]^^2", 8, "expected 'int'"),
        ("y[1,1]", 1, "unexpected character"),
        ("(x[1,1]", 8, "expected ')'"),
        ("x[3,1]", 1, "outside the frame"),
        ("1/0", 3, "division by zero"),
        (f"x[1,1]^{MAX_EXPONENT + 1}", 8, "exceeds the limit"),
    ],
)
def test_errors_carry_positions(src, col, fragment):
    with pytest.raises(ParseError) as info:
        parse_poly(src, R22)
    assert info.value.line == 1 and info.value.col == col
    assert fragment in str(info.value)


def test_multiline_input():
    text = "# header\nx[1,1]^2\n\n  x[1,2] # trailing\n"
    assert parse_lines(text, R22) == [x(1, 1) ** 2, x(1, 2)]
    with pytest.raises(ParseError) as info:
        parse_lines("x[1,1]\nx[1,1] +* 2\n", R22)
    assert (info.value.line, info.value.col) == (2, 9)


def test_long_sums_do_not_recurse():
    R = PolyRing(Frame(1, 1))
    src = " + ".join(["x[1,1]"] * 5000)
    assert parse_poly(src, R) == R.var(1, 1).scale(5000)


@given(st.data())
def test_format_parse_round_trip(data):
    R = data.draw(rings(max_n=3, max_m=2))
    p = data.draw(polys(R, max_terms=6, max_deg=4))
    assert parse_poly(format_poly(p), R) == p


def test_random_expressions_fuzz():
    rng = random.Random(20240)
    rings_ = [PolyRing(Frame(2, 2)), PolyRing(Frame(3, 1), FieldSpec(7)), PolyRing(Frame(1, 3), FieldSpec(32003))]
    for k in range(10_000):
        ring = rings_[k % 3]
        text, expected = random_expression(rng, ring)
        got = parse_poly(text, ring)
        assert got == expected, text
        assert parse_poly(format_poly(got), ring) == got


def test_garbage_never_crashes():
    rng = random.Random(5)
    alphabet = "x[]0123,+-*/^() 9"
    for _ in range(5000):
        src = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 15)))
        try:
            parse_poly(src, R22)
        except (ParseError, ZeroDivisionError):
            pass


def test_ast_shape():
    tree = parse_expr("x[1,2]*2 - 1")
    assert type(tree).__name__ == "Sub"
    assert type(tree.left).__name__ == "Mul"
