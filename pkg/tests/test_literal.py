from fractions import Fraction

import pytest

from wavecoh.literal import LiteralSyntaxError, parse_rational
from wavecoh.poly import Polynomial

P = Polynomial((-1, 1))  # stand-in wave polynomial x - 1


def expanded(text, p=P):
    return parse_rational(text).expand(p)


def test_polynomial_literal():
    num, den, m = expanded("x^2 - 3*x + 1/2")
    assert num * Polynomial((2,)) == Polynomial((1, -6, 2)) * den and m == 0


def test_inverse_p_squared():
    num, den, m = expanded("1/p^2")
    assert (num, den, m) == (Polynomial((1,)), Polynomial((1,)), 2)


def test_mixed_p_numerator():
    num, den, m = expanded("(p + x)/p^2")
    assert m == 2 and num == P + Polynomial((0, 1)) and den == Polynomial((1,))


def test_plain_denominator():
    num, den, m = expanded("1/(x^2 + 1)")
    assert num == Polynomial((1,)) and den == Polynomial((1, 0, 1)) and m == 0


def test_unary_minus_and_nesting():
    num, den, m = expanded("-(x - -2)*3")
    assert num == Polynomial((-6, -3)) and den == Polynomial((1,))


def test_p_without_polynomial():
    with pytest.raises(LiteralSyntaxError):
        parse_rational("1/p").expand(None)
    assert not parse_rational("x/2").uses_p
    num, den, _ = parse_rational("x/2").expand(None)
    assert num * Polynomial((Fraction(2),)) == Polynomial((0, 1)) * den


@pytest.mark.parametrize("bad", ["2x", "x^", "1/(p+1)", "x**2", "(x", "", "x $ 1", "1/0"])
def test_syntax_errors(bad):
    with pytest.raises(LiteralSyntaxError):
        parse_rational(bad)
