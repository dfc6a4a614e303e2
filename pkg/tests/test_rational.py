from fractions import Fraction

import pytest

from hypervc.rational import format_rational, parse_rational


def test_parse_fraction_and_integer():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational("7") == Fraction(7)
    assert parse_rational(7) == Fraction(7)
    assert parse_rational(" 2/6 ") == Fraction(1, 3)


@pytest.mark.parametrize("bad", ["0.5", "1e3", "1E3", "3/0", "a/b", "", "1/2/3"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_canonical():
    assert format_rational(Fraction(3, 4)) == "3/4"
    assert format_rational(Fraction(8, 4)) == "2"
    assert format_rational(5) == "5"
    assert format_rational(Fraction(-1, 2)) == "-1/2"


def test_round_trip():
    for q in [Fraction(0), Fraction(22, 7), Fraction(-5, 3), Fraction(10)]:
        assert parse_rational(format_rational(q)) == q
