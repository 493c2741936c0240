from fractions import Fraction

import pytest
from hypothesis import given, settings

from dampedqm.opparser import (
    NegativeExponentError,
    ParseError,
    UnknownIdentifierError,
    parse_equation,
    parse_operator,
    tokenize,
)
from dampedqm.weyl_algebra import I, OperatorPoly, RationalComplex, SymbolicParams, generators

from conftest import polys

y, p = generators(1)


def test_canonical_commutator():
    assert parse_operator("y*p - p*y") == OperatorPoly.constant(I)


def test_commutator_uses_configured_hbar():
    sp = SymbolicParams(hbar=Fraction(1, 3))
    assert parse_operator("y*p - p*y", sp) == OperatorPoly.constant(RationalComplex(0, Fraction(1, 3)), Fraction(1, 3))


def test_completed_square_matches_engine():
    sp = SymbolicParams(m=1, lam=1)
    shifted = p + y * Fraction(1, 2)
    assert parse_operator("(p + (m*lambda/2)*y)^2", sp) == shifted * shifted


def test_decimals_are_exact():
    assert parse_operator("0.1*y") == y * Fraction(1, 10)


def test_rational_literals_and_precedence():
    assert parse_operator("1/2*p^2 + 3/4") == p * p / 2 + Fraction(3, 4)
    assert parse_operator("2*y^2") == y * y * 2
    assert parse_operator("(2*y)^2") == y * y * 4


def test_leading_minus():
    assert parse_operator("-y + p") == p - y
    assert parse_operator("(-1/2 + 1/3*i)") == OperatorPoly.constant(RationalComplex(Fraction(-1, 2), Fraction(1, 3)))


def test_no_division_by_operators():
    with pytest.raises(ParseError) as info:
        parse_operator("p^2/...")
    assert info.value.offset == 4
    assert "number" in info.value.expected
    with pytest.raises(ParseError):
        parse_operator("1/y")


def test_juxtaposition_is_not_multiplication():
    with pytest.raises(ParseError) as info:
        parse_operator("2 y")
    assert info.value.offset == 2


def test_negative_exponent():
    with pytest.raises(NegativeExponentError):
        parse_operator("y^-1")


def test_fractional_exponent():
    with pytest.raises(ParseError):
        parse_operator("y^1.5")


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse_operator("y*q")
    assert info.value.offset == 2


def test_unbalanced_and_empty():
    with pytest.raises(ParseError):
        parse_operator("(y + p")
    with pytest.raises(ParseError):
        parse_operator("   ")
    with pytest.raises(ParseError):
        parse_operator("y +")


def test_offsets_are_bytes():
    with pytest.raises(ParseError) as info:
        parse_operator("y*ω")
    assert info.value.offset == 2
    toks = tokenize("y + p")
    assert [t.offset for t in toks] == [0, 2, 4, 5]


def test_equation():
    lhs, rhs = parse_equation("p*y == y*p - i*hbar")
    assert lhs == rhs
    with pytest.raises(ParseError) as info:
        parse_equation("y == y +")
    assert info.value.offset == 8


@settings(max_examples=100, deadline=None)
@given(polys(max_deg=3, max_terms=4))
def test_round_trip(poly):
    assert parse_operator(str(poly)) == poly
