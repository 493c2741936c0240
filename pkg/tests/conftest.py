from fractions import Fraction

import sympy
from hypothesis import strategies as st

from dampedqm.weyl_algebra import OperatorPoly, RationalComplex

Y = sympy.Symbol("y")


def act(poly: OperatorPoly, f):
    """Oracle: apply sum c y^a p^b to a sympy polynomial f(y) with p = -i hbar d/dy."""
    hbar = sympy.Rational(poly.hbar.numerator, poly.hbar.denominator)
    out = 0
    for (a, b), c in poly.terms.items():
        coeff = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator)
        g = f
        for _ in range(b):
            g = -sympy.I * hbar * sympy.diff(g, Y)
        out += coeff * Y**a * g
    return sympy.expand(out)


# probe functions: a polynomial rich enough to separate operators of degree <= 8
PROBES = [Y**k for k in range(9)] + [1 + 2 * Y - 3 * Y**3 + Y**6]

small_fracs = st.fractions(min_value=-3, max_value=3, max_denominator=5)
coeffs = st.builds(RationalComplex, small_fracs, small_fracs)


@st.composite
def polys(draw, hbar=Fraction(1), max_deg=2, max_terms=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        a = draw(st.integers(0, max_deg))
        b = draw(st.integers(0, max_deg))
        terms[(a, b)] = draw(coeffs)
    return OperatorPoly(terms, hbar)


positive_fracs = st.fractions(min_value=Fraction(1, 9), max_value=5, max_denominator=9)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])
