"""Exact polynomial algebra in one canonical pair (y, p) with [y, p] = i*hbar.

Every :class:`OperatorPoly` is stored normal ordered, i.e. as a sum of
monomials ``c * y^a p^b`` with all position factors to the left.  Products
are brought back to that form with the closed reordering rule

    p^b y^c = sum_k k! C(b, k) C(c, k) (-i hbar)^k y^(c-k) p^(b-k),

which is the iterated form of ``p y = y p - i hbar``.  Coefficients are exact
complex rationals and hbar is a fixed rational number attached to each
polynomial, so all identities below hold exactly rather than to a tolerance.

Gauge conjugation by ``eta = exp(i sigma y^2 / hbar)`` does not need a
series: ``eta p eta^-1 = p - 2 sigma y`` exactly, since ``[y^2, p] = 2 i hbar y``
commutes with ``y^2`` and the Baker-Campbell-Hausdorff expansion stops after
the first commutator.  Conjugation is an algebra automorphism fixing ``y``,
so it is computed by substituting ``p -> p - 2 sigma y`` into each monomial
and re-normal-ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from numbers import Rational
from types import MappingProxyType

MAX_EXPONENT = 16


class ExponentOverflowError(ValueError):
    """A monomial exceeded the per-generator exponent cap."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (Rational, str)):
        return Fraction(x)
    if isinstance(x, float):
        # exact decimal reading of the float's shortest repr
        return Fraction(repr(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


@dataclass(frozen=True, slots=True)
class RationalComplex:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @classmethod
    def coerce(cls, x) -> "RationalComplex":
        if isinstance(x, RationalComplex):
            return x
        if isinstance(x, complex):
            return cls(_frac(x.real), _frac(x.imag))
        return cls(_frac(x), Fraction(0))

    def __add__(self, other):
        o = RationalComplex.coerce(other)
        return RationalComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = RationalComplex.coerce(other)
        return RationalComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return RationalComplex.coerce(other) - self

    def __mul__(self, other):
        o = RationalComplex.coerce(other)
        return RationalComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalComplex.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero in RationalComplex")
        return self * RationalComplex(o.re / d, -o.im / d)

    def __rtruediv__(self, other):
        return RationalComplex.coerce(other) / self

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __pow__(self, n: int):
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = RationalComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"RationalComplex({self.re}, {self.im})"

    def __str__(self):
        return format_coefficient(self)


ZERO = RationalComplex(0, 0)
ONE = RationalComplex(1, 0)
I = RationalComplex(0, 1)


def format_coefficient(c: RationalComplex) -> str:
    """Parser-compatible text for a coefficient, e.g. ``3/4``, ``-1/2*i``, ``(1 + 2*i)``."""
    if not c.im:
        return str(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{c.im}*i"
    sign = "+" if c.im > 0 else "-"
    mag = abs(c.im)
    im = "i" if mag == 1 else f"{mag}*i"
    return f"({c.re} {sign} {im})"


class OperatorPoly:
    """Normal-ordered polynomial ``sum c_ab y^a p^b``; immutable."""

    __slots__ = ("_terms", "_hbar", "_hash")

    def __init__(self, terms=None, hbar=1):
        self._hbar = _frac(hbar)
        if self._hbar <= 0:
            raise ValueError(f"hbar must be a positive rational, got {self._hbar}")
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in monomial y^{a} p^{b}")
            c = RationalComplex.coerce(c)
            if c:
                if a > MAX_EXPONENT or b > MAX_EXPONENT:
                    raise ExponentOverflowError(
                        f"monomial y^{a} p^{b} exceeds the exponent cap {MAX_EXPONENT}"
                    )
                clean[(int(a), int(b))] = c
        self._terms = MappingProxyType(clean)
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, c, hbar=1) -> "OperatorPoly":
        return cls({(0, 0): c}, hbar)

    @classmethod
    def monomial(cls, a: int, b: int, c=1, hbar=1) -> "OperatorPoly":
        return cls({(a, b): c}, hbar)

    @property
    def terms(self):
        return self._terms

    @property
    def hbar(self) -> Fraction:
        return self._hbar

    def coefficient(self, a: int, b: int) -> RationalComplex:
        return self._terms.get((a, b), ZERO)

    def degree(self) -> tuple[int, int]:
        if not self._terms:
            return (0, 0)
        return (max(a for a, _ in self._terms), max(b for _, b in self._terms))

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def _lift(self, other) -> "OperatorPoly":
        if isinstance(other, OperatorPoly):
            if other._hbar != self._hbar:
                raise ValueError(f"mixing polynomials with hbar={self._hbar} and hbar={other._hbar}")
            return other
        return OperatorPoly.constant(other, self._hbar)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self._terms)
        for k, c in o._terms.items():
            out[k] = out.get(k, ZERO) + c
        return OperatorPoly(out, self._hbar)

    __radd__ = __add__

    def __neg__(self):
        return OperatorPoly({k: -c for k, c in self._terms.items()}, self._hbar)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, OperatorPoly):
            return normal_order_mul(self, other)
        s = RationalComplex.coerce(other)
        return OperatorPoly({k: c * s for k, c in self._terms.items()}, self._hbar)

    def __rmul__(self, other):
        # scalars commute with everything
        return self * other

    def __truediv__(self, other):
        s = RationalComplex.coerce(other)
        return OperatorPoly({k: c / s for k, c in self._terms.items()}, self._hbar)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {n!r}")
        out = OperatorPoly.constant(1, self._hbar)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, OperatorPoly):
            return self._hbar == other._hbar and dict(self._terms) == dict(other._terms)
        try:
            return self == self._lift(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._hbar, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][1], -kv[0][0]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"OperatorPoly({format_poly(self)!r}, hbar={self._hbar})"


def _monomial_text(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("y" if a == 1 else f"y^{a}")
    if b:
        parts.append("p" if b == 1 else f"p^{b}")
    return "*".join(parts)


def format_poly(poly: OperatorPoly) -> str:
    """Text form accepted by :func:`dampedqm.opparser.parse_operator`."""
    if not poly.terms:
        return "0"
    out = []
    for i, ((a, b), c) in enumerate(poly.sorted_terms()):
        mono = _monomial_text(a, b)
        negative = (not c.im and c.re < 0) or (not c.re and c.im < 0)
        mag = -c if negative else c
        if mono and mag == ONE:
            body = mono
        elif mono:
            body = f"{format_coefficient(mag)}*{mono}"
        else:
            body = format_coefficient(mag)
        if i == 0:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f"{'-' if negative else '+'} {body}")
    return " ".join(out)


def generators(hbar=1) -> tuple[OperatorPoly, OperatorPoly]:
    """The pair (y, p) for the given hbar."""
    return OperatorPoly.monomial(1, 0, hbar=hbar), OperatorPoly.monomial(0, 1, hbar=hbar)


def _reorder_coefficients(b: int, c: int, hbar: Fraction):
    # p^b y^c -> sum_k coef_k y^(c-k) p^(b-k)
    minus_i_hbar = RationalComplex(0, -hbar)
    for k in range(min(b, c) + 1):
        yield k, (minus_i_hbar**k) * (factorial(k) * comb(b, k) * comb(c, k))


def normal_order_mul(a: OperatorPoly, b: OperatorPoly) -> OperatorPoly:
    """Normal-ordered product ``a * b``."""
    if a.hbar != b.hbar:
        raise ValueError(f"mixing polynomials with hbar={a.hbar} and hbar={b.hbar}")
    out: dict = {}
    for (ya, pa), ca in a.terms.items():
        for (yb, pb), cb in b.terms.items():
            cab = ca * cb
            for k, w in _reorder_coefficients(pa, yb, a.hbar):
                key = (ya + yb - k, pa + pb - k)
                out[key] = out.get(key, ZERO) + cab * w
    return OperatorPoly(out, a.hbar)


def adjoint(a: OperatorPoly) -> OperatorPoly:
    """Formal adjoint: ``(c y^a p^b)^dagger = conj(c) p^b y^a``, re-normal-ordered."""
    out = OperatorPoly({}, a.hbar)
    for (ya, pa), c in a.terms.items():
        term = normal_order_mul(
            OperatorPoly.monomial(0, pa, c.conjugate(), a.hbar),
            OperatorPoly.monomial(ya, 0, 1, a.hbar),
        )
        out = out + term
    return out


def gauge_conjugate(a: OperatorPoly, sigma) -> OperatorPoly:
    """``eta a eta^-1`` for ``eta = exp(i sigma y^2 / hbar)``, via ``p -> p - 2 sigma y``."""
    sigma = _frac(sigma)
    y, p = generators(a.hbar)
    shifted = p - y * (2 * sigma)
    powers = [OperatorPoly.constant(1, a.hbar)]
    out = OperatorPoly({}, a.hbar)
    for (ya, pa), c in a.terms.items():
        while len(powers) <= pa:
            powers.append(powers[-1] * shifted)
        out = out + OperatorPoly.monomial(ya, 0, c, a.hbar) * powers[pa]
    return out


def split_hermitian(a: OperatorPoly) -> tuple[OperatorPoly, OperatorPoly]:
    """``((a + a^dagger)/2, (a - a^dagger)/2)``."""
    adj = adjoint(a)
    return (a + adj) / 2, (a - adj) / 2


@dataclass(frozen=True)
class SymbolicParams:
    m: Fraction = Fraction(1)
    omega: Fraction = Fraction(1)
    lam: Fraction = Fraction(0)
    hbar: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("m", "omega", "lam", "hbar"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.m <= 0 or self.omega <= 0 or self.hbar <= 0:
            raise ValueError(f"m, omega and hbar must be positive: {self}")
        if self.lam < 0:
            raise ValueError(f"lambda must be non-negative, got {self.lam}")

    @property
    def sigma(self) -> Fraction:
        """Gauge exponent m*lam/4 that removes the damping cross term."""
        return self.m * self.lam / 4

    def numeric(self):
        from .analytic import PhysParams

        return PhysParams(float(self.m), float(self.omega), float(self.lam), float(self.hbar))


HAMILTONIAN_FORMS = ("EQ2", "EQ4", "EQ5")


def build_hamiltonian(params: SymbolicParams, form: str = "EQ2") -> OperatorPoly:
    """The damped-oscillator Hamiltonian in one of its three written forms.

    ``EQ2``: ``p^2/2m + m w^2 y^2/2 + (lam/2) y p`` with the ``y p`` ordering as written.
    ``EQ4``: damping term symmetrized, ``(lam/4)(y p + p y) + i hbar lam/4``.
    ``EQ5``: completed square ``(p + m lam y/2)^2/2m + m(w^2 - lam^2/4) y^2/2 + i hbar lam/4``.
    """
    form = form.upper()
    if form not in HAMILTONIAN_FORMS:
        raise ValueError(f"form must be one of {HAMILTONIAN_FORMS}, got {form!r}")
    m, w, lam, hbar = params.m, params.omega, params.lam, params.hbar
    y, p = generators(hbar)
    if form == "EQ2":
        return p * p / (2 * m) + y * y * (m * w**2 / 2) + (y * p) * (lam / 2)
    shift = RationalComplex(0, hbar * lam / 4)
    if form == "EQ4":
        return p * p / (2 * m) + y * y * (m * w**2 / 2) + (y * p + p * y) * (lam / 4) + shift
    shifted = p + y * (m * lam / 2)
    return shifted * shifted / (2 * m) + y * y * (m * (w**2 - lam**2 / 4) / 2) + shift


def reduced_hamiltonian(params: SymbolicParams) -> OperatorPoly:
    """``p^2/2m + m(w^2 - lam^2/4) y^2/2 + i hbar lam/4``: the gauge-conjugated form."""
    m, w, lam, hbar = params.m, params.omega, params.lam, params.hbar
    y, p = generators(hbar)
    return p * p / (2 * m) + y * y * (m * (w**2 - lam**2 / 4) / 2) + RationalComplex(0, hbar * lam / 4)
