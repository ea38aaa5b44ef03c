"""Exact rational functions over named symbols."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from .polynomial import ONE, ZERO, Polynomial, gcd


class PoleError(ZeroDivisionError):
    """A denominator vanished (division by zero, pole at a point, bad substitution)."""


def _canonical(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if den.is_zero():
        raise PoleError("denominator is the zero polynomial")
    if num.is_zero():
        return ZERO, ONE
    if den.is_constant():
        c = den.constant_value()
        g = math.gcd(abs(num.content()), abs(c))
        if c < 0:
            g = -g
        return num.scale_div(g), Polynomial.constant(c // g)
    g = gcd(num, den)
    if not (g.is_constant() and g.constant_value() == 1):
        num, den = num.exact_div(g), den.exact_div(g)
    # joint integer content (gcd above may be incomplete only up to units)
    c = math.gcd(abs(num.content()), abs(den.content()))
    if den.leading_coefficient() < 0:
        c = -c
    if c != 1:
        num, den = num.scale_div(c), den.scale_div(c)
    return num, den


class RationalFunction:
    """Immutable canonical quotient ``num / den`` of integer polynomials."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial | int = 0, den: Polynomial | int = 1):
        if isinstance(num, int):
            num = Polynomial.constant(num)
        if isinstance(den, int):
            den = Polynomial.constant(den)
        self.num, self.den = _canonical(num, den)
        self._hash = None

    @classmethod
    def _trusted(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        r = cls.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def symbol(cls, name: str) -> "RationalFunction":
        return cls._trusted(Polynomial.symbol(name), ONE)

    @classmethod
    def from_fraction(cls, q: Fraction | int) -> "RationalFunction":
        q = Fraction(q)
        return cls(q.numerator, q.denominator)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.num.symbols) | set(self.den.symbols)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == ONE

    # -- field operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._trusted(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalFunction()
        # cross-cancel before multiplying to keep degrees small
        g1 = gcd(self.num, other.den)
        g2 = gcd(other.num, self.den)
        n1, d2 = self.num.exact_div(g1), other.den.exact_div(g1)
        n2, d1 = other.num.exact_div(g2), self.den.exact_div(g2)
        return RationalFunction(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise PoleError("division by zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction._trusted(self.num ** n, self.den ** n)

    # -- queries ------------------------------------------------------------

    def evaluate(self, assignment: Mapping[str, Fraction | int]) -> Fraction:
        missing = [s for s in self.symbols if s not in assignment]
        if missing:
            raise KeyError(f"no value assigned to symbol(s) {', '.join(missing)}")
        d = self.den.evaluate(assignment)
        if d == 0:
            raise PoleError(f"pole at {dict(assignment)}")
        return self.num.evaluate(assignment) / d

    def substitute(self, symbol: str, replacement: "RationalFunction") -> "RationalFunction":
        replacement = _coerce(replacement)
        if symbol not in self.symbols:
            return self
        num = _compose(self.num, symbol, replacement)
        den = _compose(self.den, symbol, replacement)
        if den.is_zero():
            raise PoleError(f"substituting {symbol} makes the denominator vanish")
        return num / den

    def rename(self, mapping: Mapping[str, str]) -> "RationalFunction":
        return RationalFunction(self.num.rename(mapping), self.den.rename(mapping))

    def equals(self, other) -> bool:
        """Cross-multiplication test, independent of gcd completeness."""
        other = _coerce(other)
        return self.num * other.den == other.num * self.den

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- text ---------------------------------------------------------------

    def to_text(self) -> str:
        num = self.num.to_text()
        if self.den == ONE:
            return num
        if self.num.num_terms() > 1:
            num = f"({num})"
        den = self.den.to_text()
        if not _single_factor(self.den):
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"


def _single_factor(p: Polynomial) -> bool:
    """True when ``p`` prints as one integer or one symbol power."""
    if p.num_terms() != 1:
        return False
    (mono, c), = p.items()
    if not mono:
        return c > 0
    return c == 1 and len(mono) == 1


def _compose(p: Polynomial, symbol: str, r: RationalFunction) -> RationalFunction:
    coeffs = p.coefficients_in(symbol)
    result = RationalFunction()
    for e in range(max(coeffs), -1, -1):
        result = result * r + RationalFunction._trusted(coeffs.get(e, ZERO), ONE)
    return result


def _coerce(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction._trusted(x, ONE)
    if isinstance(x, (int, Fraction)):
        return RationalFunction.from_fraction(x)
    return NotImplemented


def as_rational(x) -> RationalFunction:
    r = _coerce(x)
    if r is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to RationalFunction")
    return r
