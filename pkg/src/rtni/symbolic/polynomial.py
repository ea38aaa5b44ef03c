"""Sparse multivariate polynomials with arbitrary-precision integer coefficients.

A monomial is a tuple of ``(symbol, exponent)`` pairs sorted by symbol name,
with every exponent positive; the constant monomial is ``()``.  Monomials are
ordered lexicographically: the alphabetically first symbol is the most
significant, then exponents are compared.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Mapping

Monomial = tuple  # tuple[tuple[str, int], ...]

SYMBOL_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


def check_symbol(name: str) -> str:
    if not isinstance(name, str) or not SYMBOL_RE.match(name):
        raise ValueError(f"invalid symbol name {name!r}")
    return name


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """Return a/b, or None when b does not divide a."""
    out = dict(a)
    for v, e in b:
        r = out.get(v, 0) - e
        if r < 0:
            return None
        if r:
            out[v] = r
        else:
            del out[v]
    return tuple(sorted(out.items()))


def _lex_key(mono: Monomial, variables: tuple[str, ...]) -> tuple[int, ...]:
    exps = dict(mono)
    return tuple(exps.get(v, 0) for v in variables)


class Polynomial:
    """Immutable sparse polynomial over the integers."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls._raw({(): int(c)} if c else {})

    @classmethod
    def symbol(cls, name: str) -> "Polynomial":
        return cls._raw({((check_symbol(name), 1),): 1})

    @classmethod
    def from_dense(cls, coeffs: list[int], var: str) -> "Polynomial":
        """Build from ascending coefficient list ``[c0, c1, ...]`` in ``var``."""
        terms = {}
        for e, c in enumerate(coeffs):
            if c:
                terms[((var, e),) if e else ()] = c
        return cls._raw(terms)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((), 0)

    @property
    def symbols(self) -> tuple[str, ...]:
        seen = set()
        for mono in self._terms:
            for v, _ in mono:
                seen.add(v)
        return tuple(sorted(seen))

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree when ``var`` is None); -1 for zero."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self._terms)
        return max(dict(m).get(var, 0) for m in self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in decreasing lexicographic monomial order."""
        variables = self.symbols
        return sorted(self._terms.items(), key=lambda t: _lex_key(t[0], variables), reverse=True)

    def leading_term(self) -> tuple[Monomial, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        variables = self.symbols
        return max(self._terms.items(), key=lambda t: _lex_key(t[0], variables))

    def leading_coefficient(self) -> int:
        return self.leading_term()[1]

    def content(self) -> int:
        """Gcd of the integer coefficients, signed like the leading coefficient."""
        if not self._terms:
            return 0
        g = 0
        for c in self._terms.values():
            g = math.gcd(g, c)
        return g if self.leading_coefficient() > 0 else -g

    def coefficients_in(self, var: str) -> dict[int, "Polynomial"]:
        """View as a univariate polynomial in ``var``: exponent -> coefficient."""
        out: dict[int, dict] = {}
        for mono, c in self._terms.items():
            e = 0
            rest = []
            for v, k in mono:
                if v == var:
                    e = k
                else:
                    rest.append((v, k))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: Polynomial._raw(t) for e, t in out.items()}

    def dense(self, var: str) -> list[int]:
        """Ascending integer coefficient list; requires ``var`` to be the only symbol."""
        deg = self.degree(var)
        coeffs = [0] * (deg + 1)
        for mono, c in self._terms.items():
            if mono == ():
                coeffs[0] += c
            elif len(mono) == 1 and mono[0][0] == var:
                coeffs[mono[0][1]] += c
            else:
                raise ValueError(f"polynomial is not univariate in {var}")
        return coeffs

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

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
        if not self._terms or not other._terms:
            return Polynomial._raw({})
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale_div(self, c: int) -> "Polynomial":
        """Divide every coefficient by the integer ``c``; must be exact."""
        out = {}
        for m, v in self._terms.items():
            q, r = divmod(v, c)
            if r:
                raise ArithmeticError(f"coefficient {v} not divisible by {c}")
            out[m] = q
        return Polynomial._raw(out)

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_constant():
            return self.scale_div(other.constant_value())
        variables = tuple(sorted(set(self.symbols) | set(other.symbols)))
        key = lambda t: _lex_key(t[0], variables)  # noqa: E731
        lm_b, lc_b = max(other._terms.items(), key=key)
        rem = dict(self._terms)
        quot: dict = {}
        while rem:
            lm_r, lc_r = max(rem.items(), key=key)
            m = _mono_div(lm_r, lm_b)
            if m is None:
                raise ArithmeticError("polynomial division is not exact")
            q, r = divmod(lc_r, lc_b)
            if r:
                raise ArithmeticError("polynomial division is not exact")
            quot[m] = q
            for mb, cb in other._terms.items():
                mm = _mono_mul(m, mb)
                s = rem.get(mm, 0) - q * cb
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        return Polynomial._raw(quot)

    # -- evaluation and substitution ----------------------------------------

    def evaluate(self, assignment: Mapping[str, Fraction | int]) -> Fraction:
        total = Fraction(0)
        for mono, c in self._terms.items():
            t = Fraction(c)
            for v, e in mono:
                try:
                    t *= Fraction(assignment[v]) ** e
                except KeyError:
                    raise KeyError(f"no value assigned to symbol {v!r}") from None
            total += t
        return total

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        out: dict = {}
        for mono, c in self._terms.items():
            m = {}
            for v, e in mono:
                w = mapping.get(v, v)
                m[w] = m.get(w, 0) + e
            key = tuple(sorted(m.items()))
            out[key] = out.get(key, 0) + c
        return Polynomial(out)

    def compose(self, var: str, replacement: "Polynomial") -> "Polynomial":
        """Substitute the polynomial ``replacement`` for ``var``."""
        coeffs = self.coefficients_in(var)
        result = Polynomial.constant(0)
        for e in range(max(coeffs), -1, -1):
            result = result * replacement + coeffs.get(e, Polynomial._raw({}))
        return result

    # -- comparison, hashing, text ------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            factors = [v if e == 1 else f"{v}^{e}" for v, e in mono]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("-" if c < 0 else "+") + body)
        return "".join(parts)

    def num_terms(self) -> int:
        return len(self._terms)

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    __str__ = to_text


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.constant(x)
    return NotImplemented


ZERO = Polynomial.constant(0)
ONE = Polynomial.constant(1)


# -- gcd -------------------------------------------------------------------


def _dense_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _dense_content(a: list[int]) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _dense_primitive(a: list[int]) -> list[int]:
    g = _dense_content(a)
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _dense_prem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [lb * c for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= la * c
        _dense_trim(a)
    return a


def _dense_gcd(a: list[int], b: list[int]) -> list[int]:
    """Gcd of univariate integer polynomials via the primitive remainder sequence."""
    a = _dense_trim(list(a))
    b = _dense_trim(list(b))
    if not a or not b:
        rest = a or b
        return [-c for c in rest] if rest and rest[-1] < 0 else rest
    g = math.gcd(_dense_content(a), _dense_content(b))
    a, b = _dense_primitive(a), _dense_primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _dense_prem(a, b)
        a, b = b, _dense_primitive(r)
    return [g * c for c in _dense_primitive(a)]


def _content_in(p: Polynomial, var: str) -> Polynomial:
    g = ZERO
    for c in p.coefficients_in(var).values():
        g = gcd(g, c)
        if g.is_constant() and abs(g.constant_value()) == 1:
            break
    return g


def _from_coeffs(coeffs: dict[int, Polynomial], var: str) -> Polynomial:
    result = ZERO
    x = Polynomial.symbol(var)
    for e, c in coeffs.items():
        result = result + c * (x ** e)
    return result


def _prem(a: dict[int, Polynomial], b: dict[int, Polynomial]) -> dict[int, Polynomial]:
    a = dict(a)
    db = max(b)
    lb = b[db]
    while a and max(a) >= db:
        da = max(a)
        la = a[da]
        shift = da - db
        new = {e: lb * c for e, c in a.items()}
        for e, c in b.items():
            k = e + shift
            v = new.get(k, ZERO) - la * c
            new[k] = v
        a = {e: c for e, c in new.items() if not c.is_zero()}
    return a


def _primitive_in(p: Polynomial, var: str) -> Polynomial:
    if p.is_zero():
        return p
    return p.exact_div(_content_in(p, var))


def _normalize_sign(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    return -p if p.leading_coefficient() < 0 else p


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized to a positive leading coefficient.

    Univariate inputs use a dense integer remainder sequence.  Multivariate
    inputs first try the heuristic gcd (evaluate the first symbol at a large
    integer, recurse, interpolate, verify by division) and fall back to a
    primitive remainder sequence in the first symbol.
    """
    if a.is_zero():
        return _normalize_sign(b)
    if b.is_zero():
        return _normalize_sign(a)
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(math.gcd(abs(a.content()), abs(b.content())))
    variables = sorted(set(a.symbols) | set(b.symbols))
    if len(variables) == 1:
        v = variables[0]
        return Polynomial.from_dense(_dense_gcd(a.dense(v), b.dense(v)), v)
    g = _heu_gcd(a, b, variables[0])
    return g if g is not None else _prs_gcd(a, b, variables[0])


def _prs_gcd(a: Polynomial, b: Polynomial, x: str) -> Polynomial:
    if x not in a.symbols:
        return gcd(a, _content_in(b, x))
    if x not in b.symbols:
        return gcd(_content_in(a, x), b)
    ca, cb = _content_in(a, x), _content_in(b, x)
    c = gcd(ca, cb)
    pa = a.exact_div(ca).coefficients_in(x)
    pb = b.exact_div(cb).coefficients_in(x)
    if max(pa) < max(pb):
        pa, pb = pb, pa
    while pb:
        r = _prem(pa, pb)
        pa = pb
        if not r:
            pb = {}
            break
        pb = _primitive_in(_from_coeffs(r, x), x).coefficients_in(x)
    g = _primitive_in(_from_coeffs(pa, x), x)
    return _normalize_sign(c * g)



def _max_norm(p: Polynomial) -> int:
    return max(abs(c) for c in p._terms.values())


def _eval_var(p: Polynomial, var: str, xi: int) -> Polynomial:
    out: dict = {}
    for mono, c in p._terms.items():
        e = 0
        rest = []
        for v, k in mono:
            if v == var:
                e = k
            else:
                rest.append((v, k))
        key = tuple(rest)
        out[key] = out.get(key, 0) + c * xi ** e
    return Polynomial._raw({k: c for k, c in out.items() if c})


def _interpolate(h: Polynomial, var: str, xi: int) -> Polynomial:
    """Invert ``_eval_var`` assuming coefficients in the symmetric range mod xi."""
    terms: dict = {}
    half = xi // 2
    e = 0
    current = dict(h._terms)
    while current:
        rest = {}
        for mono, c in current.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                terms[_mono_mul(mono, ((var, e),)) if e else mono] = r
            q = (c - r) // xi
            if q:
                rest[mono] = q
        current = rest
        e += 1
    return Polynomial._raw(terms)


def _divides(d: Polynomial, p: Polynomial) -> bool:
    try:
        p.exact_div(d)
    except ArithmeticError:
        return False
    return True


def _heu_gcd(a: Polynomial, b: Polynomial, x: str) -> Polynomial | None:
    ca, cb = abs(a.content()), abs(b.content())
    c = math.gcd(ca, cb)
    a, b = a.scale_div(ca), b.scale_div(cb)
    xi = 2 * min(_max_norm(a), _max_norm(b)) + 29
    for _ in range(6):
        ea, eb = _eval_var(a, x, xi), _eval_var(b, x, xi)
        if not ea.is_zero() and not eb.is_zero():
            cand = _interpolate(gcd(ea, eb), x, xi)
            if not cand.is_zero():
                cand = cand.scale_div(abs(cand.content()))
                if _divides(cand, a) and _divides(cand, b):
                    return _normalize_sign(cand * c)
        xi = xi * 73794 // 27011
    return None
