"""Asymptotic queries on rational functions as one symbol grows without bound."""
from __future__ import annotations

from dataclasses import dataclass, field

from .rational import RationalFunction


@dataclass(frozen=True)
class LimitResult:
    """Outcome of :func:`limit_at_infinity`.

    ``kind`` is ``"zero"``, ``"finite"`` or ``"diverges"``.  For a finite limit
    ``value`` holds the ratio of leading coefficients; ``assumes_positive``
    lists the residual symbols taken to be strictly positive.
    """

    kind: str
    value: RationalFunction | None = None
    degree: int | None = None
    assumes_positive: tuple[str, ...] = field(default=())

    @classmethod
    def zero(cls):
        return cls("zero", value=RationalFunction(0))

    def __str__(self):
        if self.kind == "diverges":
            return f"diverges with degree {self.degree}"
        return self.value.to_text()


def limit_at_infinity(rf: RationalFunction, symbol: str) -> LimitResult:
    """Limit of ``rf`` as ``symbol`` tends to infinity.

    The numerator and denominator are viewed as polynomials in ``symbol`` with
    coefficients in the remaining symbols, which are assumed positive.
    """
    if rf.is_zero():
        return LimitResult.zero()
    num = rf.num.coefficients_in(symbol)
    den = rf.den.coefficients_in(symbol)
    dn, dd = max(num), max(den)
    if dn < dd:
        return LimitResult.zero()
    if dn > dd:
        return LimitResult("diverges", degree=dn - dd)
    value = RationalFunction(num[dn], den[dd])
    return LimitResult("finite", value=value, assumes_positive=value.symbols)


def log_degree(rf: RationalFunction, symbol: str) -> int:
    """Return ``lim -log(rf)/log(symbol)`` as ``symbol`` grows, i.e. deg(den) - deg(num)."""
    if rf.is_zero():
        raise ValueError("log_degree of the zero function is undefined")
    others = [s for s in rf.symbols if s != symbol]
    if others:
        raise ValueError(f"log_degree needs a function of {symbol} only; found {', '.join(others)}")
    return rf.den.degree(symbol) - rf.num.degree(symbol)
