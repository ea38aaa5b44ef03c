"""Exact polynomial and rational-function arithmetic over named symbols."""
from .limits import LimitResult, limit_at_infinity, log_degree
from .parser import ExprSyntaxError, expr_parse, parse_polynomial
from .polynomial import ONE, ZERO, Polynomial, check_symbol, gcd
from .rational import PoleError, RationalFunction, as_rational

__all__ = [
    "ExprSyntaxError",
    "LimitResult",
    "ONE",
    "PoleError",
    "Polynomial",
    "RationalFunction",
    "ZERO",
    "as_rational",
    "check_symbol",
    "expr_parse",
    "gcd",
    "limit_at_infinity",
    "log_degree",
    "parse_polynomial",
    "rf_binary",
    "rf_equal",
    "rf_eval",
    "rf_substitute",
]


def rf_binary(op: str, a: RationalFunction, b: RationalFunction) -> RationalFunction:
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    try:
        return ops[op]()
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    return as_rational(a).equals(b)


def rf_substitute(rf: RationalFunction, symbol: str, replacement) -> RationalFunction:
    return rf.substitute(symbol, as_rational(replacement))


def rf_eval(rf: RationalFunction, assignment):
    return rf.evaluate(assignment)
