"""Schur dimensions and unitary Weingarten functions with symbolic dimension."""
from __future__ import annotations

import logging
import math
import threading
from collections import Counter
from dataclasses import dataclass

from . import cache
from .symbolic import ONE, Polynomial, RationalFunction, check_symbol, parse_polynomial
from .symgroup import Partition, _character, character_table, check_partition, conjugate, partitions

log = logging.getLogger(__name__)

DISK_SYMBOL = "d"


def _contents_and_hooks(lam: Partition) -> tuple[Counter, int]:
    conj = conjugate(lam)
    contents = Counter()
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            contents[j - i] += 1
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return contents, hooks


def _linear_product(contents: Counter, s: str) -> Polynomial:
    x = Polynomial.symbol(s)
    result = ONE
    for c, mult in sorted(contents.items()):
        result = result * (x + c) ** mult
    return result


def schur_dim_poly(lam: Partition, s: str) -> RationalFunction:
    """Dimension of the GL(s) irrep ``lam`` as a polynomial in ``s`` (hook-content formula).

    The result is integer-valued but its coefficients are rational in general
    (``s(s+1)/2`` for ``lam = (2,)``), so it is returned as a rational function
    whose denominator is a positive integer.
    """
    lam = check_partition(lam)
    if not lam:
        raise ValueError("empty partition")
    check_symbol(s)
    contents, hooks = _contents_and_hooks(lam)
    result = RationalFunction(_linear_product(contents, s), hooks)
    # integer-valued of degree |lam| iff integral at |lam| + 1 consecutive points
    for m in range(sum(lam) + 1):
        if result.evaluate({s: m}).denominator != 1:
            raise RuntimeError(f"hook-content product for {lam} is not integer-valued")
    return result


def _wg_values(p: int, s: str, cycle_types: list[Partition]) -> dict[Partition, RationalFunction]:
    """Wg_s for each requested cycle type of S_p over one common denominator.

    ``1/s_lam(1) = hooks / prod(s + content)``, so every term shares the
    denominator ``prod_c (s + c)^{max multiplicity of c}``.
    """
    shapes = partitions(p)
    data = {lam: _contents_and_hooks(lam) for lam in shapes}
    common = Counter()
    for contents, _ in data.values():
        for c, m in contents.items():
            common[c] = max(common[c], m)
    den = _linear_product(common, s) * (math.factorial(p) ** 2)
    cofactors = {lam: _linear_product(common - contents, s) * hooks
                 for lam, (contents, hooks) in data.items()}
    identity_class = (1,) * p
    out = {}
    for ct in cycle_types:
        num = Polynomial.constant(0)
        for lam in shapes:
            chi = _character(lam, ct)
            if chi:
                dim = _character(lam, identity_class)
                num = num + cofactors[lam] * (dim * dim * chi)
        out[ct] = RationalFunction(num, den)
    return out


def weingarten(ct: Partition, s: str) -> RationalFunction:
    """Unitary Weingarten function of cycle type ``ct`` in dimension ``s``."""
    ct = check_partition(ct)
    if not ct:
        raise ValueError("empty cycle type")
    check_symbol(s)
    return _wg_values(sum(ct), s, [ct])[ct]


@dataclass(frozen=True)
class WgTable:
    p: int
    symbol: str
    entries: dict  # Partition -> RationalFunction

    def __getitem__(self, ct):
        return self.entries[tuple(ct)]

    def to_json(self) -> list:
        rename = {self.symbol: DISK_SYMBOL}
        rows = []
        for ct, rf in self.entries.items():
            rf = rf.rename(rename) if self.symbol != DISK_SYMBOL else rf
            rows.append([list(ct), rf.num.to_text(), rf.den.to_text()])
        return rows


_memo: dict[int, dict] = {}
_memo_lock = threading.Lock()


def _table_from_json(p: int, rows) -> dict | None:
    try:
        entries = {}
        for parts, num, den in rows:
            entries[check_partition(parts)] = RationalFunction(parse_polynomial(num), parse_polynomial(den))
    except (TypeError, ValueError):
        return None
    if set(entries) != set(partitions(p)):
        return None
    return entries


def _disk_table(p: int) -> dict:
    with _memo_lock:
        if p in _memo:
            return _memo[p]
    rows = cache.load_json("wg", p)
    entries = _table_from_json(p, rows) if rows is not None else None
    if entries is None:
        if rows is not None:
            log.warning("cached Weingarten table for p=%d is malformed; recomputing", p)
        character_table(p)
        entries = _wg_values(p, DISK_SYMBOL, partitions(p))
        cache.store_json("wg", p, WgTable(p, DISK_SYMBOL, entries).to_json())
    with _memo_lock:
        _memo.setdefault(p, entries)
    return entries


def wg_table(p: int, s: str = DISK_SYMBOL) -> WgTable:
    """All Weingarten values for S_p, loaded from cache or computed and persisted."""
    if p < 1:
        raise ValueError("p must be positive")
    check_symbol(s)
    entries = _disk_table(p)
    if s != DISK_SYMBOL:
        entries = {ct: rf.rename({DISK_SYMBOL: s}) for ct, rf in entries.items()}
    return WgTable(p, s, dict(entries))


def clear_memo() -> None:
    with _memo_lock:
        _memo.clear()
