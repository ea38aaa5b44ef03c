"""Partitions, border strips, permutations and symmetric-group characters.

Partitions are tuples of positive integers in weakly decreasing order.
Permutations are tuples of 1-based images: ``perm[i - 1]`` is the image of ``i``.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations as _itertools_permutations

from . import cache

log = logging.getLogger(__name__)

Partition = tuple
Permutation = tuple


def check_partition(parts) -> Partition:
    parts = tuple(int(x) for x in parts)
    if any(x < 1 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"{parts} is not a partition")
    return parts


def partitions(p: int) -> list[Partition]:
    """All partitions of ``p`` in reverse-lexicographic order."""
    if p < 0:
        raise ValueError("p must be non-negative")

    def gen(n, largest):
        if n == 0:
            yield ()
            return
        for first in range(min(n, largest), 0, -1):
            for rest in gen(n - first, first):
                yield (first,) + rest

    return list(gen(p, p))


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for r in lam if r > j) for j in range(lam[0]))


@dataclass(frozen=True)
class BorderStrip:
    """Boxes removed from the right end of each row, and the strip height."""

    removed: tuple[int, ...]
    height: int

    def apply(self, lam: Partition) -> Partition:
        return tuple(r - g for r, g in zip(lam, self.removed) if r - g > 0)


def valid_border_strips(lam: Partition, size: int) -> list[BorderStrip]:
    """Border strips of ``size`` boxes whose removal leaves a Young diagram.

    A strip spanning rows ``top..bottom`` is forced on every row but the last:
    row ``i < bottom`` keeps ``lam[i + 1] - 1`` boxes, which is exactly what
    keeps it connected to the next row without enclosing a 2x2 square.  Only
    the bottom row's removal is free.  Strips are listed by top row.
    """
    if size < 1:
        raise ValueError("strip size must be positive")
    lam = tuple(lam)
    m = len(lam)
    out = []
    for top in range(m):
        forced = 0
        for bottom in range(top, m):
            below = lam[bottom + 1] if bottom + 1 < m else 0
            last = size - forced
            if last < 1:
                break
            if last <= lam[bottom] - below:
                removed = [0] * m
                for i in range(top, bottom):
                    removed[i] = lam[i] - lam[i + 1] + 1
                removed[bottom] = last
                out.append(BorderStrip(tuple(removed), bottom - top))
            forced += lam[bottom] - below + 1
    return out


@lru_cache(maxsize=None)
def _character(lam: Partition, beta: Partition) -> int:
    if not beta:
        return 1 if not lam else 0
    total = 0
    for strip in valid_border_strips(lam, beta[0]):
        sign = -1 if strip.height % 2 else 1
        total += sign * _character(strip.apply(lam), beta[1:])
    return total


def character(lam: Partition, beta: Partition) -> int:
    """Irreducible character ``chi^lam`` on the conjugacy class of cycle type ``beta``."""
    lam, beta = check_partition(lam), check_partition(beta)
    if sum(lam) != sum(beta):
        raise ValueError(f"size mismatch: |{lam}| != |{beta}|")
    return _character(lam, beta)


def dim_irrep(lam: Partition) -> int:
    """Dimension of the S_p irrep ``lam`` by the hook length formula."""
    lam = check_partition(lam)
    if not lam:
        raise ValueError("empty partition")
    conj = conjugate(lam)
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(lam)) // hooks


def class_size(beta: Partition) -> int:
    """Number of permutations with cycle type ``beta``."""
    denom = 1
    for part, mult in Counter(beta).items():
        denom *= part ** mult * math.factorial(mult)
    return math.factorial(sum(beta)) // denom


def partition_key(lam: Partition) -> str:
    return ",".join(str(x) for x in lam)


def parse_partition_key(key: str) -> Partition:
    return tuple(int(x) for x in key.split(",")) if key else ()


@dataclass(frozen=True)
class CharacterTable:
    p: int
    entries: dict  # (lam, beta) -> int

    def __getitem__(self, key):
        return self.entries[key]

    def to_json(self) -> dict:
        return {f"{partition_key(l)}|{partition_key(b)}": v for (l, b), v in self.entries.items()}

    @classmethod
    def from_json(cls, p: int, data: dict) -> "CharacterTable":
        entries = {}
        for key, v in data.items():
            l, b = key.split("|")
            entries[(parse_partition_key(l), parse_partition_key(b))] = int(v)
        return cls(p, entries)


def _table_complete(table: CharacterTable) -> bool:
    parts = partitions(table.p)
    return len(table.entries) == len(parts) ** 2 and all(
        (l, b) in table.entries for l in parts for b in parts
    )


def _single_table(p: int) -> CharacterTable:
    data = cache.load_json("chartab", p)
    if data is not None:
        try:
            table = CharacterTable.from_json(p, data)
            if _table_complete(table):
                return table
        except ValueError:
            pass
        log.warning("cached character table for p=%d is malformed; recomputing", p)
    parts = partitions(p)
    table = CharacterTable(p, {(l, b): _character(l, b) for l in parts for b in parts})
    cache.store_json("chartab", p, table.to_json())
    return table


def character_table(p: int) -> CharacterTable:
    """Full character table of S_p; tables for all smaller p are materialized too."""
    if p < 1:
        raise ValueError("p must be positive")
    for q in range(1, p):
        _single_table(q)
    return _single_table(p)


# -- permutations -------------------------------------------------------------


def check_permutation(images) -> Permutation:
    images = tuple(int(x) for x in images)
    if sorted(images) != list(range(1, len(images) + 1)):
        raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
    return images


def identity(p: int) -> Permutation:
    return tuple(range(1, p + 1))


def all_permutations(p: int) -> list[Permutation]:
    """S_p in lexicographic one-line order."""
    return list(_itertools_permutations(range(1, p + 1)))


def inverse(perm: Permutation) -> Permutation:
    inv = [0] * len(perm)
    for i, x in enumerate(perm, start=1):
        inv[x - 1] = i
    return tuple(inv)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``(a o b)(i) = a(b(i))``."""
    return tuple(a[x - 1] for x in b)


def cycle_type(perm: Permutation) -> Partition:
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        n = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i] - 1
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def num_cycles(perm: Permutation) -> int:
    return len(cycle_type(perm))


def relative_cycle_type(alpha: Permutation, beta: Permutation) -> Partition:
    """Cycle type of ``alpha^-1 o beta``."""
    if len(alpha) != len(beta):
        raise ValueError("permutations act on different sets")
    return cycle_type(compose(inverse(alpha), beta))
