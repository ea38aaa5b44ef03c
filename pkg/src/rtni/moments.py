"""Haar moments of matrix words ``X1 U1 X2 U2 ... Xn Un``.

Each ``Uj`` is one of ``U``, ``U*``, ``U^T`` or ``conj(U)`` (codes 1 to 4).
Transposes are realised by swapping the ports of a ``U`` or ``U*`` box, so a
single Haar family suffices.  After integration the surviving wires are read
back as traces and at most one open matrix product.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .integrator import RandomMatrixSpec, integrate_haar_unitary
from .symbolic import Polynomial, RationalFunction, parse_polynomial
from .tn import TensorNetwork, TNSum, VertexRef, make_edge

UNITARY = "U"
LEFT_END = VertexRef("dummy-left", 1, "in", 1)
RIGHT_END = VertexRef("dummy-right", 1, "out", 1)

# code -> (box family, port facing the left neighbour)
_EPSILON = {
    1: (UNITARY, "out"),
    2: (UNITARY + "*", "out"),
    3: (UNITARY, "in"),
    4: (UNITARY + "*", "in"),
}
CONJUGATE_CODE = {1: 4, 4: 1, 2: 3, 3: 2}


def _other(port: str) -> str:
    return "in" if port == "out" else "out"


class ReconstructionError(ValueError):
    pass


@dataclass(frozen=True)
class Letter:
    name: str
    transposed: bool = False

    def flipped(self) -> "Letter":
        return Letter(self.name, not self.transposed)

    @property
    def key(self) -> tuple:
        return (self.name, self.transposed)

    def to_text(self) -> str:
        return f"Transpose[{self.name}]" if self.transposed else self.name


Word = tuple  # tuple[Letter, ...]


def word_text(word: Word) -> str:
    return ".".join(l.to_text() for l in word) if word else "I"


def reverse_flip(word: Word) -> Word:
    """The word of the transposed product."""
    return tuple(l.flipped() for l in reversed(word))


def canonical_trace(word: Word) -> Word:
    """Representative of a trace word under rotation and transposition."""
    word = tuple(word)
    if not word:
        return word
    candidates = []
    for w in (word, reverse_flip(word)):
        candidates.extend(w[i:] + w[:i] for i in range(len(w)))
    return min(candidates, key=lambda w: tuple(l.key for l in w))


@dataclass(frozen=True)
class MomentTerm:
    coeff: RationalFunction
    traces: tuple  # sorted tuple of canonical trace words
    open: Word | None  # None when the whole expression is a trace

    def body_text(self) -> str:
        parts = [] if self.open is None else [word_text(self.open)]
        parts += [f"Tr[{word_text(w)}]" for w in self.traces]
        return " ".join(parts) if parts else "1"

    def sort_key(self) -> tuple:
        return (len(self.traces), self.body_text())


def _coeff_text(coeff: RationalFunction, body: str) -> tuple[bool, str]:
    """Split a term into its sign and the unsigned text ``[c*]body[ / den]``."""
    num, den = coeff.num, coeff.den
    negative = False
    if num.is_constant():
        c = num.constant_value()
        negative = c < 0
        c = abs(c)
        text = body if c == 1 else (f"{c}" if body == "1" else f"{c}*{body}")
    else:
        lead = num.leading_coefficient()
        if lead < 0:
            negative, num = True, -num
        ntext = num.to_text()
        if body == "1":
            text = ntext if num.num_terms() == 1 else f"({ntext})"
        else:
            text = f"({ntext})*{body}" if num.num_terms() > 1 else f"{ntext}*{body}"
    if not den.is_constant() or den.constant_value() != 1:
        dtext = den.to_text()
        if den.num_terms() > 1 or "*" in dtext:
            dtext = f"({dtext})"
        text = f"{text} / {dtext}"
    return negative, text


@dataclass(frozen=True)
class MomentExpression:
    terms: tuple  # MomentTerm, in printing order

    @classmethod
    def from_terms(cls, terms) -> "MomentExpression":
        merged: dict = {}
        for t in terms:
            key = (t.traces, t.open)
            merged[key] = merged[key] + t.coeff if key in merged else t.coeff
        out = [MomentTerm(c, tr, op) for (tr, op), c in merged.items() if not c.is_zero()]
        return cls(tuple(sorted(out, key=MomentTerm.sort_key)))

    def is_zero(self) -> bool:
        return not self.terms

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for i, term in enumerate(self.terms):
            negative, text = _coeff_text(term.coeff, term.body_text())
            if i == 0:
                pieces.append(("-" if negative else "") + text)
            else:
                pieces.append(("- " if negative else "+ ") + text)
        return " ".join(pieces)

    def __str__(self):
        return self.to_text()

    def equals(self, other: "MomentExpression") -> bool:
        mine = {(t.traces, t.open): t.coeff for t in self.terms}
        theirs = {(t.traces, t.open): t.coeff for t in other.terms}
        return mine.keys() == theirs.keys() and all(c.equals(theirs[k]) for k, c in mine.items())

    def evaluate(self, assignment: Mapping[str, int], matrices: Mapping[str, np.ndarray]):
        """Numeric value for concrete dimensions and matrices (a matrix, or a scalar for traces)."""
        total = None
        for term in self.terms:
            coeff = complex(term.coeff.evaluate(dict(assignment)))
            value = coeff
            for w in term.traces:
                value = value * np.trace(_product(w, matrices))
            if term.open is not None:
                value = value * _product(term.open, matrices)
            total = value if total is None else total + value
        return 0 if total is None else total


def _product(word: Word, matrices: Mapping[str, np.ndarray]) -> np.ndarray:
    size = next(iter(matrices.values())).shape[0]
    out = np.eye(size, dtype=complex)
    for letter in word:
        m = matrices[letter.name]
        out = out @ (m.T if letter.transposed else m)
    return out


@dataclass(frozen=True)
class WordMeta:
    """What reconstruction needs to know about an encoded word."""

    dim: Polynomial
    eps: tuple
    names: tuple
    usetrace: bool


def _check_inputs(eps: Sequence[int], names: Sequence[str]) -> tuple[tuple, tuple]:
    eps, names = tuple(int(e) for e in eps), tuple(names)
    if not eps:
        raise ValueError("the word must contain at least one factor")
    if len(eps) != len(names):
        raise ValueError(f"{len(eps)} codes but {len(names)} matrix names")
    bad = [e for e in eps if e not in _EPSILON]
    if bad:
        raise ValueError(f"codes must be 1, 2, 3 or 4, got {bad[0]}")
    for n in names:
        if not n or n.startswith("dummy") or n.rstrip("*") == UNITARY:
            raise ValueError(f"invalid matrix name {n!r}")
    return eps, names


def build_word_tn(s, eps: Sequence[int], names: Sequence[str], usetrace: bool) -> tuple[TNSum, WordMeta]:
    """Encode ``X1 U1 ... Xn Un`` (or its trace) as a one-term network of weight 1."""
    eps, names = _check_inputs(eps, names)
    dim = s if isinstance(s, Polynomial) else parse_polynomial(str(s))
    seen: dict[str, int] = {}
    factors = []  # (box name, id, left port)
    for e, name in zip(eps, names):
        seen[name] = seen.get(name, 0) + 1
        factors.append((name, seen[name], "out"))
        family, left = _EPSILON[e]
        seen[family] = seen.get(family, 0) + 1
        factors.append((family, seen[family], left))

    def left_of(f):
        return VertexRef(f[0], f[1], f[2], 1)

    def right_of(f):
        return VertexRef(f[0], f[1], _other(f[2]), 1)

    edges = [make_edge(right_of(a), left_of(b)) for a, b in zip(factors, factors[1:])]
    if usetrace:
        edges.append(make_edge(right_of(factors[-1]), left_of(factors[0])))
    else:
        edges.append(make_edge(LEFT_END, left_of(factors[0])))
        edges.append(make_edge(right_of(factors[-1]), RIGHT_END))
    ts = TNSum([(TensorNetwork(edges), RationalFunction(1))])
    return ts, WordMeta(dim, eps, names, usetrace)


def _walk(nb: dict, start: VertexRef, stop) -> tuple[Word, VertexRef]:
    """Read letters from the box decoration ``start`` until ``stop(v)`` holds."""
    letters = []
    v = start
    while not stop(v):
        if v.name.startswith("dummy"):
            raise ReconstructionError(f"chain ends at unexpected endpoint {v.name}")
        letters.append(Letter(v.name, transposed=(v.port == "in")))
        exit_ = VertexRef(v.name, v.id, _other(v.port), 1)
        if exit_ not in nb:
            raise ReconstructionError(f"decoration {tuple(exit_)} is not wired")
        v = nb[exit_]
    return tuple(letters), v


def reconstruct_expression(ts: TNSum, meta: WordMeta) -> MomentExpression:
    """Read each integrated term back as traces times an optional open word."""
    terms = []
    for term in ts:
        nb = term.tn.neighbors()
        for v in nb:
            if v.name.rstrip("*") == UNITARY:
                raise ReconstructionError("network still contains random boxes")
            if v.leg != 1:
                raise ReconstructionError(f"decoration {tuple(v)} has leg {v.leg}")
        visited_boxes = set()
        open_word = None
        if not meta.usetrace:
            if LEFT_END not in nb:
                raise ReconstructionError("open chain has no left endpoint")
            open_word, end = _walk(nb, nb[LEFT_END], lambda v: v.name.startswith("dummy"))
            if end != RIGHT_END:
                raise ReconstructionError("open chain does not end at the right endpoint")
            v = nb[LEFT_END]
            while not v.name.startswith("dummy"):
                visited_boxes.add(v.box)
                v = nb[VertexRef(v.name, v.id, _other(v.port), 1)]
        dummies = {v for v in nb if v.name.startswith("dummy")} - {LEFT_END, RIGHT_END}
        if dummies:
            raise ReconstructionError("more than one open chain")
        traces = []
        for box in sorted(term.tn.boxes()):
            if box in visited_boxes or box[0].startswith("dummy"):
                continue
            start = VertexRef(box[0], box[1], "out", 1)
            seen_here = []

            def back_at_start(v, _start=start, _seen=seen_here):
                if _seen and v == _start:
                    return True
                _seen.append(v)
                return False

            word, _ = _walk(nb, start, back_at_start)
            for v in seen_here:
                visited_boxes.add(v.box)
            traces.append(canonical_trace(word))
        traces.sort(key=lambda w: tuple(l.key for l in w))
        terms.append(MomentTerm(term.weight, tuple(traces), open_word))
    return MomentExpression.from_terms(terms)


def multinomial_expectation(s, eps: Sequence[int], names: Sequence[str], usetrace: bool,
                            threads: int | None = None) -> MomentExpression:
    """Haar average of the word (or of its trace) as a symbolic matrix expression."""
    ts, meta = build_word_tn(s, eps, names, usetrace)
    spec = RandomMatrixSpec(UNITARY, [meta.dim], [meta.dim], meta.dim)
    return reconstruct_expression(integrate_haar_unitary(ts, spec, threads), meta)
