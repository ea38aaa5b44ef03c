"""Tensor networks as multigraphs on box decorations.

A decoration is ``VertexRef(name, id, port, leg)``: the ``leg``-th input or
output of copy ``id`` of box ``name``.  A wire joins two decorations.  Names
ending in ``*`` denote the adjoint family of a random unitary.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

from .symbolic import ExprSyntaxError, PoleError, RationalFunction, as_rational, expr_parse

PORTS = ("in", "out")
DUMMY_PREFIX = "dummy-"


class VertexRef(NamedTuple):
    name: str
    id: int
    port: str
    leg: int

    @property
    def box(self) -> tuple[str, int]:
        return (self.name, self.id)

    def is_dummy(self) -> bool:
        return self.name.startswith(DUMMY_PREFIX)

    def to_json(self) -> list:
        return [self.name, self.id, self.port, self.leg]


def make_vertex(name: str, id: int, port: str, leg: int) -> VertexRef:
    if not isinstance(name, str) or not name:
        raise ValueError("vertex name must be a non-empty string")
    if port not in PORTS:
        raise ValueError(f"port must be 'in' or 'out', not {port!r}")
    if isinstance(id, bool) or not isinstance(id, int) or id < 1:
        raise ValueError(f"vertex id must be a positive integer, not {id!r}")
    if isinstance(leg, bool) or not isinstance(leg, int) or leg < 1:
        raise ValueError(f"leg must be a positive integer, not {leg!r}")
    return VertexRef(name, id, port, leg)


def dummy_for(v: VertexRef) -> VertexRef:
    """The fresh endpoint attached to an unwired decoration of a removed box."""
    other = "in" if v.port == "out" else "out"
    return VertexRef(f"{DUMMY_PREFIX}{v.name}-{v.port.upper()}-{v.id}-{v.leg}", 1, other, 1)


Edge = tuple  # tuple[VertexRef, VertexRef], endpoints sorted


def make_edge(a: VertexRef, b: VertexRef) -> Edge:
    if a == b:
        raise ValueError(f"edge joins decoration {a} to itself")
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class TensorNetwork:
    edges: tuple

    def __init__(self, edges: Iterable = ()):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in edges))

    def __iter__(self):
        return iter(self.edges)

    def __len__(self):
        return len(self.edges)

    def decorations(self) -> list[VertexRef]:
        return [v for e in self.edges for v in e]

    def boxes(self) -> set[tuple[str, int]]:
        return {v.box for v in self.decorations()}

    def neighbors(self) -> dict[VertexRef, VertexRef]:
        """Map each decoration to the decoration across its wire (valid networks only)."""
        nb = {}
        for a, b in self.edges:
            nb[a] = b
            nb[b] = a
        return nb

    def to_json(self) -> list:
        return [[a.to_json(), b.to_json()] for a, b in self.edges]


def validate(tn: TensorNetwork) -> list[str]:
    """Describe every violation of the at-most-one-wire-per-decoration rule."""
    violations = []
    seen: dict[VertexRef, int] = {}
    for i, (a, b) in enumerate(tn.edges):
        if a == b:
            violations.append(f"edge {i} joins decoration {tuple(a)} to itself")
        for v in {a, b}:
            if v in seen:
                violations.append(
                    f"decoration {tuple(v)} is used by edges {seen[v]} and {i}")
            else:
                seen[v] = i
    return violations


def canonicalize(tn: TensorNetwork) -> TensorNetwork:
    return TensorNetwork(sorted(make_edge(a, b) for a, b in tn.edges))


@dataclass(frozen=True)
class WeightedTN:
    tn: TensorNetwork
    weight: RationalFunction


class TNSum:
    """A weighted sum of tensor networks with identical canonical terms merged."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = ()):
        merged: dict[TensorNetwork, RationalFunction] = {}
        for term in terms:
            if isinstance(term, WeightedTN):
                tn, w = term.tn, term.weight
            else:
                tn, w = term
            key = canonicalize(tn)
            w = as_rational(w)
            merged[key] = merged[key] + w if key in merged else w
        self.terms = tuple(WeightedTN(tn, w) for tn, w in merged.items() if not w.is_zero())

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "TNSum") -> "TNSum":
        return TNSum(self.terms + other.terms)

    def scaled(self, factor) -> "TNSum":
        factor = as_rational(factor)
        return TNSum(WeightedTN(t.tn, t.weight * factor) for t in self.terms)

    def equals(self, other: "TNSum") -> bool:
        """Same canonical networks with equal weights (order-insensitive)."""
        mine = {t.tn: t.weight for t in self.terms}
        theirs = {t.tn: t.weight for t in other.terms}
        return mine.keys() == theirs.keys() and all(w.equals(theirs[k]) for k, w in mine.items())

    def to_json(self) -> dict:
        return {"networks": [{"edges": t.tn.to_json(), "weight": t.weight.to_text()}
                             for t in self.terms]}

    def __repr__(self):
        return f"TNSum({len(self.terms)} terms)"


def single(edges: Iterable, weight="1") -> TNSum:
    """Convenience constructor for a one-term sum from raw edge tuples."""
    w = expr_parse(weight) if isinstance(weight, str) else as_rational(weight)
    return TNSum([(TensorNetwork(make_edge(VertexRef(*a), VertexRef(*b)) for a, b in edges), w)])


# -- JSON ---------------------------------------------------------------------


class SchemaError(ValueError):
    def __init__(self, message: str, pointer: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _vertex_from_json(obj, ptr: str) -> VertexRef:
    if not isinstance(obj, list) or len(obj) != 4:
        raise SchemaError("vertex must be a list [name, id, port, leg]", ptr)
    name, id_, port, leg = obj
    if not isinstance(name, str) or not name:
        raise SchemaError("vertex name must be a non-empty string", f"{ptr}/0")
    if isinstance(id_, bool) or not isinstance(id_, int) or id_ < 1:
        raise SchemaError("vertex id must be a positive integer", f"{ptr}/1")
    if port not in PORTS:
        raise SchemaError(f"port must be 'in' or 'out', got {port!r}", f"{ptr}/2")
    if isinstance(leg, bool) or not isinstance(leg, int) or leg < 1:
        raise SchemaError("leg must be a positive integer", f"{ptr}/3")
    return VertexRef(name, id_, port, leg)


def tnsum_from_json(data, default_weight: str | None = None) -> TNSum:
    if not isinstance(data, dict) or not isinstance(data.get("networks"), list):
        raise SchemaError("expected an object with a 'networks' list", "")
    terms = []
    for i, net in enumerate(data["networks"]):
        ptr = f"/networks/{i}"
        if not isinstance(net, dict) or not isinstance(net.get("edges"), list):
            raise SchemaError("network must be an object with an 'edges' list", ptr)
        edges = []
        for j, e in enumerate(net["edges"]):
            eptr = f"{ptr}/edges/{j}"
            if not isinstance(e, list) or len(e) != 2:
                raise SchemaError("edge must be a list of two vertices", eptr)
            a = _vertex_from_json(e[0], f"{eptr}/0")
            b = _vertex_from_json(e[1], f"{eptr}/1")
            if a == b:
                raise SchemaError("edge joins a decoration to itself", eptr)
            edges.append(make_edge(a, b))
        tn = TensorNetwork(edges)
        problems = validate(tn)
        if problems:
            raise SchemaError(problems[0], f"{ptr}/edges")
        weight = net.get("weight", default_weight)
        if weight is None:
            raise SchemaError("missing 'weight'", f"{ptr}/weight")
        if isinstance(weight, int) and not isinstance(weight, bool):
            weight = str(weight)
        if not isinstance(weight, str):
            raise SchemaError("weight must be an expression string", f"{ptr}/weight")
        try:
            w = expr_parse(weight)
        except (ExprSyntaxError, PoleError) as exc:
            raise SchemaError(f"bad weight expression: {exc}", f"{ptr}/weight") from exc
        terms.append((tn, w))
    return TNSum(terms)


def load_tnsum(path, default_weight: str | None = None) -> TNSum:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}", "") from exc
    return tnsum_from_json(data, default_weight)


def dumps_tnsum(ts: TNSum) -> str:
    nets = []
    for t in ts.terms:
        edges = ",\n      ".join(json.dumps(e) for e in t.tn.to_json())
        body = f"\n      {edges}\n    " if edges else ""
        nets.append(f'    {{"edges": [{body}], "weight": {json.dumps(t.weight.to_text())}}}')
    inner = ",\n".join(nets)
    return '{"networks": [\n' + inner + "\n]}\n" if nets else '{"networks": []}\n'


def save_tnsum(ts: TNSum, path) -> None:
    Path(path).write_text(dumps_tnsum(ts), encoding="utf-8")


# -- DOT ----------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(ts: TNSum, edge_labels: bool = False) -> str:
    """Render each term as a cluster subgraph; the weight goes in the cluster label."""
    lines = ["graph tensor_networks {", "  node [shape=box];"]
    for k, term in enumerate(ts.terms):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f"    label={_dot_quote('weight: ' + term.weight.to_text())};")
        boxes = sorted(term.tn.boxes())
        for name, id_ in boxes:
            node = _dot_quote(f"t{k}:{name}:{id_}")
            if name.startswith(DUMMY_PREFIX):
                attrs = f"label={_dot_quote(name)}, shape=point, xlabel={_dot_quote(name)}"
            else:
                attrs = f"label={_dot_quote(f'{name}·{id_}')}"
            lines.append(f"    {node} [{attrs}];")
        for a, b in term.tn.edges:
            na = _dot_quote(f"t{k}:{a.name}:{a.id}")
            nb = _dot_quote(f"t{k}:{b.name}:{b.id}")
            attr = f" [label={_dot_quote(f'{a.port}{a.leg}:{b.port}{b.leg}')}]" if edge_labels else ""
            lines.append(f"    {na} -- {nb}{attr};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
