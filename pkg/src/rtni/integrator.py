"""Graphical Weingarten calculus on tensor networks.

For a family ``U`` with ``p`` boxes ``U`` and ``p`` boxes ``U*`` the average
over the Haar measure is the sum over ``(alpha, beta)`` in ``S_p x S_p`` of
the network with every ``U``/``U*`` box removed and rewired, weighted by
``Wg(alpha^-1 beta)``.  Output decorations of the ``i``-th ``U`` box are
joined to input decorations of the ``alpha(i)``-th ``U*`` box, input
decorations to output decorations of the ``beta(i)``-th ``U*`` box.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .symbolic import ONE, Polynomial, RationalFunction, parse_polynomial
from .symgroup import Permutation, all_permutations, relative_cycle_type
from .tn import TensorNetwork, TNSum, VertexRef, WeightedTN, dummy_for, make_edge
from .weingarten import DISK_SYMBOL, wg_table

log = logging.getLogger(__name__)


class IntegrationError(ValueError):
    pass


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.constant(x)
    if isinstance(x, RationalFunction):
        if not x.is_polynomial():
            raise ValueError(f"dimension {x} is not a polynomial")
        return x.num
    return parse_polynomial(str(x))


@dataclass(frozen=True)
class RandomMatrixSpec:
    """A Haar unitary family: leg dimensions of its inputs and outputs and its size.

    ``total_dim`` need not equal the product of the leg dimensions; a smaller
    input space describes an isometry cut from a larger unitary.
    """

    name: str
    in_dims: tuple
    out_dims: tuple
    total_dim: Polynomial

    def __init__(self, name: str, in_dims: Sequence, out_dims: Sequence, total_dim):
        if not name or name.endswith("*"):
            raise ValueError(f"invalid random matrix name {name!r}")
        ins = tuple(_as_poly(x) for x in in_dims)
        outs = tuple(_as_poly(x) for x in out_dims)
        total = _as_poly(total_dim)
        if not ins or not outs:
            raise ValueError("a random matrix needs at least one input and one output leg")
        if any(x.is_zero() for x in ins + outs + (total,)):
            raise ValueError("dimensions must be nonzero")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "in_dims", ins)
        object.__setattr__(self, "out_dims", outs)
        object.__setattr__(self, "total_dim", total)

    @property
    def conj_name(self) -> str:
        return self.name + "*"

    def leg_dim(self, v: VertexRef) -> Polynomial:
        """Dimension at a decoration of a ``U`` or ``U*`` box; the adjoint swaps roles."""
        outward = (v.port == "out") == (v.name == self.name)
        dims = self.out_dims if outward else self.in_dims
        if v.leg > len(dims):
            raise IntegrationError(
                f"leg {v.leg} of {v.name} {v.id} ({v.port}) is out of range; "
                f"{self.name} has {len(dims)} such legs")
        return dims[v.leg - 1]

    def to_json(self) -> dict:
        return {"name": self.name,
                "in_dims": [d.to_text() for d in self.in_dims],
                "out_dims": [d.to_text() for d in self.out_dims],
                "total": self.total_dim.to_text()}

    @classmethod
    def from_json(cls, obj: dict) -> "RandomMatrixSpec":
        return cls(obj["name"], obj["in_dims"], obj["out_dims"], obj["total"])


@dataclass(frozen=True)
class UnitVectorDecl:
    """A fixed unit vector (ket box) and its dual (bra box) with ``legs`` legs."""

    ket_name: str
    bra_name: str
    legs: int

    def __post_init__(self):
        if self.ket_name == self.bra_name:
            raise ValueError("ket and bra names must differ")
        if self.legs < 1:
            raise ValueError("legs must be positive")


def collect_unitary_boxes(tn: TensorNetwork, name: str) -> tuple[list[int], list[int]]:
    """Sorted ids of the ``name`` boxes and of the ``name*`` boxes."""
    u, us = set(), set()
    for v in tn.decorations():
        if v.name == name:
            u.add(v.id)
        elif v.name == name + "*":
            us.add(v.id)
    return sorted(u), sorted(us)


def _box_decorations(spec: RandomMatrixSpec, name: str, id_: int) -> list[VertexRef]:
    nout = len(spec.out_dims) if name == spec.name else len(spec.in_dims)
    nin = len(spec.in_dims) if name == spec.name else len(spec.out_dims)
    return ([VertexRef(name, id_, "out", l) for l in range(1, nout + 1)]
            + [VertexRef(name, id_, "in", l) for l in range(1, nin + 1)])


def remove_and_reconnect(tn: TensorNetwork, spec: RandomMatrixSpec,
                         alpha: Permutation, beta: Permutation,
                         ) -> tuple[TensorNetwork, Polynomial]:
    """One removal: rewire for ``(alpha, beta)`` and return the new network and loop factor."""
    u_ids, s_ids = collect_unitary_boxes(tn, spec.name)
    p = len(alpha)
    if len(u_ids) != p or len(s_ids) != p or len(beta) != p:
        raise IntegrationError(
            f"need {p} boxes of {spec.name} and of {spec.conj_name}; "
            f"found {len(u_ids)} and {len(s_ids)}")
    family = (spec.name, spec.conj_name)
    for v in tn.decorations():
        if v.name in family:
            spec.leg_dim(v)  # range check

    removed = set()
    for id_ in u_ids:
        removed.update(_box_decorations(spec, spec.name, id_))
    for id_ in s_ids:
        removed.update(_box_decorations(spec, spec.conj_name, id_))

    nb = tn.neighbors()
    kept = [e for e in tn.edges if e[0] not in removed and e[1] not in removed]
    for r in removed:
        if r not in nb:
            d = dummy_for(r)
            nb[r] = d
            nb[d] = r

    link: dict[VertexRef, VertexRef] = {}
    for i, uid in enumerate(u_ids):
        a = s_ids[alpha[i] - 1]
        b = s_ids[beta[i] - 1]
        for l in range(1, len(spec.out_dims) + 1):
            x, y = VertexRef(spec.name, uid, "out", l), VertexRef(spec.conj_name, a, "in", l)
            link[x], link[y] = y, x
        for l in range(1, len(spec.in_dims) + 1):
            x, y = VertexRef(spec.name, uid, "in", l), VertexRef(spec.conj_name, b, "out", l)
            link[x], link[y] = y, x

    visited: set[VertexRef] = set()
    loop_factor = ONE

    def follow(start: VertexRef, via_wire: bool):
        """Walk from ``start`` alternating wires and links; None when the chain closes."""
        cur = start
        while True:
            nxt = nb[cur] if via_wire else link[cur]
            if nxt == start:
                return None
            if nxt not in removed:
                return nxt
            visited.add(nxt)
            cur = nxt
            via_wire = not via_wire

    for r in sorted(removed):
        if r in visited:
            continue
        visited.add(r)
        end1 = follow(r, True)
        if end1 is None:
            chain = [r]
            cur, via_wire = r, True
            while True:
                cur = nb[cur] if via_wire else link[cur]
                via_wire = not via_wire
                if cur == r:
                    break
                chain.append(cur)
            dims = {spec.leg_dim(v) for v in chain}
            if len(dims) != 1:
                raise IntegrationError(
                    "inconsistent dimensions along a closed chain through "
                    + ", ".join(str(tuple(v)) for v in chain))
            loop_factor = loop_factor * dims.pop()
            continue
        end2 = follow(r, False)
        kept.append(make_edge(end1, end2))
    return TensorNetwork(sorted(kept)), loop_factor


@lru_cache(maxsize=256)
def _wg_values(p: int, total: Polynomial) -> dict:
    table = wg_table(p, DISK_SYMBOL)
    sub = RationalFunction(total)
    return {ct: rf.substitute(DISK_SYMBOL, sub) for ct, rf in table.entries.items()}


def graph_expansion(term: WeightedTN, spec: RandomMatrixSpec, threads: int | None = None,
                    ) -> list[tuple[Permutation, Permutation, TensorNetwork, RationalFunction]]:
    """All ``(alpha, beta)`` removals of one balanced term, before merging.

    Pairs are in lexicographic order of their one-line notation; with
    ``threads`` the removals run concurrently and are collected in that order.
    """
    u_ids, s_ids = collect_unitary_boxes(term.tn, spec.name)
    p = len(u_ids)
    if p != len(s_ids):
        return []
    if p == 0:
        return [((), (), term.tn, term.weight)]
    wg = _wg_values(p, spec.total_dim)
    perms = all_permutations(p)
    pairs = [(a, b) for a in perms for b in perms]

    def removal(ab):
        return remove_and_reconnect(term.tn, spec, ab[0], ab[1])

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(removal, pairs))
    else:
        results = [removal(ab) for ab in pairs]

    factors: dict = {}
    out = []
    for (a, b), (tn2, loops) in zip(pairs, results):
        key = (loops, relative_cycle_type(a, b))
        if key not in factors:
            factors[key] = term.weight * RationalFunction(loops) * wg[key[1]]
        out.append((a, b, tn2, factors[key]))
    return out


def integrate_haar_unitary(ts: TNSum, spec: RandomMatrixSpec, threads: int | None = None) -> TNSum:
    """Average every term of ``ts`` over the Haar-random family ``spec``."""
    out = []
    for term in ts:
        for _, _, tn2, w in graph_expansion(term, spec, threads):
            out.append((tn2, w))
    return TNSum(out)


def integrate_all(ts: TNSum, specs: Sequence[RandomMatrixSpec], threads: int | None = None) -> TNSum:
    """Integrate independent families one after another, left to right."""
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ValueError("random matrix names must be distinct")
    for spec in specs:
        ts = integrate_haar_unitary(ts, spec, threads)
    return ts


# -- fixed unit vectors -------------------------------------------------------


def _components(tn: TensorNetwork) -> list[tuple[set, list]]:
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in tn.edges:
        ra, rb = find(a.box), find(b.box)
        if ra != rb:
            parent[ra] = rb
    groups: dict = {}
    for e in tn.edges:
        root = find(e[0].box)
        boxes, edges = groups.setdefault(root, (set(), []))
        boxes.update((e[0].box, e[1].box))
        edges.append(e)
    return list(groups.values())


def _is_unit_pair(boxes: set, edges: list, decl: UnitVectorDecl) -> bool:
    if len(boxes) != 2 or len(edges) != decl.legs:
        return False
    names = sorted(name for name, _ in boxes)
    if names != sorted((decl.ket_name, decl.bra_name)):
        return False
    legs = set()
    for a, b in edges:
        ket, bra = (a, b) if a.name == decl.ket_name else (b, a)
        if ket.port != "out" or bra.port != "in" or ket.leg != bra.leg:
            return False
        legs.add(ket.leg)
    return legs == set(range(1, decl.legs + 1))


def eliminate_unit_vector_pairs(ts: TNSum, decls: Iterable[UnitVectorDecl]) -> TNSum:
    """Drop components that are a fixed unit vector contracted with its own dual."""
    decls = list(decls)
    out = []
    for term in ts:
        keep = []
        for boxes, edges in _components(term.tn):
            if not any(_is_unit_pair(boxes, edges, d) for d in decls):
                keep.extend(edges)
        out.append((TensorNetwork(keep), term.weight))
    return TNSum(out)


# -- random tensor network states on graphs ----------------------------------


def _sorted_vertices(vs):
    try:
        return sorted(vs)
    except TypeError:
        return sorted(vs, key=str)


def build_tn_from_graph(graph: Iterable, marginal: Iterable = (), s: str = "d",
                        vertices: Iterable = ()):
    """Networks for ``Tr[rho x rho]`` and ``Tr[rho_A^2]`` of a random graph state.

    Each vertex ``x`` of degree ``g`` carries ``U{x}|0>`` on ``g + 1`` legs of
    dimension ``s`` (leg 1 dangling, legs ``2..g+1`` bonds to the sorted
    neighbours); the fixed vector is the box ``Z{x}`` and its dual ``Z{x}*``.
    Bonds are contracted with maximally entangled bras whose ``s^-1/2``
    normalizations give the initial weight ``s^(-2|E|)``.

    Returns ``(z_empty, z_marginal, unit_vector_decls, random_matrix_specs)``.
    """
    edges = []
    seen = set()
    for pair in graph:
        x, y = pair
        if x == y:
            raise ValueError(f"self-loop at vertex {x!r}")
        key = frozenset((x, y))
        if key in seen:
            raise ValueError(f"repeated edge {x!r}-{y!r}")
        seen.add(key)
        edges.append((x, y))
    verts = set(vertices) | {v for e in edges for v in e}
    marginal = set(marginal)
    if not marginal <= verts:
        raise ValueError(f"marginal vertices {sorted(marginal - verts, key=str)} not in graph")
    order = _sorted_vertices(verts)
    nbrs = {x: [] for x in order}
    for x, y in edges:
        nbrs[x].append(y)
        nbrs[y].append(x)
    for x in order:
        nbrs[x] = _sorted_vertices(nbrs[x])

    def bond_leg(x, y):
        return 2 + nbrs[x].index(y)

    common = []
    specs, decls = [], []
    for x in order:
        u, z = f"U{x}", f"Z{x}"
        legs = 1 + len(nbrs[x])
        specs.append(RandomMatrixSpec(u, [s] * legs, [s] * legs, Polynomial.symbol(s) ** legs))
        decls.append(UnitVectorDecl(z, z + "*", legs))
        for c in (1, 2):
            for l in range(1, legs + 1):
                common.append(make_edge(VertexRef(z, c, "out", l), VertexRef(u, c, "in", l)))
                common.append(make_edge(VertexRef(u + "*", c, "out", l), VertexRef(z + "*", c, "in", l)))
    for x, y in edges:
        ux, uy = f"U{x}", f"U{y}"
        lx, ly = bond_leg(x, y), bond_leg(y, x)
        for c in (1, 2):
            common.append(make_edge(VertexRef(ux, c, "out", lx), VertexRef(uy, c, "out", ly)))
            common.append(make_edge(VertexRef(ux + "*", c, "in", lx), VertexRef(uy + "*", c, "in", ly)))

    def dangling(swap: set):
        out = []
        for x in order:
            u = f"U{x}"
            for c in (1, 2):
                c2 = 3 - c if x in swap else c
                out.append(make_edge(VertexRef(u, c, "out", 1), VertexRef(u + "*", c2, "in", 1)))
        return out

    weight = RationalFunction(1, Polynomial.symbol(s) ** (2 * len(edges)))
    z_empty = TNSum([(TensorNetwork(common + dangling(set())), weight)])
    z_marginal = TNSum([(TensorNetwork(common + dangling(marginal)), weight)])
    return z_empty, z_marginal, decls, specs


def graph_partition_functions(graph, marginal=(), s: str = "d", vertices=(), threads=None):
    """Run the full pipeline and return the scalar ``(Z_empty, Z_marginal)``."""
    z0, za, decls, specs = build_tn_from_graph(graph, marginal, s, vertices)
    results = []
    for ts in (z0, za):
        ts = eliminate_unit_vector_pairs(integrate_all(ts, specs, threads), decls)
        results.append(scalar_value(ts))
    return tuple(results)


def scalar_value(ts: TNSum) -> RationalFunction:
    """The weight of a sum whose every term is the empty network."""
    total = RationalFunction()
    for t in ts:
        if len(t.tn):
            raise IntegrationError("sum still contains non-scalar tensor networks")
        total = total + t.weight
    return total
