"""Numeric oracle: Haar sampling, dense contraction and Monte-Carlo checks.

Box tensors are stored with their output legs first, then their input
legs.  A conjugate box ``name*`` is the adjoint of ``name``: entrywise
conjugate with the roles of inputs and outputs exchanged.  A wire is a
Kronecker delta between its two endpoints whatever their ports.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
import opt_einsum

from .integrator import RandomMatrixSpec
from .tn import TensorNetwork, TNSum, VertexRef, dummy_for, make_edge

CHUNK = 1024
PROBE_BUDGET = 64


@dataclass(frozen=True)
class DenseTensor:
    """A box tensor; ``data`` has shape (outs..., ins...) after an optional batch axis."""

    data: np.ndarray
    n_out: int
    batched: bool = False

    @classmethod
    def matrix(cls, m) -> "DenseTensor":
        m = np.asarray(m)
        if m.ndim != 2:
            raise ValueError("a matrix box needs a 2-d array")
        return cls(m, 1)

    @property
    def legs(self) -> tuple:
        return self.data.shape[1:] if self.batched else self.data.shape

    @property
    def n_in(self) -> int:
        return len(self.legs) - self.n_out

    def axis(self, port: str, leg: int) -> int:
        count = self.n_out if port == "out" else self.n_in
        if not 1 <= leg <= count:
            raise ValueError(f"leg {leg} out of range for a box with {count} {port} legs")
        return leg - 1 if port == "out" else self.n_out + leg - 1

    def adjoint(self) -> "DenseTensor":
        k = len(self.legs)
        order = list(range(self.n_out, k)) + list(range(self.n_out))
        if self.batched:
            order = [0] + [i + 1 for i in order]
        return DenseTensor(np.conj(self.data).transpose(order), self.n_in, self.batched)


def _as_tensor(x) -> DenseTensor:
    return x if isinstance(x, DenseTensor) else DenseTensor.matrix(x)


def _haar_batch(rng: np.random.Generator, count: int, m: int) -> np.ndarray:
    z = (rng.standard_normal((count, m, m)) + 1j * rng.standard_normal((count, m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=1, axis2=2)
    return q * (diag / np.abs(diag))[:, None, :]


def sample_haar(m: int, seed=None) -> np.ndarray:
    """One Haar unitary of size ``m`` (Ginibre + QR with the phases of R's diagonal removed)."""
    if m < 1:
        raise ValueError("matrix size must be positive")
    return _haar_batch(np.random.default_rng(seed), 1, m)[0]


def sample_haar_batch(m: int, count: int, seed=None) -> np.ndarray:
    """``count`` independent Haar unitaries of size ``m``, stacked on the first axis."""
    if m < 1 or count < 0:
        raise ValueError("matrix size must be positive and count non-negative")
    return _haar_batch(np.random.default_rng(seed), count, m)


def _resolve(assignment: Mapping, box: tuple) -> DenseTensor:
    name, id_ = box
    for key in (box, name):
        if key in assignment:
            return _as_tensor(assignment[key])
    if name.endswith("*"):
        return _resolve(assignment, (name[:-1], id_)).adjoint()
    raise KeyError(f"no tensor assigned to box {name} {id_}")


def _contract(tn: TensorNetwork, tensors: Mapping[tuple, DenseTensor]):
    """Contract a closed network; returns a scalar, or a vector over the batch axis."""
    labels = {box: [None] * len(t.legs) for box, t in tensors.items()}
    for label, (a, b) in enumerate(tn.edges):
        dims = []
        for v in (a, b):
            if v.box not in tensors:
                raise KeyError(f"no tensor assigned to box {v.name} {v.id}")
            t = tensors[v.box]
            ax = t.axis(v.port, v.leg)
            labels[v.box][ax] = label
            dims.append(t.legs[ax])
        if dims[0] != dims[1]:
            raise ValueError(f"dimension mismatch on wire {tuple(a)} - {tuple(b)}: {dims[0]} vs {dims[1]}")
    batch = len(tn.edges)
    args = []
    batched = False
    for box in sorted(tensors):
        t, ls = tensors[box], labels[box]
        open_axes = [i for i, l in enumerate(ls) if l is None]
        if open_axes:
            raise ValueError(f"box {box[0]} {box[1]} has open decorations")
        if t.batched:
            batched = True
            ls = [batch] + ls
        args += [t.data, ls]
    if not args:
        return 1.0 + 0j
    args.append([batch] if batched else [])
    return opt_einsum.contract(*args)


def evaluate_tn_numeric(tn: TensorNetwork, assignment: Mapping) -> complex:
    """Full contraction of a closed network; ``assignment`` maps names or (name, id) to tensors."""
    tensors = {box: _resolve(assignment, box) for box in tn.boxes()}
    return complex(_contract(tn, tensors))


# -- Monte-Carlo comparison ---------------------------------------------------


@dataclass
class McReport:
    samples: int
    mean: complex
    stderr: float
    symbolic_value: complex
    z_score: float
    probes: int = 1
    worst_probe: tuple = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "mean": [self.mean.real, self.mean.imag],
            "stderr": self.stderr,
            "symbolic_value": [self.symbolic_value.real, self.symbolic_value.imag],
            "z_score": self.z_score,
            "probes": self.probes,
            "worst_probe": list(self.worst_probe),
        }


def _eval_dim(poly, dims: Mapping[str, int]) -> int:
    value = poly.evaluate({k: Fraction(v) for k, v in dims.items()})
    if value.denominator != 1 or value < 1:
        raise ValueError(f"dimension {poly.to_text()} is not a positive integer at {dict(dims)}")
    return int(value)


def _family_tensor(u: np.ndarray, spec: RandomMatrixSpec, dims: Mapping[str, int]) -> DenseTensor:
    outs = [_eval_dim(x, dims) for x in spec.out_dims]
    ins = [_eval_dim(x, dims) for x in spec.in_dims]
    rows, cols = math.prod(outs), math.prod(ins)
    if rows > u.shape[-1] or cols > u.shape[-1]:
        raise ValueError(f"leg dimensions of {spec.name} exceed its total dimension")
    block = u[:, :rows, :cols]
    return DenseTensor(block.reshape((u.shape[0], *outs, *ins)), len(outs), batched=True)


def _closing_edges(tn: TensorNetwork, shapes: Mapping[tuple, tuple]) -> list:
    """Wire every unwired decoration of a known box to its own dummy endpoint."""
    wired = set(tn.decorations())
    extra = []
    for box, (n_out, n_in) in shapes.items():
        for port, count in (("out", n_out), ("in", n_in)):
            for leg in range(1, count + 1):
                v = VertexRef(box[0], box[1], port, leg)
                if v not in wired:
                    extra.append(make_edge(v, dummy_for(v)))
    return extra


def _box_shapes(tn: TensorNetwork, fixed: Mapping, specs: Sequence[RandomMatrixSpec]) -> dict:
    """(number of out legs, number of in legs) for every non-dummy box."""
    by_name = {s.name: s for s in specs}
    shapes = {}
    for box in tn.boxes():
        name = box[0]
        if name.startswith("dummy"):
            continue
        base = name[:-1] if name.endswith("*") else name
        if base in by_name:
            spec = by_name[base]
            shape = (len(spec.out_dims), len(spec.in_dims))
            shapes[box] = shape[::-1] if name.endswith("*") else shape
        else:
            t = _resolve(fixed, box)
            shapes[box] = (t.n_out, t.n_in)
    return shapes


def _dummy_dims(tn: TensorNetwork, tensors: Mapping[tuple, DenseTensor]) -> dict:
    dims = {}
    for a, b in tn.edges:
        for d, other in ((a, b), (b, a)):
            if d.name.startswith("dummy") and not other.name.startswith("dummy"):
                t = tensors[other.box]
                dims[d.box] = t.legs[t.axis(other.port, other.leg)]
    return dims


def _probe_tensor(dummy: VertexRef, dim: int, index: int) -> DenseTensor:
    e = np.zeros(dim)
    e[index] = 1.0
    return DenseTensor(e, 1 if dummy.port == "out" else 0)


def _dummy_vertices(tn: TensorNetwork) -> dict:
    return {v.box: v for v in tn.decorations() if v.name.startswith("dummy")}


def _sample_chunk(seed, chunk: int, count: int, specs, dims) -> dict:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    out = {}
    for spec in specs:
        m = _eval_dim(spec.total_dim, dims)
        out[spec.name] = _family_tensor(_haar_batch(rng, count, m), spec, dims)
    return out


def mc_check(original: TNSum, specs: Sequence[RandomMatrixSpec], numeric_dims: Mapping[str, int],
             symbolic_result: TNSum, fixed_boxes: Mapping, samples: int, seed: int = 0,
             threads: int | None = None, probe_budget: int = PROBE_BUDGET) -> McReport:
    """Compare the Monte-Carlo mean of ``original`` with ``symbolic_result``.

    Open legs are probed with standard basis vectors: every unwired leg gets a
    dummy endpoint named as the integrator would name it, and each dummy is
    assigned a basis vector.  The report is for the probe with the largest
    z-score.  Samples are drawn in fixed-size chunks seeded from
    ``(seed, chunk index)``, so results do not depend on ``threads``.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    dims = dict(numeric_dims)
    fixed = dict(fixed_boxes)

    closed_orig, closed_res = [], []
    for ts, bucket in ((original, closed_orig), (symbolic_result, closed_res)):
        for term in ts:
            shapes = _box_shapes(term.tn, fixed, specs)
            tn = TensorNetwork(term.tn.edges + tuple(_closing_edges(term.tn, shapes)))
            w = term.weight.evaluate({k: Fraction(v) for k, v in dims.items()})
            bucket.append((tn, complex(w)))

    names = {s.name for s in specs}
    fixed_tensors = {}
    for tn, _ in closed_orig + closed_res:
        for box in tn.boxes():
            base = box[0][:-1] if box[0].endswith("*") else box[0]
            if not box[0].startswith("dummy") and base not in names:
                fixed_tensors[box] = _resolve(fixed, box)

    # dimensions of dummies come from the boxes they are wired to
    probe_dims: dict = {}
    shape_only = {s.name: _family_tensor(np.zeros((1, *[_eval_dim(s.total_dim, dims)] * 2)), s, dims)
                  for s in specs}
    for tn, _ in closed_orig + closed_res:
        tensors = dict(fixed_tensors)
        for box in tn.boxes():
            base = box[0][:-1] if box[0].endswith("*") else box[0]
            if base in names:
                t = shape_only[base]
                t = DenseTensor(t.data[0], t.n_out)
                tensors[box] = t.adjoint() if box[0].endswith("*") else t
        probe_dims.update(_dummy_dims(tn, tensors))
    dummy_vs = {}
    for tn, _ in closed_orig + closed_res:
        dummy_vs.update(_dummy_vertices(tn))
    dummies = sorted(dummy_vs)
    missing = [d for d in dummies if d not in probe_dims]
    if missing:
        raise ValueError(f"cannot infer the dimension of dummy {missing[0][0]}")

    all_probes = list(itertools.product(*(range(probe_dims[d]) for d in dummies)))
    if len(all_probes) > probe_budget:
        pick = np.random.default_rng(seed).choice(len(all_probes), probe_budget, replace=False)
        all_probes = [all_probes[i] for i in sorted(pick)]

    n_chunks = -(-samples // CHUNK)
    sizes = [min(CHUNK, samples - c * CHUNK) for c in range(n_chunks)]

    def run_chunk(c):
        fam = _sample_chunk(seed, c, sizes[c], specs, dims)
        rows = np.zeros((len(all_probes), sizes[c]), dtype=complex)
        for p, probe in enumerate(all_probes):
            probes = {d: _probe_tensor(dummy_vs[d], probe_dims[d], i) for d, i in zip(dummies, probe)}
            for tn, w in closed_orig:
                tensors = {}
                for box in tn.boxes():
                    base = box[0][:-1] if box[0].endswith("*") else box[0]
                    if box in probes:
                        tensors[box] = probes[box]
                    elif base in names:
                        tensors[box] = fam[base].adjoint() if box[0].endswith("*") else fam[base]
                    else:
                        tensors[box] = fixed_tensors[box]
                rows[p] += w * np.broadcast_to(_contract(tn, tensors), (sizes[c],))
        return rows

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run_chunk, range(n_chunks)))
    else:
        chunks = [run_chunk(c) for c in range(n_chunks)]
    values = np.concatenate(chunks, axis=1)

    worst = None
    for p, probe in enumerate(all_probes):
        probes = {d: _probe_tensor(dummy_vs[d], probe_dims[d], i) for d, i in zip(dummies, probe)}
        symbolic = 0j
        for tn, w in closed_res:
            tensors = {box: probes[box] if box in probes else fixed_tensors[box] for box in tn.boxes()}
            symbolic += w * complex(_contract(tn, tensors))
        x = values[p]
        mean = complex(np.mean(x))
        stderr = float(np.sqrt(np.var(x.real, ddof=1) + np.var(x.imag, ddof=1)) / math.sqrt(samples))
        diff = abs(mean - symbolic)
        if stderr > 0:
            z = diff / stderr
        else:
            z = 0.0 if diff <= 1e-9 * max(1.0, abs(symbolic)) else math.inf
        if worst is None or z > worst.z_score:
            worst = McReport(samples, mean, stderr, symbolic, z, len(all_probes), tuple(probe))
    return worst
