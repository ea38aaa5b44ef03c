"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse or computation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .integrator import (
    IntegrationError,
    RandomMatrixSpec,
    graph_partition_functions,
    integrate_all,
    integrate_haar_unitary,
)
from .moments import ReconstructionError, multinomial_expectation
from .oracle import DenseTensor, mc_check
from .symbolic import ExprSyntaxError, PoleError, log_degree, parse_polynomial
from .symgroup import character_table, partition_key
from .tn import SchemaError, TNSum, dumps_tnsum, load_tnsum, to_dot
from .weingarten import wg_table

log = logging.getLogger("rtni")

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_IO = 0, 1, 2, 3
COMPUTE_ERRORS = (ValueError, ArithmeticError, KeyError, IntegrationError, ReconstructionError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _csv(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _poly_list(text: str):
    return [parse_polynomial(x) for x in _csv(text)]


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def load_specs(path: str) -> list[RandomMatrixSpec]:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}", "") from exc
    if not isinstance(data, list):
        raise SchemaError("expected a list of random matrix specs", "")
    specs = []
    for i, obj in enumerate(data):
        ptr = f"/{i}"
        if not isinstance(obj, dict):
            raise SchemaError("spec must be an object", ptr)
        for key in ("name", "in_dims", "out_dims", "total"):
            if key not in obj:
                raise SchemaError(f"missing {key!r}", ptr)
        if not isinstance(obj["in_dims"], list) or not isinstance(obj["out_dims"], list):
            raise SchemaError("in_dims and out_dims must be lists of expressions", ptr)
        try:
            specs.append(RandomMatrixSpec(
                obj["name"],
                [parse_polynomial(str(x)) for x in obj["in_dims"]],
                [parse_polynomial(str(x)) for x in obj["out_dims"]],
                parse_polynomial(str(obj["total"]))))
        except ValueError as exc:
            raise SchemaError(str(exc), ptr) from exc
    return specs


def _parse_dims(text: str) -> dict[str, int]:
    dims = {}
    for item in _csv(text):
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"dimension assignment {item!r} is not of the form name=value")
        dims[name.strip()] = int(value)
    return dims


def _vertex_label(text: str):
    text = text.strip()
    return int(text) if text.lstrip("-").isdigit() else text


def _parse_graph(text: str) -> list[tuple]:
    edges = []
    for item in _csv(text):
        parts = item.split("-")
        if len(parts) != 2 or not all(p.strip() for p in parts):
            raise ValueError(f"edge {item!r} is not of the form a-b")
        edges.append((_vertex_label(parts[0]), _vertex_label(parts[1])))
    return edges


# -- subcommands --------------------------------------------------------------


def cmd_wg(args) -> int:
    table = wg_table(args.p, args.symbol)
    out = {partition_key(ct): rf.to_text() for ct, rf in table.entries.items()}
    _emit(_json_text(out), None)
    return EXIT_OK


def cmd_char_table(args) -> int:
    _emit(_json_text(character_table(args.p).to_json()), None)
    return EXIT_OK


def cmd_integrate(args) -> int:
    ts = load_tnsum(args.input, args.default_weight)
    spec = RandomMatrixSpec(args.var, _poly_list(args.in_dims), _poly_list(args.out_dims),
                            parse_polynomial(args.total))
    _emit(dumps_tnsum(integrate_haar_unitary(ts, spec, args.threads)), args.output)
    return EXIT_OK


def cmd_integrate_all(args) -> int:
    ts = load_tnsum(args.input, args.default_weight)
    specs = load_specs(args.specs)
    _emit(dumps_tnsum(integrate_all(ts, specs, args.threads)), args.output)
    return EXIT_OK


def cmd_moments(args) -> int:
    expr = multinomial_expectation(parse_polynomial(args.dim), [int(e) for e in _csv(args.eps)],
                                   _csv(args.names), args.trace, args.threads)
    _emit(expr.to_text() + "\n", None)
    return EXIT_OK


def cmd_viz(args) -> int:
    ts = load_tnsum(args.input, args.default_weight)
    _emit(to_dot(ts, args.edge_labels), args.output)
    return EXIT_OK


def cmd_holographic(args) -> int:
    graph = _parse_graph(args.graph)
    marginal = [_vertex_label(x) for x in _csv(args.marginal)]
    vertices = [_vertex_label(x) for x in _csv(args.vertices)]
    z0, za = graph_partition_functions(graph, marginal, args.symbol, vertices, args.threads)
    lines = [
        f"Z_empty = {z0.to_text()}",
        f"Z_A = {za.to_text()}",
        f"log_degree(Z_empty) = {log_degree(z0, args.symbol)}",
        f"log_degree(Z_A) = {log_degree(za, args.symbol)}",
    ]
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def _fixed_leg_dims(ts: TNSum, specs, dims) -> dict:
    """Dimensions of deterministic-box decorations, propagated along wires from random boxes."""
    by_name = {s.name: s for s in specs}
    known = {}
    for term in ts:
        for v in term.tn.decorations():
            base = v.name[:-1] if v.name.endswith("*") else v.name
            if base in by_name:
                known[v] = int(by_name[base].leg_dim(v).evaluate(dims))
    changed = True
    while changed:
        changed = False
        for term in ts:
            for a, b in term.tn.edges:
                for x, y in ((a, b), (b, a)):
                    if x in known and y not in known:
                        known[y] = known[x]
                        changed = True
    return known


def _random_fixed_boxes(ts: TNSum, specs, dims, seed: int) -> dict:
    names = {s.name for s in specs}
    leg_dims = _fixed_leg_dims(ts, specs, dims)
    layout: dict = {}
    for term in ts:
        for v in term.tn.decorations():
            base = v.name[:-1] if v.name.endswith("*") else v.name
            if base in names or v.name.startswith("dummy"):
                continue
            if v.name.endswith("*"):
                raise ValueError(f"deterministic box {v.name} must not use the adjoint suffix")
            entry = layout.setdefault(v.name, {"out": {}, "in": {}})
            if v not in leg_dims:
                raise ValueError(f"cannot infer the dimension of {tuple(v)}")
            entry[v.port][v.leg] = leg_dims[v]
    rng = np.random.default_rng([seed, 1])
    fixed = {}
    for name in sorted(layout):
        outs, ins = layout[name]["out"], layout[name]["in"]
        for port, legs in (("out", outs), ("in", ins)):
            if legs and sorted(legs) != list(range(1, max(legs) + 1)):
                raise ValueError(f"box {name} has gaps in its {port} legs")
        shape = [outs[l] for l in sorted(outs)] + [ins[l] for l in sorted(ins)]
        data = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        fixed[name] = DenseTensor(data, len(outs))
    return fixed


def cmd_check(args) -> int:
    ts = load_tnsum(args.input, args.default_weight)
    specs = load_specs(args.specs)
    dims = _parse_dims(args.dims)
    fixed = _random_fixed_boxes(ts, specs, dims, args.seed)
    result = integrate_all(ts, specs, args.threads)
    report = mc_check(ts, specs, dims, result, fixed, args.samples, args.seed, args.threads)
    _emit(_json_text(report.to_json()), None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rtni", description="Symbolic integration of tensor networks over Haar unitaries.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def threads(p):
        p.add_argument("--threads", type=int, default=None, help="worker threads (output is unchanged)")

    def default_weight(p):
        p.add_argument("--default-weight", nargs="?", const="1", default=None, metavar="EXPR",
                       help="weight for networks without one (bare flag means 1)")

    p = sub.add_parser("wg", help="print the Weingarten table for S_p")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--symbol", default="d")
    p.set_defaults(func=cmd_wg)

    p = sub.add_parser("char-table", help="print the character table of S_p")
    p.add_argument("-p", type=int, required=True)
    p.set_defaults(func=cmd_char_table)

    p = sub.add_parser("integrate", help="integrate one Haar unitary family")
    p.add_argument("--input", required=True)
    p.add_argument("--var", required=True, help="name of the random unitary")
    p.add_argument("--in-dims", required=True, help="comma-separated input leg dimensions")
    p.add_argument("--out-dims", required=True, help="comma-separated output leg dimensions")
    p.add_argument("--total", required=True, help="Weingarten dimension")
    p.add_argument("--output")
    default_weight(p)
    threads(p)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("integrate-all", help="integrate several independent families")
    p.add_argument("--input", required=True)
    p.add_argument("--specs", required=True)
    p.add_argument("--output")
    default_weight(p)
    threads(p)
    p.set_defaults(func=cmd_integrate_all)

    p = sub.add_parser("moments", help="Haar average of X1 U1 ... Xn Un")
    p.add_argument("--dim", required=True)
    p.add_argument("--eps", required=True, help="codes 1=U, 2=U*, 3=U^T, 4=conj(U)")
    p.add_argument("--names", required=True)
    p.add_argument("--trace", action="store_true")
    threads(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("viz", help="export networks as DOT")
    p.add_argument("--input", required=True)
    p.add_argument("--edge-labels", action="store_true")
    p.add_argument("--output")
    default_weight(p)
    p.set_defaults(func=cmd_viz)

    p = sub.add_parser("holographic", help="Renyi-2 partition functions of a random graph state")
    p.add_argument("--graph", required=True, help='edge list such as "1-2,2-3,3-1"')
    p.add_argument("--marginal", default="")
    p.add_argument("--vertices", default="", help="extra (isolated) vertices")
    p.add_argument("--symbol", default="d")
    threads(p)
    p.set_defaults(func=cmd_holographic)

    p = sub.add_parser("check", help="Monte-Carlo check of an integration")
    p.add_argument("--input", required=True)
    p.add_argument("--specs", required=True)
    p.add_argument("--dims", required=True, help="assignments such as n=2,k=3")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    default_weight(p)
    threads(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"rtni: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SchemaError, ExprSyntaxError, PoleError) as exc:
        print(f"rtni: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except COMPUTE_ERRORS as exc:
        print(f"rtni: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
