"""Acceptance criteria, one check per criterion, each with its time limit.

Run under pytest (one line per criterion in the terminal summary) or
directly with ``python tests/test_acceptance.py``.
"""
import itertools
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from networks import (  # noqa: E402
    CHANNEL_OVERLAP_TEXT,
    CHANNEL_SPEC,
    D_SPEC,
    PARTIAL_TRACE_SPEC,
    TRIANGLE_Z_12,
    TRIANGLE_Z_EMPTY,
    channel_overlap,
    double_twirl,
    partial_trace,
    twirl,
    twirl_open,
)
from rtni import cache  # noqa: E402
from rtni.integrator import (  # noqa: E402
    graph_expansion,
    graph_partition_functions,
    integrate_haar_unitary,
    scalar_value,
)
from rtni.moments import Letter, MomentExpression, MomentTerm, multinomial_expectation  # noqa: E402
from rtni.oracle import DenseTensor, mc_check  # noqa: E402
from rtni.symbolic import (  # noqa: E402
    Polynomial,
    RationalFunction,
    expr_parse,
    limit_at_infinity,
    log_degree,
    rf_equal,
    rf_substitute,
)
from rtni.symgroup import (  # noqa: E402
    all_permutations,
    character,
    character_table,
    class_size,
    compose,
    cycle_type,
    dim_irrep,
    identity,
    inverse,
    num_cycles,
    partitions,
)
from rtni.tn import TNSum, VertexRef, dumps_tnsum, single, tnsum_from_json  # noqa: E402
from rtni.weingarten import clear_memo, wg_table  # noqa: E402

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # standalone run
    ACCEPTANCE_LINES = []

CRITERIA = {}


def criterion(number, title, limit):
    def register(fn):
        CRITERIA[number] = (title, limit, fn)
        return fn
    return register


def edge_set(tn):
    return frozenset(frozenset(e) for e in tn.edges)


def edges(*pairs):
    return frozenset(frozenset((VertexRef(*a), VertexRef(*b))) for a, b in pairs)


# -- criteria --------------------------------------------------------------------


@criterion(1, "Weingarten tables for p = 1, 2, 3", 1.0)
def weingarten_tables():
    t3 = wg_table(3)
    t2 = wg_table(2)
    yield "p=3 (1,1,1)", rf_equal(t3[(1, 1, 1)], expr_parse("(d^2 - 2)/(d*(d^4 - 5*d^2 + 4))"))
    yield "p=3 (2,1)", rf_equal(t3[(2, 1)], expr_parse("-1/(d^4 - 5*d^2 + 4)"))
    yield "p=3 (3)", rf_equal(t3[(3,)], expr_parse("2/(d*(d^4 - 5*d^2 + 4))"))
    yield "p=1", rf_equal(wg_table(1)[(1,)], expr_parse("1/d"))
    yield "p=2 (1,1)", rf_equal(t2[(1, 1)], expr_parse("1/(d^2-1)"))
    yield "p=2 (2)", rf_equal(t2[(2,)], expr_parse("-1/(d*(d^2-1))"))


@criterion(2, "S3 character table and border-strip recursion", 1.0)
def character_values():
    expected = {"1,1,1|1,1,1": 1, "1,1,1|2,1": -1, "1,1,1|3": 1, "2,1|1,1,1": 2, "2,1|2,1": 0,
                "2,1|3": -1, "3|1,1,1": 1, "3|2,1": 1, "3|3": 1}
    table = character_table(3).to_json()
    for key, value in expected.items():
        yield f"chi({key})", table[key] == value
    yield "chi((5,2,2,1),(5,4,1)) = 0", character((5, 2, 2, 1), (5, 4, 1)) == 0
    lhs = character((5, 2, 2, 1), (3, 2, 2, 2, 1))
    rhs = character((2, 2, 2, 1), (2, 2, 2, 1)) - character((5, 2), (2, 2, 2, 1))
    yield "recursion identity", lhs == rhs


@criterion(3, "convolution inverse for p <= 5", 30.0)
def convolution_inverse():
    s = Polynomial.symbol("d")
    for p in range(1, 6):
        table = wg_table(p)
        perms = all_permutations(p)
        ok = True
        for pi in perms:
            total = RationalFunction(0)
            for tau in perms:
                total = total + table[cycle_type(tau)] * s ** num_cycles(compose(inverse(tau), pi))
            ok &= rf_equal(total, RationalFunction(1 if pi == identity(p) else 0))
        yield f"p={p}", ok


@criterion(4, "twirl, with and without the trace", 1.0)
def twirl_examples():
    out = integrate_haar_unitary(twirl(), D_SPEC)
    yield "one term", len(out) == 1
    yield "weight 1/d", rf_equal(out.terms[0].weight, expr_parse("1/d"))
    yield "two self-loops", edge_set(out.terms[0].tn) == edges(
        (("Y", 1, "out", 1), ("Y", 1, "in", 1)), (("X", 1, "in", 1), ("X", 1, "out", 1)))
    out = integrate_haar_unitary(twirl_open(), D_SPEC)
    yield "open: one term", len(out) == 1
    yield "open: weight 1/d", rf_equal(out.terms[0].weight, expr_parse("1/d"))
    yield "open: Tr Y and dummy wire on X", edge_set(out.terms[0].tn) == edges(
        (("Y", 1, "out", 1), ("Y", 1, "in", 1)), (("X", 1, "in", 1), ("dummy-U*-IN-1-1", 1, "out", 1)))


@criterion(5, "bipartite partial trace", 1.0)
def partial_trace_example():
    out = integrate_haar_unitary(partial_trace(), PARTIAL_TRACE_SPEC)
    yield "one term", len(out) == 1
    yield "weight 1/n", rf_equal(out.terms[0].weight, expr_parse("1/n"))
    yield "edges", edge_set(out.terms[0].tn) == edges(
        (("A", 1, "out", 1), ("A", 1, "in", 1)), (("A", 1, "out", 2), ("A", 1, "in", 2)),
        (("dummy-U-OUT-1-1", 1, "in", 1), ("dummy-U*-IN-1-1", 1, "out", 1)))


@criterion(6, "bipartite twirling", 1.0)
def double_twirl_example():
    out = integrate_haar_unitary(double_twirl(), D_SPEC)
    xid = ((("X", 1, "out", 1), ("X", 1, "in", 1)), (("X", 1, "out", 2), ("X", 1, "in", 2)))
    xflip = ((("X", 1, "out", 1), ("X", 1, "in", 2)), (("X", 1, "out", 2), ("X", 1, "in", 1)))
    did = ((("dummy-U-OUT-1-1", 1, "in", 1), ("dummy-U*-IN-1-1", 1, "out", 1)),
           (("dummy-U-OUT-2-1", 1, "in", 1), ("dummy-U*-IN-2-1", 1, "out", 1)))
    dflip = ((("dummy-U-OUT-1-1", 1, "in", 1), ("dummy-U*-IN-2-1", 1, "out", 1)),
             (("dummy-U-OUT-2-1", 1, "in", 1), ("dummy-U*-IN-1-1", 1, "out", 1)))
    expected = {
        edges(*xid, *did): "1/(-1+d^2)",
        edges(*xid, *dflip): "1/(d-d^3)",
        edges(*xflip, *did): "1/(d-d^3)",
        edges(*xflip, *dflip): "1/(-1+d^2)",
    }
    got = {edge_set(t.tn): t.weight for t in out}
    yield "four terms", len(out) == 4
    yield "wirings", set(got) == set(expected)
    yield "weights", all(k in got and rf_equal(got[k], expr_parse(w)) for k, w in expected.items())


@criterion(7, "conjugate-channel overlap and its limit", 5.0)
def channel_overlap_example():
    value = scalar_value(integrate_haar_unitary(channel_overlap(), CHANNEL_SPEC))
    yield "finite-size value", rf_equal(value, expr_parse(CHANNEL_OVERLAP_TEXT))
    res = limit_at_infinity(rf_substitute(value, "d", expr_parse("t*n*k")), "n")
    yield "finite limit", res.kind == "finite"
    yield "t + (1-t)/k^2", res.kind == "finite" and rf_equal(res.value, expr_parse("t + (1-t)/k^2"))


@criterion(8, "triangle graph partition functions", 30.0)
def triangle_example():
    z0, za = graph_partition_functions([(1, 2), (2, 3), (3, 1)], marginal=[1, 2])
    yield "Z_empty", rf_equal(z0, expr_parse(TRIANGLE_Z_EMPTY))
    yield "Z_{1,2}", rf_equal(za, expr_parse(TRIANGLE_Z_12))
    yield "log_degree 12", log_degree(z0, "d") == 12
    yield "log_degree 13", log_degree(za, "d") == 13


def moment(terms):
    """Build an expression from (coefficient, open word or None, trace words)."""
    def word(text):
        out = []
        for part in text.split("."):
            flipped = part.startswith("T(")
            out.append(Letter(part[2:-1] if flipped else part, flipped))
        return tuple(out)

    from rtni.moments import canonical_trace

    built = []
    for coeff, open_, traces in terms:
        tr = tuple(sorted((canonical_trace(word(w)) for w in traces), key=lambda w: tuple(l.key for l in w)))
        built.append(MomentTerm(expr_parse(coeff), tr, None if open_ is None else word(open_)))
    return MomentExpression.from_terms(built)


@criterion(9, "multinomial moments", 5.0)
def multinomial_examples():
    cases = [
        ("E Tr[X U Y U*]", ([1, 2], ["X", "Y"], True), [("1/d", None, ["X", "Y"])]),
        ("E X U Y U^T", ([1, 3], ["X", "Y"], False), []),
        ("E X U* Y U^T", ([2, 3], ["X", "Y"], False), [("1/d", "X.T(Y)", [])]),
        ("E Tr[X U Y conj(U)]", ([1, 4], ["X", "Y"], True), [("1/d", None, ["X.T(Y)"])]),
        ("E V U W U* X U^T Y conj(U)", ([1, 2, 3, 4], ["V", "W", "X", "Y"], False), [
            ("-1/(4-5*d^2+d^4)", "V.T(Y).X.T(W)", []),
            ("-1/(4-5*d^2+d^4)", "V.T(Y).X", ["W"]),
            ("-1/(4-5*d^2+d^4)", "V.X.T(W)", ["Y"]),
            ("-1/(4-5*d^2+d^4)", "V.X", ["W", "Y"]),
        ]),
    ]
    for name, (eps, names, trace), expected in cases:
        got = multinomial_expectation("d", eps, names, trace)
        yield name, got.equals(moment(expected))


@criterion(10, "Monte-Carlo agreement", 60.0)
def monte_carlo():
    rng = np.random.default_rng(10)

    def cmat(m):
        return rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))

    samples = 10000
    cases = [
        ("twirl d=3", twirl(), D_SPEC, {"d": 3}, {"X": cmat(3), "Y": cmat(3)}),
        ("partial trace n=2 k=3", partial_trace(), PARTIAL_TRACE_SPEC, {"n": 2, "k": 3},
         {"A": DenseTensor(cmat(6).reshape(2, 3, 2, 3), 2)}),
        ("channel overlap n=k=2 d=3", channel_overlap(), CHANNEL_SPEC, {"n": 2, "k": 2, "d": 3}, {}),
    ]
    for name, ts, spec, dims, fixed in cases:
        result = integrate_haar_unitary(ts, spec)
        report = mc_check(ts, [spec], dims, result, fixed, samples=samples, seed=1)
        yield f"{name} (z={report.z_score:.2f})", report.z_score <= 5


@criterion(11, "property suites", 120.0)
def property_suites():
    ok = True
    for p in range(1, 7):
        t = character_table(p)
        parts = partitions(p)
        for lam, mu in itertools.product(parts, repeat=2):
            s = sum(class_size(b) * t[lam, b] * t[mu, b] for b in parts)
            ok &= s == (math.factorial(p) if lam == mu else 0)
    yield "character orthogonality p<=6", ok
    yield "sum of dim^2 = p! for p<=8", all(
        sum(dim_irrep(l) ** 2 for l in partitions(p)) == math.factorial(p) for p in range(1, 9))

    def parallel(p):
        es = []
        for i in range(1, p + 1):
            es += [(("U", i, "out", 1), (f"X{i}", 1, "in", 1)), ((f"Y{i}", 1, "out", 1), ("U", i, "in", 1)),
                   (("U*", i, "out", 1), (f"Y{i}", 1, "in", 1)), ((f"X{i}", 1, "out", 1), ("U*", i, "in", 1))]
        return single(es)

    yield "(p!)^2 pre-merge terms for p<=3", all(
        len(graph_expansion(parallel(p).terms[0], D_SPEC)) == math.factorial(p) ** 2 for p in (1, 2, 3))
    unbalanced = [
        single([(("U", 1, "out", 1), ("X", 1, "in", 1)), (("X", 1, "out", 1), ("U", 1, "in", 1))]),
        single([(("U", 1, "out", 1), ("U", 2, "in", 1)), (("U", 2, "out", 1), ("U*", 1, "in", 1))]),
        single([(("U*", 1, "out", 1), ("U*", 1, "in", 1))]),
    ]
    yield "unbalanced networks vanish", all(len(integrate_haar_unitary(ts, D_SPEC)) == 0 for ts in unbalanced)

    weights = [expr_parse(w) for w in ("1", "-3", "1/d", "(d+1)/(d^2-4)", "k/(d*n)")]
    lin = scale = True
    for w1, w2 in itertools.product(weights, repeat=2):
        a, b = twirl().scaled(w1), double_twirl().scaled(w2)
        lin &= integrate_haar_unitary(a + b, D_SPEC).equals(
            integrate_haar_unitary(a, D_SPEC) + integrate_haar_unitary(b, D_SPEC))
    for w in weights:
        for make, spec in ((double_twirl, D_SPEC), (twirl_open, D_SPEC), (channel_overlap, CHANNEL_SPEC)):
            scale &= integrate_haar_unitary(make().scaled(w), spec).equals(
                integrate_haar_unitary(make(), spec).scaled(w))
    yield "linearity", lin
    yield "scale equivariance", scale

    import json

    nets = [twirl(), double_twirl(), partial_trace(), channel_overlap(),
            integrate_haar_unitary(double_twirl(), D_SPEC), TNSum()]
    yield "JSON round trip", all(
        tnsum_from_json(json.loads(dumps_tnsum(ts))).equals(ts) for ts in nets)

    saved = (os.environ.get(cache.ENV_VAR), cache.BUNDLED_DIR)
    with tempfile.TemporaryDirectory() as tmp:
        try:
            os.environ[cache.ENV_VAR] = tmp
            cache.BUNDLED_DIR = Path(tmp) / "none"
            clear_memo()
            first = wg_table(5)
            written = cache.table_path("wg", 5).is_file()
            clear_memo()
            again = wg_table(5)
            same = first.entries.keys() == again.entries.keys() and all(
                rf_equal(first[ct], again[ct]) for ct in first.entries)
        finally:
            if saved[0] is None:
                os.environ.pop(cache.ENV_VAR, None)
            else:
                os.environ[cache.ENV_VAR] = saved[0]
            cache.BUNDLED_DIR = saved[1]
            clear_memo()
    yield "Wg cache round trip", written and same


# -- runner ------------------------------------------------------------------------


def evaluate(number):
    title, limit, fn = CRITERIA[number]
    start = time.perf_counter()
    checks = list(fn())
    elapsed = time.perf_counter() - start
    failed = [name for name, ok in checks if not ok]
    in_time = elapsed < limit
    passed = not failed and in_time
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}  ({elapsed:.2f}s, limit {limit:g}s)"
    if failed:
        line += "  failed: " + "; ".join(failed)
    if not in_time:
        line += "  over time limit"
    return passed, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    passed, line = evaluate(number)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


if __name__ == "__main__":
    os.environ.setdefault(cache.ENV_VAR, tempfile.mkdtemp(prefix="rtni-acceptance-"))
    results = [evaluate(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
