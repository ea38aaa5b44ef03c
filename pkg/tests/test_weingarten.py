import itertools
import json
import math
from fractions import Fraction

import pytest
import sympy

from rtni import cache
from rtni.symbolic import Polynomial, RationalFunction, expr_parse, parse_polynomial, rf_equal
from rtni.symgroup import (
    all_permutations,
    compose,
    cycle_type,
    identity,
    inverse,
    num_cycles,
    partitions,
)
from rtni.weingarten import schur_dim_poly, weingarten, wg_table


def weyl_dimension(lam, m):
    """Dimension of the GL(m) irrep by the product over pairs of rows."""
    rows = list(lam) + [0] * (m - len(lam))
    out = Fraction(1)
    for i, j in itertools.combinations(range(m), 2):
        out *= Fraction(rows[i] - rows[j] + j - i, j - i)
    return out


def gram_inverse(p, m):
    """Inverse of the matrix d^{#(s^-1 t)} over S_p at d = m, exact."""
    perms = all_permutations(p)
    g = sympy.Matrix(len(perms), len(perms),
                     lambda i, j: sympy.Integer(m) ** num_cycles(compose(inverse(perms[i]), perms[j])))
    return perms, g.inv()


# -- examples ------------------------------------------------------------------


def test_p3_table_matches_reference():
    t = wg_table(3, "n")
    assert rf_equal(t[(1, 1, 1)], expr_parse("(n^2 - 2)/(n*(n^4 - 5*n^2 + 4))"))
    assert rf_equal(t[(2, 1)], expr_parse("-1/(n^4 - 5*n^2 + 4)"))
    assert rf_equal(t[(3,)], expr_parse("2/(n*(n^4 - 5*n^2 + 4))"))
    assert t[(1, 1, 1)].to_text() == "(n^2-2)/(n^5-5*n^3+4*n)"


def test_small_tables():
    assert rf_equal(wg_table(1)[(1,)], expr_parse("1/d"))
    t = wg_table(2)
    assert rf_equal(t[(1, 1)], expr_parse("1/(d^2-1)"))
    assert rf_equal(t[(2,)], expr_parse("-1/(d*(d^2-1))"))


def test_weingarten_single_value():
    assert rf_equal(weingarten((2, 2), "d"), wg_table(4)[(2, 2)])
    with pytest.raises(ValueError):
        weingarten((), "d")
    with pytest.raises(ValueError):
        weingarten((1, 2), "d")
    with pytest.raises(ValueError):
        wg_table(0)


def test_schur_dimension_examples():
    assert rf_equal(schur_dim_poly((1,), "s"), expr_parse("s"))
    assert rf_equal(schur_dim_poly((2,), "s"), expr_parse("s*(s+1)/2"))
    assert rf_equal(schur_dim_poly((1, 1), "s"), expr_parse("s*(s-1)/2"))


# -- properties ----------------------------------------------------------------


@pytest.mark.parametrize("p", range(1, 7))
def test_schur_dimension_matches_weyl_product(p):
    for lam in partitions(p):
        poly = schur_dim_poly(lam, "d")
        for m in range(len(lam), len(lam) + 4):
            assert poly.evaluate({"d": m}) == weyl_dimension(lam, m)


@pytest.mark.parametrize("p", range(1, 6))
def test_convolution_inverse(p):
    table = wg_table(p, "s")
    s = Polynomial.symbol("s")
    perms = all_permutations(p)
    e = identity(p)
    for pi in perms:
        total = RationalFunction(0)
        for tau in perms:
            total = total + table[cycle_type(tau)] * s ** num_cycles(compose(inverse(tau), pi))
        assert rf_equal(total, RationalFunction(1 if pi == e else 0))


@pytest.mark.parametrize("p", range(1, 5))
def test_matches_gram_matrix_inverse(p):
    table = wg_table(p)
    for m in (p + 1, p + 3):
        perms, inv = gram_inverse(p, m)
        for i, j in itertools.product(range(len(perms)), repeat=2):
            ct = cycle_type(compose(inverse(perms[i]), perms[j]))
            value = table[ct].evaluate({"d": m})
            assert sympy.Rational(value.numerator, value.denominator) == inv[i, j]


def test_class_function():
    p = 4
    perms, inv = gram_inverse(p, 6)
    by_type = {}
    for i, j in itertools.product(range(len(perms)), repeat=2):
        ct = cycle_type(compose(inverse(perms[i]), perms[j]))
        by_type.setdefault(ct, set()).add(inv[i, j])
    assert all(len(values) == 1 for values in by_type.values())
    assert set(by_type) == set(partitions(p))


@pytest.mark.parametrize("p", range(1, 6))
def test_denominators_have_expected_structure(p):
    bound = parse_polynomial("d") ** p
    for c in range(1, p):
        bound = bound * (parse_polynomial("d^2") - c * c) ** p
    for rf in wg_table(p).entries.values():
        bound.exact_div(rf.den)


def test_leading_order_is_moebius():
    # Wg(sigma) ~ Moeb(sigma) d^(-p-|sigma|): for a p-cycle, (-1)^(p-1) Catalan(p-1) d^(1-2p)
    for p in range(1, 6):
        rf = wg_table(p)[(p,)]
        catalan = math.comb(2 * p - 2, p - 1) // p
        scaled = rf * parse_polynomial("d") ** (2 * p - 1)
        lead = Fraction(scaled.num.leading_coefficient(), scaled.den.leading_coefficient())
        assert scaled.num.degree("d") == scaled.den.degree("d")
        assert lead == (-1) ** (p - 1) * catalan


# -- cache ---------------------------------------------------------------------


def test_cache_round_trip(fresh_cache):
    t = wg_table(4, "k")
    path = cache.table_path("wg", 4)
    rows = json.loads(path.read_text())
    assert {tuple(r[0]) for r in rows} == set(partitions(4))
    assert all("k" not in r[1] + r[2] for r in rows)
    from rtni.weingarten import clear_memo

    clear_memo()
    again = wg_table(4, "k")
    assert again.entries.keys() == t.entries.keys()
    assert all(rf_equal(again[ct], t[ct]) for ct in t.entries)
    assert (cache.table_path("chartab", 4)).is_file()


def test_malformed_cache_is_recomputed(fresh_cache, caplog):
    path = cache.table_path("wg", 2)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text('[[[2], "1", "d"]]')
    with caplog.at_level("WARNING"):
        t = wg_table(2)
    assert rf_equal(t[(1, 1)], expr_parse("1/(d^2-1)"))
    assert "malformed" in caplog.text
    assert len(json.loads(path.read_text())) == 2


def test_unwritable_cache_still_computes(fresh_cache, monkeypatch):
    blocker = fresh_cache / "blocked"
    blocker.write_text("")
    monkeypatch.setenv(cache.ENV_VAR, str(blocker))
    assert rf_equal(wg_table(2)[(2,)], expr_parse("-1/(d^3-d)"))


def test_bundled_tables_cover_p8():
    for p in range(1, 9):
        assert cache.table_path("wg", p, cache.BUNDLED_DIR).is_file()
        assert cache.table_path("chartab", p, cache.BUNDLED_DIR).is_file()
