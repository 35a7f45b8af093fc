from __future__ import annotations

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, strategies as st

from twobkp.coeffield import I, ONE, ZERO, Scalar
from twobkp.ring import (HierarchyParams, LSeries, TPoly, VarId, VVec, WindowError, exp_truncated, residue,
                         shift_substitute, var_table)
from twobkp.ring.mixed import exp_factor

from oracles import tpoly_to_sympy, weight_truncate
from strategies import scalars, tpolys, var


# -- params ---------------------------------------------------------------

@pytest.mark.parametrize("N", [3, 4, 5, 7])
def test_coxeter_numbers(N):
    P = HierarchyParams(N)
    assert (P.h, P.h1, P.h2) == (2 * N - 2, 2 * N - 2, 2)
    assert P.h % 2 == 0 and P.h >= 4
    assert P.var_weight(1, 5) == 5 and P.var_weight(2, 3) == 3 * (N - 1)


def test_params_reject_small_rank_and_even_index():
    with pytest.raises(ValueError):
        HierarchyParams(2)
    with pytest.raises(ValueError):
        VarId(1, 2)
    with pytest.raises(ValueError):
        VarId(3, 1)


# -- TPoly ------------------------------------------------------------------

def test_weight_cap_drops_heavy_terms():
    t = var(3, 2, 3)  # weight 6
    p = (t + var(3, 1, 1)).truncate(5)
    assert p == var(3, 1, 1, cap=5)


def test_exp_zero():
    table = var_table(3)
    assert exp_truncated(TPoly(table, {}, 7)) == TPoly.const(table, 1, 7)


def test_exp_of_product_direct_expansion():
    c = Scalar("2/3", 1)
    u = var(3, 1, 1).mul(var(3, 2, 1)).scale(c).truncate(6)
    e = exp_truncated(u, 6)
    u2 = u.mul(u).truncate(6)
    assert e == (TPoly.const(u.table, 1, 6) + u + u2.scale(Scalar("1/2")))


def test_exp_log_identity():
    t = var(3, 1, 1)
    for cap in (1, 4, 9):
        # log(1 + t) = sum (-1)^{n+1} t^n / n
        log = TPoly(t.table, {}, cap)
        for n in range(1, cap + 1):
            log = log + (t ** n).truncate(cap).scale(Scalar(mpq((-1) ** (n + 1), n)))
        assert exp_truncated(log, cap) == (TPoly.const(t.table, 1) + t).truncate(cap)


def test_exp_rejects_constant():
    with pytest.raises(ValueError):
        exp_truncated(TPoly.const(var_table(3), 1, 4))


@given(tpolys(), tpolys())
def test_product_matches_sympy(p, q):
    prod = p.mul(q)
    assert prod.cap == 6 or prod.cap is None or prod.cap >= 6
    expected = weight_truncate(tpoly_to_sympy(p) * tpoly_to_sympy(q), 3, 6)
    assert sp.expand(tpoly_to_sympy(prod.truncate(6)) - expected) == 0


@given(tpolys(cap=8), tpolys(cap=8))
def test_additive_and_commutative(p, q):
    assert (p + q) == (q + p)
    assert p.mul(q) == q.mul(p)
    assert (p - p).is_zero()


@given(tpolys(cap=9), tpolys(cap=9), st.integers(0, 9))
def test_truncation_commutes_with_product(p, q, c):
    assert p.mul(q).truncate(c) == p.truncate(c).mul(q.truncate(c)).truncate(c)


@given(tpolys(cap=8))
def test_weight_grading_multiplicative(p):
    t = var(3, 2, 1)
    q = p.with_cap(None).mul(t)
    for key in q.terms:
        assert q.table.weight(key) == q.table.weight(key - q.table.unit(VarId(2, 1))) + 2


@given(tpolys(cap=7, constant=ONE))
def test_inverse(p):
    inv = p.inverse()
    assert p.mul(inv).agrees_with(TPoly.const(p.table, 1))


@given(tpolys(cap=7))
def test_json_roundtrip(p):
    assert TPoly.from_json(p.to_json()) == p


def test_product_cap_soundness():
    # known to weight 4 times a polynomial starting at weight 3 is known to weight 7
    a = (TPoly.const(var_table(3), 1) + var(3, 1, 1)).truncate(4)
    b = var(3, 1, 3)
    assert a.mul(b).cap == 7


# -- LSeries ------------------------------------------------------------------

def test_window_unknown_raises():
    s = LSeries({1: ONE, -1: Scalar(2)}, -3, "z")
    assert s.coeff(-3) == ZERO
    with pytest.raises(WindowError):
        s.coeff(-4)


def test_product_window():
    f = LSeries({1: ONE, 0: ONE}, -2, "z")  # known to z^-2
    g = LSeries({2: ONE, -1: Scalar(3)}, -4, "z")
    p = f.mul(g)
    assert p.lo == max(-2 + 2, -4 + 1)


@given(st.lists(scalars(), min_size=6, max_size=6), st.lists(scalars(), min_size=6, max_size=6),
       st.integers(1, 4), st.integers(1, 4))
def test_window_soundness(fc, gc, cut_f, cut_g):
    f_exact = LSeries({2 - i: c for i, c in enumerate(fc)}, None, "z") + LSeries.monomial(3, 1, "z")
    g_exact = LSeries({1 - i: c for i, c in enumerate(gc)}, None, "z") + LSeries.monomial(2, 1, "z")
    f = f_exact.truncate(2 - cut_f)
    g = g_exact.truncate(1 - cut_g)
    p = f.mul(g)
    exact = f_exact.mul(g_exact)
    assert p.agrees_with(exact)
    q = f.inverse()
    assert q.mul(f_exact).agrees_with(LSeries.const(1, "z"))


def test_sqrt_examples():
    assert LSeries.const(1, "z").sqrt_monic() == LSeries.const(1, "z")
    # sqrt(1 + 2u) with u = z^-1
    s = LSeries({0: ONE, -1: Scalar(2)}, -6, "z").sqrt_monic()
    expected = {0: 1, -1: 1, -2: mpq(-1, 2), -3: mpq(1, 2), -4: mpq(-5, 8), -5: mpq(7, 8), -6: mpq(-21, 16)}
    assert s == LSeries({e: Scalar(c) for e, c in expected.items()}, -6, "z")
    assert s.mul(s).agrees_with(LSeries({0: ONE, -1: Scalar(2)}, None, "z"))


def test_sqrt_rejects():
    with pytest.raises(ValueError):
        LSeries({1: ONE}, -4, "z").sqrt_monic()
    with pytest.raises(ValueError):
        LSeries({2: Scalar(2)}, -4, "z").sqrt_monic()


def test_reversion_examples():
    z = LSeries.monomial(1, 1, "z")
    assert z.reversion(depth=5, var="w") == LSeries({1: ONE}, -4, "w")
    a = Scalar("3/2")
    f = LSeries({1: ONE, -1: -a}, None, "z")
    g = f.reversion(depth=8, var="w")
    assert g.coeff(1) == ONE and g.coeff(-1) == a and g.coeff(-3) == -(a * a)
    # composition back gives the identity on the window
    assert f.compose(g).agrees_with(LSeries.monomial(1, 1, "w"))


def test_reversion_coefficients_by_matching():
    # g = w + a/w + b/w^3: f(g) = g - a/g, so b = a^2 from the w^-3 coefficient
    a = Scalar("3/2")
    g = LSeries({1: ONE, -1: -a}, None, "z").reversion(depth=8, var="w")
    w = sp.Symbol("w")
    A = sp.Rational(3, 2)
    ansatz = w + sum(sp.Symbol(f"c{k}") * w ** (-k) for k in (1, 3, 5, 7))
    expr = sp.series((ansatz - A / ansatz).subs(w, 1 / sp.Symbol("u")), sp.Symbol("u"), 0, 8).removeO()
    sol = sp.solve([sp.expand(expr).coeff(sp.Symbol("u"), k) for k in (1, 3, 5, 7)], [sp.Symbol(f"c{k}") for k in (1, 3, 5, 7)], dict=True)[0]
    for k in (1, 3, 5, 7):
        assert g.coeff(-k) == Scalar(str(sol[sp.Symbol(f"c{k}")]))


@given(st.lists(scalars(), min_size=1, max_size=4))
def test_reversion_involution(tail):
    f = LSeries({1: ONE, **{-i: c for i, c in enumerate(tail, start=1)}}, -6, "z")
    g = f.reversion(var="w")
    assert f.compose(g).agrees_with(LSeries.monomial(1, 1, "w"))
    gg = g.reversion(var="z")
    assert gg.agrees_with(f)


def test_reversion_rejects_shape():
    with pytest.raises(ValueError):
        LSeries({2: ONE}, -3, "z").reversion()


def test_residue_examples():
    s = LSeries({1: ONE, 0: Scalar(3), -2: Scalar(5)}, None, "z")
    assert residue(s) == Scalar(3)
    for m in (1, 2):
        assert LSeries.monomial(m * 4, 1, "z").residue() == ZERO
    with pytest.raises(WindowError):
        LSeries({4: ONE}, 1, "z").residue()


@given(st.dictionaries(st.integers(-4, 4), scalars(), max_size=6))
def test_residue_theorem_on_projective_line(coeffs):
    # f(X) dX: Res_0 is the X^-1 coefficient; at infinity substitute X = 1/w
    f = LSeries(coeffs, None, "X")
    res0 = f.shift(1).residue()
    g = LSeries({-e: c for e, c in f.coeffs.items()}, None, "w").shift(-2).scale(-1)
    res_inf = g.shift(1).residue()
    assert res0 + res_inf == ZERO


def test_vvec_components_independent():
    v = VVec(LSeries({0: ONE}, -2, "z1"), LSeries({0: I}, -5, "z2"))
    assert (v + v)[1].lo == -2 and (v + v)[2].lo == -5


def test_lseries_json_roundtrip():
    s = LSeries({2: ONE, -1: Scalar("1/3", -2)}, -3, "z1")
    assert LSeries.from_json(s.to_json()) == s
    assert s.to_json()["window"] == [-3, 2]


# -- mixed series -----------------------------------------------------------

def test_shift_substitute_constant():
    one = TPoly.const(var_table(3), 1, 5)
    s = shift_substitute(one, 1, 1)
    assert s.exponents() == [0] and s.coefficient(0) == one


def test_shift_substitute_linear():
    t = var(3, 1, 1, cap=5)
    s = shift_substitute(t, 1, 1)
    assert s.coefficient(0).agrees_with(t)
    assert s.coefficient(-1).agrees_with(TPoly.const(t.table, -2))


def test_shift_substitute_product():
    p = var(3, 1, 1).mul(var(3, 1, 3)).truncate(8)
    s = shift_substitute(p, 1, 1)
    z = sp.Symbol("z")
    t1, t3 = sp.Symbol("t1_1"), sp.Symbol("t1_3")
    expected = sp.expand((t1 - 2 / z) * (t3 - sp.Rational(2, 3) / z ** 3))
    for e in (0, -1, -3, -4):
        got = tpoly_to_sympy(s.coefficient(e))
        assert sp.expand(got - expected.coeff(z, e)) == 0


def test_shift_substitute_leaves_other_component():
    t = var(3, 2, 1, cap=5)
    s = shift_substitute(t, 1, 1)
    assert s.exponents() == [0]


def test_exp_factor_coefficients():
    table = var_table(3)
    E = exp_factor(table, 1, 5)
    t1, t3, t5 = sp.symbols("t1_1 t1_3 t1_5")
    z = sp.Symbol("z")
    ref = sp.series(sp.exp(t1 * z + t3 * z ** 3 + t5 * z ** 5), z, 0, 6).removeO()
    for k in range(0, 6):
        assert sp.expand(tpoly_to_sympy(E.coefficient(k)) - sp.expand(ref).coeff(z, k)) == 0
