"""Independent reference computations in sympy.

None of these helpers touch the packed-monomial ring, the windowed series or
the mixed series of the package; they work on plain sympy expressions.
"""

from __future__ import annotations

import sympy as sp

from twobkp.coeffield import Scalar
from twobkp.ring import TPoly


def sym_scalar(s: Scalar):
    return sp.Rational(int(s.re.numerator), int(s.re.denominator)) + sp.I * sp.Rational(
        int(s.im.numerator), int(s.im.denominator)
    )


def from_sym(x) -> Scalar:
    x = sp.nsimplify(sp.expand(x))
    re, im = sp.re(x), sp.im(x)
    return Scalar(f"{sp.Rational(re)}", f"{sp.Rational(im)}")


def tsym(a: int, m: int, copy: int | None = None):
    tag = "" if copy is None else ("p" if copy == 0 else "pp")
    return sp.Symbol(f"t{tag}{a}_{m}")


def tpoly_to_sympy(p: TPoly):
    copies = p.table.copies
    out = 0
    for exps, c in p.monomials():
        term = sym_scalar(c)
        for v, e in exps:
            term *= tsym(v.a, v.m, v.copy if copies == 2 else None) ** e
        out += term
    return sp.expand(out)


def symbol_weight(s: sp.Symbol, N: int) -> int:
    name = s.name.lstrip("tp")
    a, m = (int(x) for x in name.split("_"))
    return m if a == 1 else m * (N - 1)


def weight_truncate(expr, N: int, cap: int):
    expr = sp.expand(expr)
    if expr == 0:
        return sp.Integer(0)
    gens = sorted(expr.free_symbols, key=lambda s: s.name)
    if not gens:
        return expr
    poly = sp.Poly(expr, *gens)
    out = 0
    for monom, c in poly.terms():
        w = sum(e * symbol_weight(g, N) for g, e in zip(gens, monom))
        if w <= cap:
            term = c
            for g, e in zip(gens, monom):
                term *= g ** e
            out += term
    return sp.expand(out)


def omega_oracle(tau_expr, N: int, m: int, cap: int):
    """``Omega_m(tau x tau)`` by direct substitution and series multiplication in sympy."""
    z = sp.Symbol("z")
    h = 2 * N - 2
    names = sorted(tau_expr.free_symbols, key=lambda s: s.name)
    result = 0
    for a, M, sign in ((1, m * h, 1), (2, 2 * m, -1)):
        wa = 1 if a == 1 else N - 1
        sub1, sub2 = {}, {}
        for s in names:
            aa, mm = (int(x) for x in s.name[1:].split("_"))
            sub1[s] = tsym(aa, mm, 0) - (2 * z ** (-mm) / mm if aa == a else 0)
            sub2[s] = tsym(aa, mm, 1) + (2 * z ** (-mm) / mm if aa == a else 0)
        AB = sp.expand(tau_expr.xreplace(sub1) * tau_expr.xreplace(sub2))
        J = cap // wa
        u = sum((tsym(a, k, 0) - tsym(a, k, 1)) * z ** k for k in range(1, J + 1, 2))
        E = 0
        term = sp.Integer(1)
        for n in range(0, J + 1):
            E += term
            term = sp.expand(term * u / (n + 1))
            term = sum(term.coeff(z, j) * z ** j for j in range(0, J + 1))
        E = sp.expand(E)
        coeff = 0
        for j in range(0, J + 1):
            coeff += E.coeff(z, j) * sp.expand(AB).coeff(z, -M - j)
        result += sign * coeff
    return weight_truncate(result, N, cap)


def d_oracle(k: int, expr, N: int, max_index: int):
    """``D_k`` applied by sympy differentiation over all contributing mode pairs."""
    h = 2 * N - 2
    out = sp.Rational(N * (h + 1), 24 * h) * expr if k == 0 else 0

    def J(a, m, f):
        if m < 0:
            return -m * tsym(a, -m) * f
        return 2 * sp.diff(f, tsym(a, m))

    for a, ha in ((1, h), (2, 2)):
        S = k * ha
        bound = max_index + abs(S) + 2
        for m in range(-bound, bound + 1, 1):
            n = S - m
            if m % 2 == 0 or n % 2 == 0:
                continue
            # creation operators to the left
            first, second = (m, n) if m <= n else (n, m)
            out += sp.Rational(1, 4 * ha) * J(a, first, J(a, second, expr))
    return sp.expand(out)


def laurent_at_infinity(expr, z, depth: int):
    """Coefficients ``{e: c}`` of ``expr`` expanded at ``z = oo`` down to ``z^-depth``."""
    w = sp.Symbol("w", positive=True)
    s = sp.series(expr.subs(z, 1 / w), w, 0, depth + 1).removeO()
    s = sp.expand(s)
    out = {}
    for term in sp.Add.make_args(s):
        c, e = term.as_coeff_exponent(w)
        out[-int(e)] = out.get(-int(e), 0) + c
    return {e: sp.nsimplify(c) for e, c in out.items() if c != 0}
