"""Heisenberg modes, the operators D_k and L_k, and the operators ell_k on V.

Bosonic modes act on polynomials in the times by
``J^a_{-m} = m t^a_m`` and ``J^a_m = 2 d/dt^a_m`` (``m > 0`` odd).  Normal
ordering puts annihilators to the right; with odd modes there is no
``m = -m`` pair, so no constant is subtracted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .coeffield import I, ONE, ZERO, Scalar
from .hirota import gamma_apply
from .report import CheckReport
from .ring.lseries import LSeries, VVec
from .ring.params import HierarchyParams, VarId
from .ring.tpoly import MAX_VAR_WEIGHT, TPoly, exp_truncated, var_table

ALL_ELL_TERMS = ("shift", "k_half", "deriv")


@dataclass(frozen=True)
class HeisenbergMode:
    a: int
    m: int

    def __post_init__(self):
        if self.a not in (1, 2) or self.m % 2 == 0:
            raise ValueError("modes have a in {1, 2} and odd index")

    def apply(self, p: TPoly) -> TPoly:
        if self.m < 0:
            return p.mul_var(VarId(self.a, -self.m)).scale(-self.m)
        return p.deriv(VarId(self.a, self.m)).scale(2)


def _has_var(p: TPoly, a: int, m: int) -> bool:
    v = VarId(a, m)
    if v not in p.table.index:
        return False
    s = p.table.shift(v)
    return any((k >> s) & 0xFF for k in p.terms)


def _max_index(p: TPoly, a: int) -> int:
    best = 0
    for v in p.table.vars:
        if v.a == a and v.copy == 0 and v.m > best and _has_var(p, a, v.m):
            best = v.m
    return best


def _deriv(p: TPoly, a: int, m: int) -> TPoly:
    """``d/dt^a_m`` also for variables beyond the table (which cannot occur in ``p``)."""
    v = VarId(a, m)
    if v in p.table.index:
        return p.deriv(v)
    w = p.table.params.var_weight(a, m)
    return TPoly(p.table, {}, None if p.cap is None else p.cap - w)


def _create(p: TPoly, a: int, m: int, out_cap) -> TPoly | None:
    """``t^a_m p``, or None when the product lies entirely above ``out_cap``."""
    P = p.table.params
    w = P.var_weight(a, m)
    if out_cap is not None and w + (p.min_weight() if p.terms else 0) > out_cap:
        return None
    if w > MAX_VAR_WEIGHT:
        raise ValueError(f"t{a}_{m} lies beyond the variable table; lower the cap")
    return p.mul_var(VarId(a, m))


def d_apply(k: int, p: TPoly) -> TPoly:
    """``D_k p`` exactly (the output cap is the input cap lowered by ``k h``)."""
    P = p.table.params
    h = P.h
    out_cap = None if p.cap is None else p.cap - k * h
    res = TPoly(p.table, {}, out_cap)
    if k == 0:
        res = res + p.scale(Scalar(mpq(p.table.N * (h + 1), 24 * h)))
    for a in (1, 2):
        ha = P.h_of(a)
        S = k * ha
        Mx = _max_index(p, a)
        coef = Scalar(mpq(1, 4 * ha))
        bound = Mx + abs(S) + 1
        for m in range(-bound, bound + 1):
            if m % 2 == 0:
                continue
            n = S - m
            if n == 0 or n % 2 == 0:
                continue
            lo_, hi_ = min(m, n), max(m, n)
            if hi_ > 0 and hi_ > Mx:
                continue  # derivative kills p
            if lo_ > 0:
                # both annihilators
                if lo_ > Mx:
                    continue
                term = _deriv(_deriv(p, a, m), a, n).scale(4)
            elif hi_ < 0:
                # both creations
                q = _create(p, a, -n, out_cap)
                q = None if q is None else _create(q, a, -m, out_cap)
                if q is None:
                    continue
                term = q.scale(m * n)
            else:
                q = _deriv(p, a, hi_)
                q = _create(q, a, -lo_, out_cap)
                if q is None:
                    continue
                term = q.scale(-lo_ * 2)
            res = res + term.scale(coef)
    return res.truncate(out_cap) if out_cap is not None else res


def linear_mode_index(k: int, h: int) -> int:
    return 1 + (1 + k) * h


def l_apply(k: int, p: TPoly) -> TPoly:
    """``L_k p = -i d/dt^1_{1+(1+k)h} p + D_k p`` for ``k >= -1``."""
    if k < -1:
        raise ValueError("L_k is posed for k >= -1")
    h = p.table.params.h
    n = linear_mode_index(k, h)
    lin = _deriv(p, 1, n).scale(-I)
    return lin + d_apply(k, p)


def grading_eigenvalue(p: TPoly) -> Scalar | None:
    """If ``p`` is a D_0 eigenvector return its eigenvalue, else None."""
    q = d_apply(0, p)
    c0 = Scalar(mpq(p.table.N * (p.table.params.h + 1), 24 * p.table.params.h))
    vals = set()
    for key, c in p.terms.items():
        vals.add(q.terms.get(key, ZERO) / c)
    if len(vals) != 1:
        return None
    lam = vals.pop()
    return lam if (q - p.scale(lam)).is_zero() else None


def is_scaling_invariant(p: TPoly) -> bool:
    """Invariance under ``t^a_m -> omega^{wt} t^a_m`` with ``omega^(h+1) = 1`` primitive."""
    h = p.table.params.h
    wt = p.table.weight
    return all(wt(k) % (h + 1) == 0 for k in p.terms)


def ell_apply(N: int, k: int, v: VVec, terms=ALL_ELL_TERMS) -> VVec:
    """``ell_k(z) v`` componentwise for rank ``N``.

    ``terms`` selects which of the three pieces (``shift`` for the
    ``-i z^{1+(1+k)h}`` term, ``k_half``, ``deriv``) to include.
    """
    P = HierarchyParams(N)
    out = []
    for a in (1, 2):
        f = v[a]
        ha = P.h_of(a)
        acc = LSeries.zero(f.var, None)
        if a == 1 and "shift" in terms:
            acc = acc + f.shift(1 + (1 + k) * ha).scale(-I)
        if "k_half" in terms and k:
            acc = acc + f.shift(k * ha).scale(Scalar(mpq(k, 2)))
        if "deriv" in terms:
            acc = acc + f.z_deriv().shift(k * ha).scale(Scalar(mpq(1, ha)))
        out.append(acc)
    return VVec(out[0], out[1])


@dataclass
class HbarSeries:
    """A finite Laurent polynomial ``sum_g c_g(t) hbar^g`` with TPoly coefficients."""

    coeffs: dict = field(default_factory=dict)  # exponent -> TPoly

    def __post_init__(self):
        if any(e < -1 for e in self.coeffs):
            raise ValueError("hbar exponents start at -1")
        self.coeffs = {e: p for e, p in self.coeffs.items() if not p.is_zero()}

    def __eq__(self, other):
        if not isinstance(other, HbarSeries):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        for e in keys:
            a, b = self.coeffs.get(e), other.coeffs.get(e)
            if a is None or b is None:
                return False
            elif not a.agrees_with(b):
                return False
        return True

    def is_zero(self) -> bool:
        return not self.coeffs


def dilaton_apply(D: HbarSeries) -> HbarSeries:
    """``(-i h/(h+1)) d/dt^1_{1+h} + sum t d/dt + N/24 + 2 hbar d/dhbar``."""
    out = {}
    for e, p in D.coeffs.items():
        P = p.table.params
        h = P.h
        lin = _deriv(p, 1, 1 + h).scale(Scalar(mpq(0), mpq(-h, h + 1)))
        euler = p.euler(lambda v: 1)
        const = p.scale(Scalar(mpq(p.table.N, 24) + 2 * e))
        out[e] = lin + euler + const
    return HbarSeries(out)


def monomials_up_to(N: int, cap: int) -> list[TPoly]:
    """Every monic monomial of weight ``<= cap`` as an exact polynomial."""
    table = var_table(N)
    vars_ = [(i, w) for i, w in enumerate(table.weights) if w <= cap]
    out = []

    def rec(idx, key, wt):
        out.append(key)
        for j in range(idx, len(vars_)):
            i, w = vars_[j]
            if wt + w <= cap:
                rec(j, key + (1 << (8 * i)), wt + w)

    rec(0, 0, 0)
    return [TPoly(table, {k: ONE}, None) for k in sorted(out, key=lambda k: (table.weight(k), k))]


def vertex_commutator_check(k: int, a: int, N: int, cap: int, terms=ALL_ELL_TERMS) -> CheckReport:
    """Verify ``[L_k, Gamma(t^a, z_a)] = ell_k^{(a)} Gamma`` and the J-commutator on monomials.

    Both sides are compared coefficientwise in ``z_a`` on every monomial of
    weight ``<= cap``, inside the t-weight range known to both sides.
    """
    if k < -1:
        raise ValueError("k >= -1 required")
    P = HierarchyParams(N)
    h = P.h
    ha = P.h_of(a)
    wa = P.weight(a)
    n = linear_mode_index(k, h)
    # t-weight bound for Gamma: large enough that L_k of it still reaches the cap
    T0 = cap + n + max(0, k * h)
    rep = CheckReport(command="virasoro-check", config={"N": N, "k": k, "a": a, "cap": cap, "terms": list(terms)})
    bad_L, bad_J, compared = [], [], 0
    for p in monomials_up_to(N, cap):
        G = gamma_apply(p, a, T=T0)
        GL = gamma_apply(l_apply(k, p), a, T=T0)
        GJ = gamma_apply(_deriv(p, 1, n).scale(2), a, T=T0)
        emin = min(G.exponents() + GL.exponents() + GJ.exponents(), default=0)
        emax = T0 // wa + n + abs(k) * ha
        for e in range(emin, emax + 1):
            lhs = l_apply(k, G.coefficient(e)) - GL.coefficient(e)
            rhs = TPoly(p.table, {}, None)
            if a == 1 and "shift" in terms:
                rhs = rhs + G.coefficient(e - n).scale(-I)
            Ge = G.coefficient(e - k * ha)
            if "k_half" in terms:
                rhs = rhs + Ge.scale(Scalar(mpq(k, 2)))
            if "deriv" in terms:
                rhs = rhs + Ge.scale(Scalar(mpq(e - k * ha, ha)))
            diff = lhs - rhs
            if diff.cap is None or diff.cap >= 0:
                compared += 1
                if not diff.is_zero():
                    bad_L.append({"monomial": p.render(), "z_exp": e})
            jl = _deriv(G.coefficient(e), 1, n).scale(2) - GJ.coefficient(e)
            jr = G.coefficient(e - n).scale(2) if a == 1 else TPoly(p.table, {}, None)
            jd = jl - jr
            if (jd.cap is None or jd.cap >= 0) and not jd.is_zero():
                bad_J.append({"monomial": p.render(), "z_exp": e})
    rep.add("L_gamma_commutator", not bad_L and compared > 0, failures=bad_L[:10], n_failures=len(bad_L), n_compared=compared)
    rep.add("J_gamma_commutator", not bad_J, failures=bad_J[:10], n_failures=len(bad_J))
    return rep


def tau_initial_check(N: int, cap: int) -> CheckReport:
    """``L_{-1} exp(-i x1 x2^2 / 8)`` vanishes after restricting to ``t^a_m = 0`` (``m > 1``)."""
    table = var_table(N)
    P = table.params
    x1, x2 = TPoly.var(table, 1, 1), TPoly.var(table, 2, 1)
    arg = x1.mul(x2).mul(x2).scale(Scalar(mpq(0), mpq(-1, 8))).truncate(cap)
    tau = exp_truncated(arg, cap)
    r = l_apply(-1, tau).restrict(lambda v: v.m == 1)
    rep = CheckReport(command="virasoro-check", config={"N": N, "cap": cap})
    rep.add("string_initial_condition", r.is_zero(), residual_cap=r.cap, n_terms=len(r))
    return rep


def virasoro_report(N: int, cap: int, ks=(-1, 0, 1)) -> CheckReport:
    rep = CheckReport(command="virasoro-check", config={"N": N, "cap": cap, "k": list(ks)})
    for k in ks:
        for a in (1, 2):
            rep.extend(vertex_commutator_check(k, a, N, cap), prefix=f"k={k},a={a}:")
    rep.extend(tau_initial_check(N, cap + 2 * N))
    table = var_table(N)
    bad = []
    for p in monomials_up_to(N, cap):
        lam = grading_eigenvalue(p)
        expect = Scalar(mpq(N * (table.params.h + 1), 24 * table.params.h)) + Scalar(mpq(table.weight(next(iter(p.terms))), table.params.h))
        if lam != expect:
            bad.append(p.render())
    rep.add("grading_eigenvalues", not bad, failures=bad[:10])
    return rep
