"""Vertex operators, the bilinear residues Omega_m and the tau -> wave map.

Everything is bosonic: ``Gamma(t^a, z)`` acts on a polynomial by the shift
``t^a_m -> t^a_m - 2 z^{-m}/m`` followed by multiplication with
``exp(sum t^a_m z^m)``.  ``Gamma(t, -z)`` is the same with both signs
flipped, since only odd powers occur.
"""

from __future__ import annotations

from .ring.lseries import WindowError
from .ring.mixed import MixedSeries, exp_factor, shift_substitute
from .ring.params import VarId
from .ring.tpoly import TPoly, min_cap, var_table
from .report import CheckReport
from .wave import WaveExpansion, XZSeries


class InsufficientCapError(WindowError):
    """The input tau is not known to a high enough weight for the requested check."""


def bilinear_table(N: int):
    """Variable table holding the two copies ``t'`` (copy 0) and ``t''`` (copy 1)."""
    return var_table(N, 2)


def gamma_apply(tau: TPoly, a: int, sign: int = 1, T: int | None = None, copy: int = 0) -> MixedSeries:
    """``Gamma(t^a, sign * z_a) tau`` as a z-series with polynomial coefficients.

    ``T`` bounds the t-weight of the result (defaults to the cap of ``tau``).
    """
    T = tau.cap if T is None else T
    if T is None:
        raise ValueError("an exact tau needs an explicit weight bound T")
    shifted = shift_substitute(tau, a, sign, copy)
    E = exp_factor(tau.table, a, T, ((copy, sign),))
    return E.mul(shifted, tw_cap=T)


def required_cap(N: int, m: int, cap: int) -> int:
    """Tau weight cap needed to know ``Omega_m(tau x tau)`` up to total weight ``cap``."""
    return cap + m * (2 * N - 2)


def omega_apply(tau1: TPoly, tau2: TPoly, m: int, cap: int | None = None) -> TPoly:
    """``Omega_m(tau1 x tau2)`` as a polynomial in ``(t', t'')`` up to total weight ``cap``.

    Component 1 contributes the coefficient of ``z1^{-mh}``, component 2 that
    of ``z2^{-2m}``, with a relative minus sign.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if tau1.table is not tau2.table or tau1.table.copies != 1:
        raise ValueError("both taus must live in the same single-copy table")
    N = tau1.table.N
    h = 2 * N - 2
    C = min_cap(tau1.cap, tau2.cap)
    if cap is None:
        if C is None:
            raise ValueError("exact taus need an explicit residual cap")
        cap = C - m * h
    if cap < 0:
        raise InsufficientCapError(f"tau weight cap {C} leaves nothing of Omega_{m}; need at least {m * h}")
    if C is not None and C < required_cap(N, m, cap):
        raise InsufficientCapError(
            f"Omega_{m} to weight {cap} needs tau weight cap >= {required_cap(N, m, cap)} "
            f"(coefficient z1^{-m * h} / z2^{-2 * m}); got {C}"
        )
    B2 = bilinear_table(N)
    t1 = tau1.embed(B2, 0)
    t2 = tau2.embed(B2, 1)
    result = TPoly(B2, {}, cap)
    for a, M, sgn in ((1, m * h, 1), (2, 2 * m, -1)):
        wa = B2.params.weight(a)
        A = shift_substitute(t1, a, 1, copy=0)
        B = shift_substitute(t2, a, -1, copy=1)
        E = exp_factor(B2, a, cap, ((0, 1), (1, -1)))
        AB = A.mul(B, only={-M - k for k in range(cap // wa + 1)}, tw_cap=cap)
        F = E.mul(AB, only={-M}, tw_cap=cap)
        coeff = F.coefficient(-M)
        if coeff.cap is not None and coeff.cap < cap:
            raise InsufficientCapError(f"residue of component {a} only known to weight {coeff.cap}")
        coeff = coeff.truncate(cap)
        result = result + coeff if sgn > 0 else result - coeff
    return result.truncate(cap)


def hirota_check(tau: TPoly, m_max: int, cap: int | None = None) -> CheckReport:
    """Check ``Omega_m(tau x tau) = 0`` for ``m = 0..m_max`` up to total weight ``cap``.

    A nonzero residual is reported as a failed check; an input tau known to
    too low a weight raises :class:`InsufficientCapError`.
    """
    if not tau.constant_term():
        raise ValueError("tau must have a nonzero constant term")
    N = tau.table.N
    h = 2 * N - 2
    if cap is None:
        if tau.cap is None:
            raise ValueError("exact taus need an explicit cap")
        cap = tau.cap - m_max * h
    rep = CheckReport(command="hirota-check", config={"N": N, "m_max": m_max, "cap": cap, "tau_cap": tau.cap})
    for m in range(m_max + 1):
        res = omega_apply(tau, tau, m, cap)
        terms = [{"monomial": [[("t'" if v.copy == 0 else "t''"), v.a, v.m, e] for v, e in exps], "coeff": c.to_json()}
                 for exps, c in res.monomials()]
        rep.add(
            f"omega_{m}",
            res.is_zero(),
            m=m,
            cap=cap,
            n_terms=len(terms),
            residual_terms=terms[:20],
            window={"z1": [-(cap + m * h), cap], "z2": [-((cap + m * h) // (N - 1)), cap // (N - 1)]},
        )
    rep.tables["certifies"] = {
        "bkp": rep.checks[0].passed,
        "kac_wakimoto_to_m": max((c.detail["m"] for c in rep.checks if c.passed and all(
            d.passed for d in rep.checks[: c.detail["m"] + 1])), default=-1),
    }
    return rep


def _is_x_var(v: VarId) -> bool:
    return v.m == 1


def wave_from_tau(tau: TPoly, x_order: int, cap: int | None = None) -> WaveExpansion:
    """``Psi^{(a)} = Gamma(t^a, z_a) tau / tau`` restricted to ``t^b_m = 0`` for ``m > 1``.

    The exponential factor ``e^{x_a z_a}`` is left out.  For a tau known up
    to weight ``C`` the result is exact for x-degree ``<= x_order`` and
    ``z_a^{-k}`` with ``k <= (C - x_order (N-1)) / w_a``.
    """
    if not tau.constant_term():
        raise ValueError("tau(0) must be nonzero")
    table = tau.table
    N = table.N
    C = min_cap(tau.cap, cap)
    if C is None:
        raise ValueError("an exact tau needs an explicit cap")
    tau = tau.truncate(C)
    x1 = table.shift(VarId(1, 1))
    x2 = table.shift(VarId(2, 1))
    inv = tau.restrict(_is_x_var).inverse()
    comps = []
    for a in (1, 2):
        wa = table.params.weight(a)
        depth = (C - x_order * (N - 1)) // wa
        if depth < 0:
            raise WindowError(f"tau cap {C} is too small for x-order {x_order}; need >= {x_order * (N - 1)}")
        S = shift_substitute(tau, a, 1)
        coeffs = {}
        for k in range(depth + 1):
            q = S.coefficient(-k).restrict(_is_x_var).mul(inv)
            if q.cap is not None and q.cap < x_order * (N - 1):
                raise WindowError("internal window bookkeeping failed")
            for key, c in q.terms.items():
                i = (key >> x1) & 0xFF
                j = (key >> x2) & 0xFF
                if i + j <= x_order:
                    coeffs[(i, j, -k)] = c
        comps.append(XZSeries(coeffs, x_order, -depth, f"z{a}"))
    return WaveExpansion(N, comps[0], comps[1])


def log_x_potential_q(tau: TPoly, x_order: int, var: str = "z") -> XZSeries:
    """``q(x) = 2 d1 d2 log tau`` restricted to the x-line, as a z-free XZSeries."""
    table = tau.table
    tr = tau.restrict(_is_x_var)
    v1, v2 = VarId(1, 1), VarId(2, 1)
    inv = tr.inverse()
    # d1 d2 log tau = tau_12 / tau - tau_1 tau_2 / tau^2
    t12 = tr.deriv(v1).deriv(v2).mul(inv)
    t1 = tr.deriv(v1).mul(inv)
    t2 = tr.deriv(v2).mul(inv)
    q = (t12 - t1.mul(t2)).scale(2)
    x1 = table.shift(v1)
    x2 = table.shift(v2)
    coeffs = {}
    for key, c in q.terms.items():
        i = (key >> x1) & 0xFF
        j = (key >> x2) & 0xFF
        if i + j <= x_order:
            coeffs[(i, j, 0)] = c
    if q.cap is not None and q.cap < x_order * (table.N - 1):
        raise WindowError("tau cap too small for the requested x-order")
    return XZSeries(coeffs, x_order, None, var)
