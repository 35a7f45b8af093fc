"""The wave function of the D_N descendant potential.

In the coordinates ``y1 = (i x1 + z1^h)^{1/h}`` and ``y2 = (i x1 + z2^2)^{1/2}``
the restriction to ``x2 = 0`` is governed by differential operators that are
Laurent polynomials in ``y`` with coefficients polynomial in the Euler-type
symbol ``D = i kappa y d/dy`` (``kappa = 1/h`` resp. ``1/2``).  Solving the
resulting recursions gives ``psi_k(0)``; two further recursions rebuild the
``x2``-dependence, and binomial expansion in ``i x1 z^{-h_a}`` turns the
closed forms into x-Taylor series with Laurent coefficients in ``z``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from gmpy2 import mpq

from .coeffield import I, ONE, ZERO, Scalar, as_scalar
from .report import CheckReport
from .ring.lseries import WindowError, binom
from .ring.params import HierarchyParams
from .virasoro import ell_apply
from .wave import WaveExpansion, XZSeries


class ConsistencyError(RuntimeError):
    """Two routes that must agree produced different values."""


# -- polynomials in the Euler symbol: tuples of Scalars, lowest degree first --

def dp_trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def dp_add(p, q):
    n = max(len(p), len(q))
    return dp_trim((p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO) for i in range(n))


def dp_scale(p, c):
    c = as_scalar(c)
    return dp_trim(x * c for x in p)


def dp_mul(p, q):
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] = out[i + j] + a * b
    return dp_trim(out)


def dp_eval(p, x):
    x = as_scalar(x)
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def dp_shift(p, c):
    """``P(D + c)``."""
    c = as_scalar(c)
    out = ()
    power = (ONE,)
    for a in p:
        out = dp_add(out, dp_scale(power, a))
        power = dp_mul(power, (c, ONE))
    return out


class DOpPoly:
    """``sum_e P_e(D) y^e`` with the D-polynomial written left of the power of y.

    The commutation rule is ``D y^m = y^m (D + i kappa m)``.
    """

    __slots__ = ("terms", "kappa")

    def __init__(self, terms: dict | None, kappa):
        self.kappa = mpq(kappa)
        self.terms = {e: dp_trim(p) for e, p in (terms or {}).items() if dp_trim(p)}

    @classmethod
    def y_power(cls, e: int, kappa, coeff=1) -> "DOpPoly":
        return cls({e: (as_scalar(coeff),)}, kappa)

    @classmethod
    def euler(cls, kappa, shift=0) -> "DOpPoly":
        """``D + shift``."""
        return cls({0: (as_scalar(shift), ONE)}, kappa)

    def __add__(self, other: "DOpPoly") -> "DOpPoly":
        out = dict(self.terms)
        for e, p in other.terms.items():
            out[e] = dp_add(out.get(e, ()), p)
        return DOpPoly(out, self.kappa)

    def __neg__(self):
        return DOpPoly({e: dp_scale(p, -1) for e, p in self.terms.items()}, self.kappa)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DOpPoly":
        return DOpPoly({e: dp_scale(p, c) for e, p in self.terms.items()}, self.kappa)

    def __mul__(self, other: "DOpPoly") -> "DOpPoly":
        """``(P y^a)(Q y^b) = P(D) Q(D - i kappa a) y^{a+b}``."""
        out: dict = {}
        for a, P in self.terms.items():
            for b, Q in other.terms.items():
                shifted = dp_shift(Q, Scalar(0, -self.kappa * a))
                out[a + b] = dp_add(out.get(a + b, ()), dp_mul(P, shifted))
        return DOpPoly(out, self.kappa)

    def coefficient(self, e: int):
        return self.terms.get(e, ())

    def apply(self, series: dict[int, Scalar]) -> dict[int, Scalar]:
        """Act on ``sum_c s_c y^c``: ``P(D) y^e y^c = P(i kappa (c + e)) y^{c+e}``."""
        out: dict = {}
        for c, s in series.items():
            for e, P in self.terms.items():
                n = c + e
                v = dp_eval(P, Scalar(0, self.kappa * n)) * s
                if v:
                    out[n] = out.get(n, ZERO) + v
        return {n: v for n, v in out.items() if v}

    def __eq__(self, other):
        return isinstance(other, DOpPoly) and self.kappa == other.kappa and self.terms == other.terms

    def to_json(self):
        return {str(e): [str(c) for c in p] for e, p in sorted(self.terms.items())}


def expand_operator(component: int, N: int) -> DOpPoly:
    """The x2 = 0 operator in y-coordinates, fully normal ordered."""
    h = HierarchyParams(N).h
    if component == 1:
        kappa = mpq(1, h)
        prod = DOpPoly.y_power(-h * (h + 1), kappa)
        for j in range(h, -1, -1):
            factor = DOpPoly.y_power(h + 1, kappa) + DOpPoly.euler(kappa, Scalar(0, -j))
            prod = prod * factor
        return prod - DOpPoly.euler(kappa) - DOpPoly.y_power(h + 1, kappa) - DOpPoly.y_power(0, kappa, Scalar(0, mpq(1, 2)))
    if component == 2:
        kappa = mpq(1, 2)
        prod = DOpPoly.y_power(-2 * (h + 1), kappa)
        for j in range(h, -1, -1):
            prod = prod * DOpPoly.euler(kappa, Scalar(0, -j))
        return prod - DOpPoly.euler(kappa) - DOpPoly.y_power(0, kappa, Scalar(0, mpq(1, 2)))
    raise ValueError("component must be 1 or 2")


def operator_offset(component: int, N: int) -> int:
    """The series annihilated is ``sum psi_k(0) y^{-k-offset}``."""
    return N - 1 if component == 1 else 1


def P_table(N: int) -> dict[int, tuple]:
    """``P_s`` for ``s = 1..h``: the coefficient of ``y^{-s(h+1)}`` in the component-1 operator."""
    h = HierarchyParams(N).h
    op = expand_operator(1, N)
    return {s: op.coefficient(-s * (h + 1)) for s in range(1, h + 1)}


def psi_zero(component: int, N: int, k_max: int) -> list[Scalar]:
    """``psi_k(0)`` for ``k = 0..k_max`` from the recursions with ``psi_0(0) = 1``."""
    h = HierarchyParams(N).h
    vals = [ONE]
    if component == 1:
        P = P_table(N)
        for k in range(1, k_max + 1):
            x = Scalar(0, -(mpq(k, h) + mpq(1, 2)))
            acc = ZERO
            for s in range(1, h + 1):
                j = k - s * (h + 1)
                if j >= 0 and vals[j]:
                    acc = acc + vals[j] * dp_eval(P[s], x)
            # -i k psi_k + acc = 0
            vals.append(acc / Scalar(0, k))
        return vals
    if component == 2:
        sign = 1 if (N - 1) % 2 == 0 else -1
        for k in range(1, k_max + 1):
            j = k - 2 * h - 2
            if j < 0 or not vals[j]:
                vals.append(ZERO)
                continue
            prod = mpq(1)
            for s in range(h + 1):
                prod *= mpq(s) - mpq(k - 1, 2)
            # (i k / 2) psi_k + sign i prod psi_j = 0
            vals.append(-(vals[j] * Scalar(sign * prod)) / Scalar(mpq(k, 2)))
        return vals
    raise ValueError("component must be 1 or 2")


def annihilation_residual(component: int, N: int, values: list[Scalar]) -> dict[int, Scalar]:
    """Apply the operator to ``sum psi_k(0) y^{-k-offset}``; keep the exponents fully determined by ``values``."""
    off = operator_offset(component, N)
    op = expand_operator(component, N)
    series = {-k - off: v for k, v in enumerate(values) if v}
    out = op.apply(series)
    k_max = len(values) - 1
    # terms map y^c to y^{c+e} with e <= 0, so exponent -k-off only sees psi_j with j <= k
    return {n: v for n, v in out.items() if n >= -k_max - off}


# -- x2-dependence --------------------------------------------------------

def _poly_int(p: dict[int, Scalar], const: Scalar) -> dict[int, Scalar]:
    out = {a + 1: c / (a + 1) for a, c in p.items() if c}
    if const:
        out[0] = const
    return out


def _poly_deriv(p):
    return {a - 1: c * a for a, c in p.items() if a and c}


def psi1_x2(N: int, k_max: int, zero_vals: list[Scalar] | None = None) -> list[dict[int, Scalar]]:
    """``psi^{(1)}_k(x2)`` as exact polynomials, integrating the x2-recursion."""
    h = HierarchyParams(N).h
    z = zero_vals if zero_vals is not None else psi_zero(1, N, k_max)
    psi = [{0: ONE}]
    for k in range(0, k_max):
        # d2 psi_{k+1} = (i/2) x2 psi_k - i(-k/h + 1/2) d2 psi_{k-h}
        rhs = {a + 1: c * Scalar(0, mpq(1, 2)) for a, c in psi[k].items()}
        if k - h >= 0:
            c0 = Scalar(0, -(mpq(-k, h) + mpq(1, 2)))
            for a, c in _poly_deriv(psi[k - h]).items():
                rhs[a] = rhs.get(a, ZERO) + c * c0
        psi.append(_poly_int(rhs, z[k + 1]))
    return psi


def psi2_closed_coefficient(k: int, a: int) -> mpq:
    """``psi^{(2)}_{k,a} / psi^{(2)}_{k+a,0}`` from iterating the coefficient recursion."""
    num = mpq(1)
    den = mpq(1)
    for j in range(1, a + 1):
        num *= a - k - 2 * j
        den *= (k + j) * j
    return num / den


def psi2_literal_coefficient(k: int, a: int) -> mpq:
    """The same ratio with the consecutive-integer numerator ``(a-k-2)(a-k-3)...(-k-1)``."""
    num = mpq(1)
    den = mpq(1)
    for j in range(a):
        num *= a - k - 2 - j
    for j in range(1, a + 1):
        den *= (k + j) * j
    return num / den


def psi2_x2(N: int, k_max: int, zero_vals: list[Scalar] | None = None, check: bool = True) -> list[dict[int, Scalar]]:
    """``psi^{(2)}_k(x2)`` known through x2-degree ``k_max - k``.

    Built by the closed form and, independently, by integrating the
    x2-recursion downward from ``k_max``; any disagreement raises.
    """
    z = zero_vals if zero_vals is not None else psi_zero(2, N, k_max)
    closed = []
    for k in range(k_max + 1):
        poly = {}
        for a in range(k_max - k + 1):
            c = z[k + a] * Scalar(psi2_closed_coefficient(k, a))
            if c:
                poly[a] = c
        closed.append(poly)
    if check:
        rec = psi2_by_recursion(k_max, z)
        for k in range(k_max + 1):
            if rec[k] != closed[k]:
                raise ConsistencyError(f"closed form and recursion disagree at k={k}")
    return closed


def psi2_by_recursion(k_max: int, zero_vals: list[Scalar]) -> list[dict[int, Scalar]]:
    """Integrate ``d2 psi_K = (x2 d2 - K - 1) psi_{K+1} / (K + 1)`` from ``K = k_max - 1`` down."""
    psi: list = [None] * (k_max + 1)
    psi[k_max] = {0: zero_vals[k_max]} if zero_vals[k_max] else {}
    for K in range(k_max - 1, -1, -1):
        nxt = psi[K + 1]
        # (x2 d2 - K - 1) x2^a = (a - K - 1) x2^a, then integrate once
        rhs = {}
        for a, c in nxt.items():
            v = c * (a - K - 1) / (K + 1)
            if v:
                rhs[a] = rhs.get(a, ZERO) + v
        psi[K] = _poly_int(rhs, zero_vals[K])
    return psi


def psi2_coefficient_recursion_ok(k_max: int, psi: list[dict[int, Scalar]]) -> bool:
    """``-K(a+1) psi_{K-1,a+1} + (a-K) psi_{K,a} = 0`` wherever both entries are known."""
    for K in range(1, k_max + 1):
        for a in range(0, k_max - K + 1):
            lhs = psi[K - 1].get(a + 1, ZERO) * (-K * (a + 1)) + psi[K].get(a, ZERO) * (a - K)
            if lhs:
                return False
    return True


# -- x-Taylor expansion of the closed forms -------------------------------

def _binom_series(alpha, shift: int, D: int, var: str) -> XZSeries:
    """``(1 + i x1 z^{-shift})^alpha`` to x-degree ``D``."""
    coeffs = {}
    for n in range(0, D + 1):
        c = Scalar(binom(alpha, n)) * (I ** n)
        if c:
            coeffs[(n, 0, -shift * n)] = c
    return XZSeries(coeffs, D, None, var)


def psi_x2(component: int, N: int, k_max: int, x2_order: int | None = None) -> list[dict[int, Scalar]]:
    """``psi^{(a)}_k(x2)`` for ``k <= k_max`` as ``{degree: coeff}``, cut at ``x2_order`` if given."""
    polys = psi1_x2(N, k_max) if component == 1 else psi2_x2(N, k_max)
    if x2_order is None:
        return polys
    return [{a: c for a, c in p.items() if a <= x2_order} for p in polys]


@dataclass
class DescendantWave:
    """The psi data behind the closed forms; fields may be edited to build mutants."""

    N: int
    k_max: int
    psi1_zero: list
    psi2_zero: list
    psi1: list  # exact polynomials in x2
    psi2: list  # known through degree k_max - k

    def expansion(self, x_order: int, window: int | None = None) -> WaveExpansion:
        return expand_wave(self.N, self.k_max, x_order, window, data=self)


def descendant_data(N: int, k_max: int) -> DescendantWave:
    z1 = psi_zero(1, N, k_max)
    z2 = psi_zero(2, N, k_max)
    return DescendantWave(N, k_max, z1, z2, psi1_x2(N, k_max, z1), psi2_x2(N, k_max, z2))


def expand_wave(N: int, k_max: int, x_order: int, window: int | None = None,
                data: DescendantWave | None = None) -> WaveExpansion:
    """Both components with ``e^{x_a z_a}`` removed, exact for x-degree ``<= x_order``.

    Component 1 is exact down to ``z1^{-k_max}``, component 2 down to
    ``z2^{-(k_max - x_order)}`` (the x2-degree of ``psi^{(2)}_k`` is known
    through ``k_max - k``).  ``window`` further cuts both to ``z^{-window}``.
    """
    if N < 4:
        warnings.warn("the tau-initial shape behind this wave is established for N >= 4", stacklevel=2)
    h = HierarchyParams(N).h
    D = x_order
    data = data or descendant_data(N, k_max)

    # component 1
    z = "z1"
    arg = {}
    pref = Scalar(0, -mpq(h, h + 1))
    for n in range(2, D + 1):
        c = pref * Scalar(binom(mpq(h + 1, h), n)) * (I ** n)
        if c:
            arg[(n, 0, h + 1 - n * h)] = c
    E1 = XZSeries(arg, D, None, z).exp()
    lo1 = -k_max
    tot = XZSeries({}, D, None, z)
    for k in range(k_max + 1):
        poly = data.psi1[k]
        pk = XZSeries({(0, a, -k): c for a, c in poly.items() if a <= D}, D, None, z)
        if pk.is_zero():
            continue
        tot = tot + pk.mul(_binom_series(mpq(-k, h), h, D, z))
    u1 = E1.mul(_binom_series(mpq(-1, 2), h, D, z)).mul(tot).truncate(lo=lo1)

    # component 2
    z = "z2"
    depth2 = k_max - D
    if depth2 < 0:
        raise WindowError("k_max must be at least the x-order")
    arg = {}
    for n in range(1, D):
        c = Scalar(binom(mpq(1, 2), n)) * (I ** n)
        if c:
            arg[(n, 1, 1 - 2 * n)] = c
    E2 = XZSeries(arg, D, None, z).exp()
    tot = XZSeries({}, D, None, z)
    for k in range(depth2 + 1):
        poly = data.psi2[k]
        pk = XZSeries({(0, a, -k): c for a, c in poly.items() if a <= D}, D, None, z)
        if pk.is_zero():
            continue
        tot = tot + pk.mul(_binom_series(mpq(-k, 2), 2, D, z))
    tot = tot.truncate(lo=-depth2)
    u2 = E2.mul(_binom_series(mpq(-1, 2), 2, D, z)).mul(tot).truncate(lo=-depth2)
    if window is not None:
        if window > depth2:
            raise WindowError(f"window z^-{window} exceeds the known depth z^-{depth2} of component 2")
        u1, u2 = u1.truncate(lo=-window), u2.truncate(lo=-window)
    return WaveExpansion(N, u1, u2)


# -- verification ------------------------------------------------------------

def _D1(u: XZSeries) -> XZSeries:
    """``e^{-x1 z} d1 e^{x1 z}`` on component 1."""
    return u.d1() + u.shift(1).truncate(D=u.D - 1)


def _D2(u: XZSeries) -> XZSeries:
    return u.d2() + u.shift(1).truncate(D=u.D - 1)


def _string_T(u: XZSeries, a: int, h: int) -> XZSeries:
    """``i ell_{-1}^{(a)}`` conjugated by ``e^{x_a z}``."""
    if a == 1:
        zdv = u.z_deriv() + u.mul_x1().shift(1)
        return u.shift(1) + u.shift(-h).scale(Scalar(0, mpq(-1, 2))) + zdv.shift(-h).scale(Scalar(0, mpq(1, h)))
    zdv = u.z_deriv() + u.mul_x2().shift(1)
    return u.shift(-2).scale(Scalar(0, mpq(-1, 2))) + zdv.shift(-2).scale(Scalar(0, mpq(1, 2)))


def _zero_report(s: XZSeries) -> dict:
    bad = [[i, j, e, str(c)] for (i, j, e), c in sorted(s.coeffs.items())][:6]
    return {"x_order": s.D, "z_lo": s.lo, "nonzero": bad}


def verify_descendant(N: int = 4, k_max: int | None = None, x_order: int = 3, window: int | None = None,
                      data: DescendantWave | None = None) -> CheckReport:
    """The five families of identities for the descendant wave function.

    The annihilation check covers ``psi_k(0)`` for ``k <= k_max``; the PDE
    checks run on an expansion to x-order ``x_order + h`` (the spectral
    equation spends ``h`` derivatives) cut to ``z^{-window}`` if given.
    """
    P = HierarchyParams(N)
    h = P.h
    if k_max is None:
        k_max = 3 * (h + 1)
    rep = CheckReport(command="descendant", config={"N": N, "k_max": k_max, "x_order": x_order, "window": window,
                                                    "flagged_small_N": N < 4})
    D = x_order + h
    data = data or descendant_data(N, k_max + D)

    # (i) annihilation in y-coordinates
    for a, vals in ((1, data.psi1_zero), (2, data.psi2_zero)):
        res = annihilation_residual(a, N, vals)
        rep.add(f"annihilation_{a}", not res, nonzero=sorted(res)[:6], k_max=data.k_max)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        W = expand_wave(N, data.k_max, D, window, data=data)
    u1, u2 = W.u1, W.u2

    # (ii) d1 d2 Psi = (i/2) x2 Psi
    r1 = _D1(u1.d2()) - u1.mul_x2().scale(Scalar(0, mpq(1, 2))).truncate(D=u1.D - 2)
    r2 = _D2(u2).d1() - u2.mul_x2().scale(Scalar(0, mpq(1, 2))).truncate(D=u2.D - 2)
    rep.add("pde3_mixed", r1.is_zero() and r2.is_zero(), c1=_zero_report(r1), c2=_zero_report(r2))

    # (iii) d1 Psi = i ell_{-1} Psi, in conjugated form and against ell_apply on Taylor vectors
    lhs1 = u1.d1()
    rhs1 = _string_T(u1, 1, h) - u1.shift(1)
    lhs2 = u2.d1()
    rhs2 = _string_T(u2, 2, h)
    d1, d2 = lhs1 - rhs1, lhs2 - rhs2
    rep.add("pde2_string_conjugated", d1.is_zero() and d2.is_zero(), c1=_zero_report(d1), c2=_zero_report(d2))
    bad = []
    for m in range(0, x_order):
        for n in range(0, x_order - m):
            w = W.taylor_vector(m, n)
            w_next = W.taylor_vector(m + 1, n).scale(m + 1)
            lv = ell_apply(N, -1, w).scale(I)
            diff = w_next - lv
            if not diff.is_zero():
                bad.append([m, n])
    rep.add("pde2_ell_taylor", not bad, failures=bad[:6])

    # (iv) (d1^h + d2^2 - i x1) Psi = (z1^h, z2^2) Psi
    t = u1
    for _ in range(h):
        t = _D1(t)
    f1 = t + u1.d2().d2().truncate(D=t.D) - u1.mul_x1().scale(I).truncate(D=t.D) - u1.shift(h).truncate(D=t.D)
    t = u2
    for _ in range(h):
        t = t.d1()
    f2 = t + _D2(_D2(u2)).truncate(D=t.D) - u2.mul_x1().scale(I).truncate(D=t.D) - u2.shift(2).truncate(D=t.D)
    rep.add("pde1_spectral", f1.is_zero() and f2.is_zero(), c1=_zero_report(f1), c2=_zero_report(f2))

    # (v) (i ell_{-1})^p Psi for p <= h
    bad = []
    for a, u in ((1, u1), (2, u2)):
        t = u
        for p in range(1, h + 1):
            t = _string_T(t, a, h)
            if a == 1:
                expect = u.shift(p) + XZSeries({(1, 0, p - h): Scalar(0, mpq(p, h))}, u.D, None, u.var)
                rest = t - expect
                top = p - h - 1
            else:
                rest = t
                top = -p
            hits = [(i, j, e) for (i, j, e) in rest.coeffs if e > top]
            if hits:
                bad.append({"a": a, "p": p, "terms": hits[:4]})
    rep.add("string_powers", not bad, failures=bad[:6])

    # leading shape, the quoted coefficient and the log-derivative shape
    rep.add("leading_shape", W.leading_ok())
    rep.add("x1x2_coefficient", u2.coeff(1, 1, -1) == Scalar(0, mpq(1, 2)), value=str(u2.coeff(1, 1, -1)))
    w1 = {(i, j): c for (i, j, e), c in u1.coeffs.items() if e == -1}
    w2 = {(i, j): c for (i, j, e), c in u2.coeffs.items() if e == -1}
    rep.add("log_tau_shape", w1 == {(0, 2): Scalar(0, mpq(1, 4))} and w2 == {(1, 1): Scalar(0, mpq(1, 2))},
            w1=[[i, j, str(c)] for (i, j), c in sorted(w1.items())],
            w2=[[i, j, str(c)] for (i, j), c in sorted(w2.items())])

    # support of psi(0)
    sup1 = all(not v or k % (h + 1) == 0 for k, v in enumerate(data.psi1_zero))
    sup2 = all(not v or k % (2 * h + 2) == 0 for k, v in enumerate(data.psi2_zero))
    rep.add("psi_zero_support", sup1 and sup2)
    rep.add("psi2_routes_agree", psi2_coefficient_recursion_ok(data.k_max, data.psi2))
    rep.tables["psi1_zero"] = [str(v) for v in data.psi1_zero]
    rep.tables["psi2_zero"] = [str(v) for v in data.psi2_zero]
    return rep
