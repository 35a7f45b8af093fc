"""Gaussian tau-functions from a point ``t in Q(i)^N``.

The pipeline: solve the plane-curve system on both branches for the pair
``X1, X2``, build the monic odd polynomials ``p_k^{(a)}`` whose values on
``X_a`` have no nonnegative tail, read the quadratic coefficients
``W^{ab}_{kl}`` off those tails, and exponentiate the quadratic form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .coeffield import ONE, ZERO, Scalar, as_scalar, parse_scalar
from .report import CheckReport
from .ring.lseries import LSeries, VVec, WindowError
from .ring.params import HierarchyParams, VarId
from .ring.tpoly import TPoly, exp_truncated, var_table
from .wave import WaveExpansion, XZSeries


@dataclass(frozen=True)
class DeformationPoint:
    N: int
    t: tuple

    def __post_init__(self):
        HierarchyParams(self.N)
        if len(self.t) != self.N:
            raise ValueError(f"expected {self.N} parameters, got {len(self.t)}")
        object.__setattr__(self, "t", tuple(as_scalar(x) for x in self.t))

    @classmethod
    def parse(cls, N: int, text: str) -> "DeformationPoint":
        return cls(N, tuple(parse_scalar(s) for s in text.split(",")))

    @property
    def h(self) -> int:
        return 2 * self.N - 2

    def ti(self, i: int) -> Scalar:
        """``t_i`` with 1-based index."""
        return self.t[i - 1]

    @property
    def tN(self) -> Scalar:
        return self.t[-1]

    def to_json(self):
        return [str(x) for x in self.t]


@dataclass
class SpectralPair:
    """``X_a = X_{a1} e1 + X_{a2} e2``; ``X_{a1}`` in ``z1`` and ``X_{a2}`` in ``z2``."""

    X11: LSeries
    X12: LSeries
    X21: LSeries
    X22: LSeries

    @property
    def X1(self) -> VVec:
        return VVec(self.X11, self.X12)

    @property
    def X2(self) -> VVec:
        return VVec(self.X21, self.X22)

    def X(self, a: int) -> VVec:
        return self.X1 if a == 1 else self.X2

    def comp(self, a: int, b: int) -> LSeries:
        return getattr(self, f"X{a}{b}")


def _branch1_f(point: DeformationPoint, depth: int) -> LSeries:
    """``f(x) = x (1 + sum t_i x^{-2i} + t_N^2 x^{-h-2})^{1/h}`` known to relative depth ``depth``."""
    h = point.h
    inner = {0: ONE}
    for i in range(1, point.N):
        inner[-2 * i] = inner.get(-2 * i, ZERO) + point.ti(i)
    inner[-h - 2] = inner.get(-h - 2, ZERO) + point.tN ** 2
    return LSeries(inner, -depth, "x").shift(h).root_monic(h)


def _branch2_g(point: DeformationPoint, depth: int) -> LSeries:
    """``g(y) = y (1 + t_{N-1} y^{-2} + sum_{i<N-1} t_i t_N^{h-2i} y^{-(h-2i)-2} + t_N^h y^{-h-2})^{1/2}``."""
    h = point.h
    N = point.N
    tN = point.tN
    inner = {0: ONE}

    def put(e, c):
        inner[e] = inner.get(e, ZERO) + c

    put(-2, point.ti(N - 1))
    for i in range(1, N - 1):
        put(-(h - 2 * i) - 2, point.ti(i) * tN ** (h - 2 * i))
    put(-h - 2, tN ** h)
    return LSeries(inner, -depth, "y").shift(2).root_monic(2)


def solve_branches(point: DeformationPoint, order1: int, order2: int | None = None) -> SpectralPair:
    """``X_{a b}`` known down to ``z_1^{-order1}`` (branch 1) and ``z_2^{-order2}`` (branch 2)."""
    order2 = order1 if order2 is None else order2
    tN = point.tN
    # branch 1: lambda = z1^h, y = -t_N / x
    f = _branch1_f(point, order1 + 1)
    X11 = f.reversion(order1 + 1, "z1")
    X21 = X11.inverse().scale(-tN).truncate(-order1) if tN else LSeries.zero("z1")
    # branch 2: lambda = z2^2, x = -t_N / y
    g = _branch2_g(point, order2 + 1)
    X22 = g.reversion(order2 + 1, "z2")
    X12 = X22.inverse().scale(-tN).truncate(-order2) if tN else LSeries.zero("z2")
    return SpectralPair(X11, X12, X21, X22)


def _vv_mul(u: VVec, v: VVec) -> VVec:
    return VVec(u.c1.mul(v.c1), u.c2.mul(v.c2))


def _vv_one() -> VVec:
    return VVec(LSeries.const(1, "z1"), LSeries.const(1, "z2"))


def odd_powers(X: VVec, kmax: int) -> dict[int, VVec]:
    pw = {1: X}
    sq = _vv_mul(X, X)
    for j in range(3, kmax + 1, 2):
        pw[j] = _vv_mul(pw[j - 2], sq)
    return pw


def p_poly(a: int, k: int, spectral: SpectralPair, powers: dict | None = None):
    """The monic odd polynomial ``p_k^{(a)}`` and its value on ``X_a``.

    Returned as ``(coeffs, value)`` with ``coeffs`` a dict power -> Scalar.
    """
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be odd and positive")
    X = spectral.X(a)
    pw = powers if powers is not None else odd_powers(X, k)
    coeffs = {k: ONE}
    cur = pw[k]
    for j in range(k - 2, 0, -2):
        c = cur[a].coeff(j)
        if c:
            coeffs[j] = -c
            cur = cur - pw[j].scale(c)
    for e in cur[a].coeffs:
        if 0 <= e < k:
            raise WindowError("elimination left a nonnegative power; increase the order")
    return coeffs, cur


@dataclass
class GaussianModel:
    point: DeformationPoint
    cap: int
    spectral: SpectralPair
    W: dict  # (a, b, k, l) -> Scalar
    psi0: VVec
    tau: TPoly
    p: dict = field(default_factory=dict)  # (a, k) -> {power: Scalar}

    @property
    def N(self) -> int:
        return self.point.N

    def W_get(self, a: int, b: int, k: int, l: int) -> Scalar:
        return self.W.get((a, b, k, l), ZERO)

    def w_table_json(self) -> list:
        return [[a, b, k, l, str(c)] for (a, b, k, l), c in sorted(self.W.items())]


def index_bounds(N: int, cap: int):
    """Odd index pairs ``(k, l)`` with ``w_a k + w_b l <= cap`` for each ``(a, b)``."""
    P = HierarchyParams(N)
    out = {}
    for a in (1, 2):
        for b in (1, 2):
            pairs = []
            k = 1
            while P.var_weight(a, k) + P.weight(b) <= cap:
                l = 1
                while P.var_weight(a, k) + P.var_weight(b, l) <= cap:
                    pairs.append((k, l))
                    l += 2
                k += 2
            out[(a, b)] = pairs
    return out


def assemble(point: DeformationPoint, cap: int) -> GaussianModel:
    """Build ``W^{ab}_{kl}`` for all weights ``w_a k + w_b l <= cap`` and the tau to that cap."""
    N = point.N
    P = HierarchyParams(N)
    bounds = index_bounds(N, cap)
    # depth in z_b needed: l up to (cap - w_a)/w_b, plus k for the elimination of z_a^k .. z_a^1
    order1 = cap + 2
    order2 = cap // P.weight(2) + 2
    spectral = solve_branches(point, order1, order2)
    W: dict = {}
    polys: dict = {}
    for a in (1, 2):
        ks = sorted({k for b in (1, 2) for k, _ in bounds[(a, b)]})
        if not ks:
            continue
        pw = odd_powers(spectral.X(a), max(ks))
        for k in ks:
            coeffs, val = p_poly(a, k, spectral, pw)
            polys[(a, k)] = coeffs
            for b in (1, 2):
                for kk, l in bounds[(a, b)]:
                    if kk == k:
                        c = val[b].coeff(-l)
                        if c:
                            W[(a, b, k, l)] = c * Scalar(mpq(-l, 2))
    psi0 = VVec(*(
        (spectral.comp(a, a).z_deriv() / spectral.comp(a, a)).sqrt_monic() for a in (1, 2)
    ))
    tau = gaussian_tau(N, W, cap)
    return GaussianModel(point, cap, spectral, W, psi0, tau, polys)


def gaussian_tau(N: int, W: dict, cap: int) -> TPoly:
    """``exp(1/2 sum W^{ab}_{kl} t^a_k t^b_l)`` truncated at ``cap``."""
    table = var_table(N)
    P = table.params
    Q = TPoly(table, {}, cap)
    half = Scalar(mpq(1, 2))
    terms: dict = {}
    for (a, b, k, l), c in W.items():
        if P.var_weight(a, k) + P.var_weight(b, l) > cap:
            continue
        key = table.unit(VarId(a, k)) + table.unit(VarId(b, l))
        terms[key] = terms.get(key, ZERO) + c * half
    Q = TPoly(table, terms, cap)
    return exp_truncated(Q, cap)


def psi0_from_W(model: GaussianModel, a: int) -> LSeries:
    """``exp(2 sum W^{aa}_{kl} z^{-k-l}/(k l))`` on the range fixed by the stored W."""
    P = HierarchyParams(model.N)
    wa = P.weight(a)
    # every pair with k + l <= depth is stored when w_a (k + l) <= cap
    depth = model.cap // wa
    var = f"z{a}"
    arg = {}
    for (aa, bb, k, l), c in model.W.items():
        if aa == a and bb == a and k + l <= depth:
            e = -(k + l)
            arg[e] = arg.get(e, ZERO) + c * Scalar(mpq(2, k * l))
    s = LSeries(arg, -depth, var)
    # exp of a series with only negative powers
    out = LSeries.const(1, var, -depth)
    term = LSeries.const(1, var, -depth)
    n = 1
    while True:
        term = term.mul(s).scale(Scalar(mpq(1, n))).truncate(-depth)
        if term.is_zero():
            break
        out = out + term
        n += 1
    return out


def refit_point(model: GaussianModel) -> DeformationPoint:
    """Recover ``t`` from ``W^{11}_{1l}`` and ``W^{21}_{1l}`` alone."""
    N = model.N
    h = 2 * N - 2
    depth = max(l for k, l in index_bounds(N, model.cap)[(1, 1)] if k == 1)
    x = {1: ONE}
    y = {}
    for (a, b, k, l), c in model.W.items():
        if k == 1 and b == 1:
            target = x if a == 1 else y
            target[-l] = c * Scalar(mpq(-2, l))
    X = LSeries(x, -depth, "z1")
    Y = LSeries(y, -depth, "z1")
    tN = -(X.mul(Y)).coeff(0)
    ts = []
    acc = (X ** h) + Y.mul(Y)
    for i in range(1, N):
        ti = -acc.coeff(h - 2 * i)
        ts.append(ti)
        acc = acc + (X ** (h - 2 * i)).scale(ti)
    ts.append(tN)
    return DeformationPoint(N, tuple(ts))


def verify_structure(model: GaussianModel, m_max: int | None = None) -> CheckReport:
    point = model.point
    N = point.N
    h = point.h
    sp = model.spectral
    rep = CheckReport(command="gaussian", config={"N": N, "t": point.to_json(), "cap": model.cap})

    r1 = sp.X11.mul(sp.X21) + point.tN
    r2 = sp.X12.mul(sp.X22) + point.tN
    rep.add("x1x2_plus_tN", r1.is_zero() and r2.is_zero(), window_z1=r1.lo, window_z2=r2.lo)

    def curve(a):
        X1, X2 = sp.comp(1, a), sp.comp(2, a)
        z = f"z{a}"
        acc = (X1 ** h) + X2.mul(X2)
        for i in range(1, N):
            acc = acc + (X1 ** (h - 2 * i)).scale(point.ti(i))
        return acc - LSeries.monomial(h if a == 1 else 2, 1, z)

    c1, c2 = curve(1), curve(2)
    rep.add("curve_relation", c1.is_zero() and c2.is_zero(), window_z1=c1.lo, window_z2=c2.lo)

    stored = _stored_keys(model)
    asym = [list(key) for key in sorted(stored)
            if (key[1], key[0], key[3], key[2]) in stored
            and model.W.get(key, ZERO) != model.W.get((key[1], key[0], key[3], key[2]), ZERO)]
    rep.add("w_symmetry", not asym, asymmetric=asym[:10])

    rep.add("w12_11_is_half_tN", model.W_get(1, 2, 1, 1) == point.tN * Scalar(mpq(1, 2)),
            value=str(model.W_get(1, 2, 1, 1)))

    bad = []
    checked = 0
    for a in (1, 2):
        X = sp.comp(a, a)
        psq = model.psi0[a].mul(model.psi0[a])
        m = 0
        while m_max is None or m <= m_max:
            prod = (X ** (2 * m)).mul(psq)
            if prod.lo is not None and prod.lo > 0:
                break
            r = prod.residue()
            if r != (ONE if m == 0 else ZERO):
                bad.append([a, m, str(r)])
            checked += 1
            m += 1
    rep.add("isotropy_residues", not bad and checked > 0, failures=bad[:10], n_checked=checked)

    mism = []
    for a in (1, 2):
        alt = psi0_from_W(model, a)
        if not alt.agrees_with(model.psi0[a]):
            mism.append(a)
    rep.add("psi0_two_routes", not mism, mismatched=mism)

    refit = refit_point(model)
    rep.add("refit_point", refit.t == point.t, refit=refit.to_json())
    return rep


def _stored_keys(model: GaussianModel):
    out = set()
    for (a, b), pairs in index_bounds(model.N, model.cap).items():
        for k, l in pairs:
            out.add((a, b, k, l))
    return out


def direct_wave(model: GaussianModel, x_order: int) -> WaveExpansion:
    """``Psi^{(a)} = psi0_a exp(x1 X_{1a} + x2 X_{2a})`` with ``e^{x_a z_a}`` removed."""
    sp = model.spectral
    comps = []
    for a in (1, 2):
        z = f"z{a}"
        t1 = sp.comp(1, a) - (LSeries.monomial(1, 1, z) if a == 1 else LSeries.zero(z))
        t2 = sp.comp(2, a) - (LSeries.monomial(1, 1, z) if a == 2 else LSeries.zero(z))
        arg = XZSeries.from_lseries(t1, x_order, 1, 0) + XZSeries.from_lseries(t2, x_order, 0, 1)
        comps.append(XZSeries.from_lseries(model.psi0[a], x_order).mul(arg.exp()))
    return WaveExpansion(model.N, comps[0], comps[1])
