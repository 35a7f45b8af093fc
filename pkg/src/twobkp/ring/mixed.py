"""Laurent series in one ``z_a`` whose coefficients are polynomials in the times.

Knowledge is tracked with two caps.  A term ``mu(t) z^e`` has t-weight
``wt(mu)`` and grade ``wt(mu) - w_a e`` (``w_a`` the weight of ``z_a``).
A :class:`MixedSeries` is exact for every term whose grade is ``<= G`` and
whose t-weight is ``<= T``; ``None`` means unbounded.  Shifting the times by
``[z^{-1}]`` preserves the grade, and ``exp(sum t_m z^m)`` is of pure grade 0,
which is what makes the pair of caps sharp for vertex operators.
"""

from __future__ import annotations

from gmpy2 import mpq

from ..coeffield import ONE, Scalar, as_scalar
from .lseries import WindowError, binom  # noqa: F401  (re-exported helper)
from .params import VarId
from .tpoly import TPoly, VarTable, exp_truncated, min_cap

_INF = float("inf")


def _add_cap(c, d):
    if c is None or d == _INF:
        return None
    return c + d


class MixedSeries:
    __slots__ = ("a", "table", "coeffs", "G", "T")

    def __init__(self, a: int, table: VarTable, coeffs: dict | None = None, G=None, T=None):
        self.a = a
        self.table = table
        self.G = G
        self.T = T
        out = {}
        for e, p in (coeffs or {}).items():
            q = self._clip(e, p)
            if not q.is_zero():
                out[e] = q
        self.coeffs = out

    @property
    def wa(self) -> int:
        return self.table.params.weight(self.a)

    def cap_at(self, e: int):
        """t-weight cap of the coefficient of ``z^e``."""
        g = None if self.G is None else self.G + self.wa * e
        return min_cap(g, self.T)

    def _clip(self, e: int, p: TPoly) -> TPoly:
        cap = self.cap_at(e)
        terms = p.terms
        if cap is not None:
            wt = self.table.weight
            terms = {k: c for k, c in terms.items() if wt(k) <= cap}
        return TPoly(self.table, terms, None, _clean=True)

    def coefficient(self, e: int) -> TPoly:
        """Coefficient of ``z^e`` as a TPoly carrying its own weight cap."""
        p = self.coeffs.get(e)
        cap = self.cap_at(e)
        if p is None:
            return TPoly(self.table, {}, cap, _clean=True)
        return TPoly(self.table, p.terms, cap, _clean=True)

    def residue(self) -> TPoly:
        return self.coefficient(0)

    def exponents(self):
        return sorted(self.coeffs)

    def min_grade(self):
        wt = self.table.weight
        return min((wt(k) - self.wa * e for e, p in self.coeffs.items() for k in p.terms), default=_INF)

    def min_tweight(self):
        return min((p.min_weight() for p in self.coeffs.values()), default=_INF)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "MixedSeries"):
        if other.a != self.a or other.table is not self.table:
            raise ValueError("mixed series over different variables")

    def __add__(self, other: "MixedSeries") -> "MixedSeries":
        self._check(other)
        out = dict(self.coeffs)
        for e, p in other.coeffs.items():
            out[e] = out[e] + p if e in out else p
        return MixedSeries(self.a, self.table, out, min_cap(self.G, other.G), min_cap(self.T, other.T))

    def __neg__(self):
        return MixedSeries(self.a, self.table, {e: -p for e, p in self.coeffs.items()}, self.G, self.T)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MixedSeries":
        c = as_scalar(c)
        return MixedSeries(self.a, self.table, {e: p.scale(c) for e, p in self.coeffs.items()}, self.G, self.T)

    def mul(self, other: "MixedSeries", only=None, tw_cap=None) -> "MixedSeries":
        """Product; ``only`` restricts to a set of output exponents."""
        self._check(other)
        gf, gg = self.min_grade(), other.min_grade()
        G = min_cap(_add_cap(self.G, gg), _add_cap(other.G, gf),
                    None if self.G is None or other.G is None else self.G + other.G + 1)
        tf, tg = self.min_tweight(), other.min_tweight()
        T = min_cap(_add_cap(self.T, tg), _add_cap(other.T, tf),
                    None if self.T is None or other.T is None else self.T + other.T + 1, tw_cap)
        out: dict[int, TPoly] = {}
        for e1, p in self.coeffs.items():
            for e2, q in other.coeffs.items():
                e = e1 + e2
                if only is not None and e not in only:
                    continue
                g = None if G is None else G + self.wa * e
                cap = min_cap(g, T)
                if cap is not None and cap < 0:
                    continue
                prod = p.mul(q, cap)
                prod = TPoly(self.table, prod.terms, None, _clean=True)
                out[e] = out[e] + prod if e in out else prod
        return MixedSeries(self.a, self.table, out, G, T)

    def shift(self, s: int) -> "MixedSeries":
        """Multiply by ``z^s``."""
        G = None if self.G is None else self.G - self.wa * s
        return MixedSeries(self.a, self.table, {e + s: p for e, p in self.coeffs.items()}, G, self.T)

    def z_deriv(self) -> "MixedSeries":
        return MixedSeries(self.a, self.table, {e: p.scale(e) for e, p in self.coeffs.items()}, self.G, self.T)

    def map_coefficients(self, fn, weight_shift: int = 0) -> "MixedSeries":
        """Apply a t-operator that changes t-weight by ``weight_shift`` coefficientwise."""
        G = None if self.G is None else self.G + weight_shift
        T = None if self.T is None else self.T + weight_shift
        out = {}
        for e, p in self.coeffs.items():
            q = fn(self.coefficient(e))
            out[e] = TPoly(self.table, q.terms, None, _clean=True)
        return MixedSeries(self.a, self.table, out, G, T)

    def agrees_with(self, other: "MixedSeries") -> bool:
        diff = self - other
        return not diff.coeffs

    def __repr__(self):
        return f"MixedSeries(a={self.a}, G={self.G}, T={self.T}, exponents={self.exponents()})"


def shift_substitute(p: TPoly, a: int, sigma: int, copy: int = 0) -> MixedSeries:
    """``p(t - 2 sigma [z_a^{-1}])``: each ``t^a_m`` becomes ``t^a_m - 2 sigma z_a^{-m} / m``.

    Only variables of component ``a`` in the given copy are shifted.  The
    result is exact in every grade up to the weight cap of ``p``.
    """
    table = p.table
    shifted = [(i, v) for i, v in enumerate(table.vars) if v.a == a and v.copy == copy]
    mask = 0
    for i, _ in shifted:
        mask |= 0xFF << (8 * i)
    shift_c = {i: Scalar(mpq(-2 * sigma, v.m)) for i, v in shifted}
    out: dict[int, dict[int, Scalar]] = {}
    # expansion of a pure shifted-variable monomial, memoised
    memo: dict[int, list[tuple[int, int, Scalar]]] = {}

    def expand(key: int):
        hit = memo.get(key)
        if hit is not None:
            return hit
        rows = [(0, 0, ONE)]  # (t-key, z exponent, coeff)
        for i, k in table.decode(key):
            v = table.vars[i]
            c = shift_c[i]
            u = 1 << (8 * i)
            new = []
            for j in range(k + 1):
                # choose t^j (c z^{-m})^{k-j}
                f = Scalar(mpq(binom(k, j))) * (c ** (k - j))
                for tk, ze, cc in rows:
                    new.append((tk + j * u, ze - v.m * (k - j), cc * f))
            rows = new
        memo[key] = rows
        return rows

    for key, c in p.terms.items():
        sk = key & mask
        rest = key - sk
        for tk, ze, cc in expand(sk):
            d = out.setdefault(ze, {})
            k2 = rest + tk
            v = d.get(k2)
            d[k2] = c * cc if v is None else v + c * cc
    coeffs = {e: TPoly(table, {k: c for k, c in d.items() if c}, None, _clean=True) for e, d in out.items()}
    return MixedSeries(a, table, coeffs, p.cap, None)


def exp_factor(table: VarTable, a: int, T: int, parts=((0, 1),)) -> MixedSeries:
    """``exp(sum_m (sum_{(copy, sign) in parts} sign t^a_m[copy]) z_a^m)`` to t-weight ``T``.

    The ``z^k`` coefficient is the weight ``w_a k`` part of the t-exponential
    obtained by setting ``z = 1``, because every ``t^a_m z^m`` has grade 0.
    """
    params = table.params
    wa = params.weight(a)
    arg = TPoly(table, {}, None)
    for v in table.vars:
        if v.a != a or params.var_weight(a, v.m) > T:
            continue
        for copy, sign in parts:
            if v.copy == copy:
                arg = arg + TPoly.var(table, a, v.m, copy).scale(sign)
    E = exp_truncated(arg.truncate(T), T)
    coeffs = {}
    for w, row in E.buckets():
        if w % wa == 0:
            coeffs[w // wa] = TPoly(table, dict(row), None, _clean=True)
    return MixedSeries(a, table, coeffs, None, T)


def residue(s):
    """Coefficient of ``z^0`` of an LSeries (a Scalar) or a MixedSeries (a TPoly)."""
    return s.residue()


__all__ = ["MixedSeries", "shift_substitute", "exp_factor", "residue", "VarId"]
