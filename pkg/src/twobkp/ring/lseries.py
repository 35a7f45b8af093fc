"""Laurent series in ``z^{-1}`` with an explicit window of known coefficients.

A series stores finitely many coefficients together with ``lo``: every
coefficient at an exponent ``>= lo`` is known (absent means zero), and
everything below ``lo`` is unknown.  ``lo is None`` marks an exact Laurent
polynomial.  Reading below ``lo`` raises :class:`WindowError`.
"""

from __future__ import annotations

from gmpy2 import mpq

from ..coeffield import ONE, ZERO, Scalar, as_scalar

_NEG_INF = float("-inf")


class WindowError(ValueError):
    """Raised when a computation needs a coefficient outside the known window."""


def binom(alpha, n: int) -> mpq:
    """Generalised binomial coefficient ``alpha (alpha-1) ... (alpha-n+1) / n!``."""
    alpha = mpq(alpha) if not isinstance(alpha, type(mpq(0))) else alpha
    out = mpq(1)
    for j in range(n):
        out = out * (alpha - j) / (j + 1)
    return out


def _max_lo(*los):
    vals = [x for x in los if x is not None and x != _NEG_INF]
    return max(vals) if vals else None


class LSeries:
    __slots__ = ("coeffs", "lo", "var")

    def __init__(self, coeffs: dict | None = None, lo: int | None = None, var: str = "z"):
        self.lo = lo
        self.var = var
        out = {}
        if coeffs:
            for e, c in coeffs.items():
                c = as_scalar(c)
                if c and (lo is None or e >= lo):
                    out[int(e)] = c
        self.coeffs = out

    @classmethod
    def _clean(cls, coeffs, lo, var):
        s = object.__new__(cls)
        s.coeffs, s.lo, s.var = coeffs, lo, var
        return s

    @classmethod
    def monomial(cls, e: int, c=1, var: str = "z", lo: int | None = None) -> "LSeries":
        return cls({e: c}, lo, var)

    @classmethod
    def const(cls, c=1, var: str = "z", lo: int | None = None) -> "LSeries":
        return cls({0: c}, lo, var)

    @classmethod
    def zero(cls, var: str = "z", lo: int | None = None) -> "LSeries":
        return cls({}, lo, var)

    # -- window bookkeeping -----------------------------------------------

    @property
    def hi(self):
        return max(self.coeffs) if self.coeffs else None

    @property
    def window(self):
        return (self.lo, self.hi)

    def top(self):
        """Exponent bound above which all coefficients vanish."""
        if self.coeffs:
            return max(self.coeffs)
        if self.lo is None:
            return _NEG_INF
        return self.lo - 1

    def is_exact(self) -> bool:
        return self.lo is None

    def is_zero(self) -> bool:
        """All *known* coefficients vanish."""
        return not self.coeffs

    def coeff(self, e: int) -> Scalar:
        if self.lo is not None and e < self.lo:
            raise WindowError(f"coefficient of {self.var}^{e} requested below window lo={self.lo}")
        return self.coeffs.get(e, ZERO)

    __getitem__ = coeff

    def leading(self) -> tuple[int, Scalar]:
        if not self.coeffs:
            raise WindowError("leading term is not inside the known window")
        d = max(self.coeffs)
        return d, self.coeffs[d]

    def truncate(self, lo: int) -> "LSeries":
        """Forget coefficients below ``lo`` (raises if that would widen the window)."""
        if self.lo is not None and lo < self.lo:
            raise WindowError(f"cannot extend window from lo={self.lo} down to {lo}")
        return LSeries._clean({e: c for e, c in self.coeffs.items() if e >= lo}, lo, self.var)

    def _same_var(self, other: "LSeries"):
        if other.var != self.var:
            raise ValueError(f"series in different variables: {self.var} vs {other.var}")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LSeries):
            other = LSeries.const(other, self.var)
        self._same_var(other)
        lo = _max_lo(self.lo, other.lo)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e)
            out[e] = c if v is None else v + c
        return LSeries(out, lo, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LSeries._clean({e: -c for e, c in self.coeffs.items()}, self.lo, self.var)

    def __sub__(self, other):
        if not isinstance(other, LSeries):
            other = LSeries.const(other, self.var)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LSeries":
        c = as_scalar(c)
        if not c:
            return LSeries._clean({}, self.lo, self.var)
        return LSeries._clean({e: v * c for e, v in self.coeffs.items()}, self.lo, self.var)

    def __mul__(self, other):
        if isinstance(other, LSeries):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def product_lo(self, other: "LSeries"):
        if (self.lo is None and not self.coeffs) or (other.lo is None and not other.coeffs):
            return None
        cands = []
        if self.lo is not None:
            cands.append(self.lo + other.top())
        if other.lo is not None:
            cands.append(other.lo + self.top())
        return _max_lo(*cands) if cands else None

    def mul(self, other: "LSeries", lo: int | None = None) -> "LSeries":
        self._same_var(other)
        plo = self.product_lo(other)
        if plo == _NEG_INF:
            plo = None
        if lo is not None:
            if plo is not None and lo < plo:
                raise WindowError(f"product only known down to {plo}, requested {lo}")
            plo = lo
        out: dict[int, Scalar] = {}
        g_items = sorted(other.coeffs.items(), reverse=True)
        for e1, c1 in self.coeffs.items():
            for e2, c2 in g_items:
                e = e1 + e2
                if plo is not None and e < plo:
                    break
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return LSeries({e: c for e, c in out.items() if c}, plo, self.var)

    def inverse(self) -> "LSeries":
        """``1/f``; a series known down to ``lo`` with leading exponent ``d`` gives ``lo - 2d``."""
        d, c = self.leading()
        if self.lo is None:
            if len(self.coeffs) == 1:
                return LSeries({-d: ONE / c}, None, self.var)
            raise WindowError("inverse of a non-monomial exact series needs a window; truncate first")
        depth = d - self.lo  # relative precision
        inv_c = ONE / c
        # f = c z^d (1 + u); series for 1 / (1 + u) by the usual recurrence
        u = {d - e: v * inv_c for e, v in self.coeffs.items() if e != d}
        r = {0: ONE}
        for k in range(1, depth + 1):
            s = ZERO
            for j, uj in u.items():
                if j <= k:
                    rk = r.get(k - j)
                    if rk is not None:
                        s = s + uj * rk
            if s:
                r[k] = -s
        return LSeries({-d - k: v * inv_c for k, v in r.items()}, -d - depth, self.var)

    def __truediv__(self, other):
        if isinstance(other, LSeries):
            return self.mul(other.inverse())
        return self.scale(ONE / as_scalar(other))

    def __pow__(self, n: int) -> "LSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = LSeries.const(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result.mul(base)
            n >>= 1
            if n:
                base = base.mul(base)
        return result

    # -- operators on z ---------------------------------------------------

    def shift(self, s: int) -> "LSeries":
        """Multiply by ``z^s``."""
        lo = None if self.lo is None else self.lo + s
        return LSeries._clean({e + s: c for e, c in self.coeffs.items()}, lo, self.var)

    def z_deriv(self) -> "LSeries":
        """``z d/dz``."""
        return LSeries({e: c * e for e, c in self.coeffs.items()}, self.lo, self.var)

    def deriv(self) -> "LSeries":
        """``d/dz``."""
        return self.z_deriv().shift(-1)

    def sign_twist(self) -> "LSeries":
        """``f(-z)``."""
        return LSeries._clean({e: (-c if e % 2 else c) for e, c in self.coeffs.items()}, self.lo, self.var)

    def residue(self) -> Scalar:
        """Coefficient in front of ``dz/z``."""
        return self.coeff(0)

    def root_monic(self, n: int) -> "LSeries":
        """The n-th root with leading coefficient 1 (input must be ``z^{nd}(1 + ...)``).

        Newton iteration ``r <- ((n-1) r + s / r^{n-1}) / n`` in exact arithmetic.
        """
        D, c = self.leading()
        if c != ONE:
            raise ValueError(f"root_monic needs leading coefficient 1, got {c}")
        if D % n:
            raise ValueError(f"leading exponent {D} is not divisible by {n}")
        d = D // n
        if self.lo is None:
            if len(self.coeffs) == 1:
                return LSeries({d: ONE}, None, self.var)
            raise WindowError("root of a non-monomial exact series needs a window; truncate first")
        depth = D - self.lo
        target = d - depth
        r = LSeries({d: ONE}, target, self.var)
        inv_n = Scalar(mpq(1, n))
        for _ in range(2 * depth + 8):
            nxt = (r.scale(n - 1) + self.mul((r ** (n - 1)).inverse())).scale(inv_n).truncate(target)
            if nxt == r:
                return r
            r = nxt
        raise RuntimeError("root iteration did not settle")

    def sqrt_monic(self) -> "LSeries":
        return self.root_monic(2)

    def compose(self, g: "LSeries") -> "LSeries":
        """``f(g(z))`` for ``g = c z + lower`` (``f`` in the variable of ``self``)."""
        d, c = g.leading()
        if d != 1:
            raise ValueError("compose needs an inner series with leading exponent 1")
        K = self.top()
        if K == _NEG_INF:
            return LSeries.zero(g.var)
        cands = []
        if self.lo is not None:
            cands.append(self.lo)
        if g.lo is not None:
            cands.append(K - 1 + g.lo)
        lo = max(cands) if cands else None
        if lo is None:
            if self.coeffs and min(self.coeffs) < 0 and len(g.coeffs) > 1:
                raise WindowError("exact composition with negative powers is infinite; truncate first")
        out = LSeries.zero(g.var, lo)
        ginv = None
        for k, fk in sorted(self.coeffs.items()):
            if lo is not None and k < lo:
                continue
            if k >= 0:
                gk = g ** k
            else:
                if ginv is None:
                    ginv = g.inverse()
                gk = ginv ** (-k)
            if lo is not None:
                gk = gk.truncate(lo)
            out = out + gk.scale(fk)
        return out

    def reversion(self, depth: int | None = None, var: str | None = None) -> "LSeries":
        """Compositional inverse of ``f = z + lower`` as a series in ``var``.

        Newton iteration ``g <- g - (f(g) - w) / f'(g)``; the result is known
        down to ``1 - depth`` where ``depth`` defaults to the relative window
        of ``f``.
        """
        d, c = self.leading()
        if d != 1 or c != ONE:
            raise ValueError("reversion needs f = z + (lower order terms)")
        var = var or self.var
        if depth is None:
            if self.lo is None:
                raise WindowError("give a depth for the reversion of an exact series")
            depth = 1 - self.lo
        elif self.lo is not None and depth > 1 - self.lo:
            raise WindowError(f"reversion depth {depth} exceeds the known window of f")
        target = 1 - depth
        f = self.truncate(target) if self.lo is None or self.lo < target else self
        f = LSeries._clean(dict(f.coeffs), f.lo, var)
        fp = f.deriv()
        w = LSeries.monomial(1, 1, var)
        g = LSeries({1: ONE}, target, var)
        for _ in range(2 * depth + 8):
            resid = f.compose(g) - w
            step = resid.mul(fp.compose(g).inverse())
            nxt = (g - step).truncate(target)
            if nxt == g:
                return g
            g = nxt
        raise RuntimeError("reversion iteration did not settle")

    # -- equality / serialisation -----------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LSeries):
            return NotImplemented
        return self.var == other.var and self.lo == other.lo and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.lo, frozenset(self.coeffs.items())))

    def agrees_with(self, other: "LSeries") -> bool:
        lo = _max_lo(self.lo, other.lo)
        diff = self - other
        return diff.is_zero() if lo is None else diff.truncate(lo).is_zero()

    def __repr__(self):
        return f"LSeries({self.render()}, lo={self.lo})"

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*{self.var}^{e}" for e, c in sorted(self.coeffs.items(), reverse=True))

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "window": [self.lo, self.hi],
            "coeffs": {str(e): c.to_json() for e, c in sorted(self.coeffs.items(), reverse=True)},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LSeries":
        lo = obj["window"][0]
        hi = obj["window"][1]
        coeffs = {int(e): Scalar.from_json(c) for e, c in obj["coeffs"].items()}
        if hi is not None and any(e > hi for e in coeffs):
            raise ValueError("coefficient above the declared support bound")
        return cls(coeffs, None if lo is None else int(lo), obj.get("var", "z"))


class VVec:
    """A pair ``(f1(z1), f2(z2))``."""

    __slots__ = ("c1", "c2")

    def __init__(self, c1: LSeries, c2: LSeries):
        self.c1 = c1
        self.c2 = c2

    @classmethod
    def zero(cls, lo1=None, lo2=None) -> "VVec":
        return cls(LSeries.zero("z1", lo1), LSeries.zero("z2", lo2))

    def __getitem__(self, a: int) -> LSeries:
        return self.c1 if a == 1 else self.c2

    def __add__(self, other: "VVec"):
        return VVec(self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: "VVec"):
        return VVec(self.c1 - other.c1, self.c2 - other.c2)

    def __neg__(self):
        return VVec(-self.c1, -self.c2)

    def scale(self, c) -> "VVec":
        return VVec(self.c1.scale(c), self.c2.scale(c))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.c1.is_zero() and self.c2.is_zero()

    def __eq__(self, other):
        return isinstance(other, VVec) and self.c1 == other.c1 and self.c2 == other.c2

    def __repr__(self):
        return f"VVec({self.c1!r}, {self.c2!r})"

    def to_json(self) -> dict:
        return {"c1": self.c1.to_json(), "c2": self.c2.to_json()}
