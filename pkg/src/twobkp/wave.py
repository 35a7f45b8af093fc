"""Wave functions as Taylor series in ``(x1, x2)`` with Laurent coefficients in ``z``.

Each component is stored with its exponential factor ``e^{x_a z_a}`` removed.
An :class:`XZSeries` is exact for x-monomials of total degree ``<= D`` and
z-exponents ``>= lo``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from .coeffield import I, ONE, ZERO, Scalar, as_scalar
from .ring.lseries import LSeries, VVec, WindowError

_NEG_INF = float("-inf")


class XZSeries:
    __slots__ = ("coeffs", "D", "lo", "var")

    def __init__(self, coeffs: dict | None = None, D: int = 0, lo: int | None = None, var: str = "z"):
        self.D = D
        self.lo = lo
        self.var = var
        out = {}
        for (i, j, e), c in (coeffs or {}).items():
            c = as_scalar(c)
            if c and i + j <= D and (lo is None or e >= lo):
                out[(i, j, e)] = c
        self.coeffs = out

    @classmethod
    def from_lseries(cls, s: LSeries, D: int, i: int = 0, j: int = 0) -> "XZSeries":
        """``x1^i x2^j s(z)``."""
        return cls({(i, j, e): c for e, c in s.coeffs.items()}, D, s.lo, s.var)

    @classmethod
    def one(cls, D: int, var: str = "z") -> "XZSeries":
        return cls({(0, 0, 0): ONE}, D, None, var)

    def coeff(self, i: int, j: int, e: int) -> Scalar:
        if i + j > self.D:
            raise WindowError(f"x-degree {i + j} is beyond the Taylor order {self.D}")
        if self.lo is not None and e < self.lo:
            raise WindowError(f"{self.var}^{e} is below window lo={self.lo}")
        return self.coeffs.get((i, j, e), ZERO)

    def x_slice(self, i: int, j: int) -> LSeries:
        if i + j > self.D:
            raise WindowError(f"x-degree {i + j} is beyond the Taylor order {self.D}")
        return LSeries({e: c for (a, b, e), c in self.coeffs.items() if a == i and b == j}, self.lo, self.var)

    def top(self):
        if self.coeffs:
            return max(e for _, _, e in self.coeffs)
        return _NEG_INF if self.lo is None else self.lo - 1

    def truncate(self, D: int | None = None, lo: int | None = None) -> "XZSeries":
        D = self.D if D is None else D
        if D > self.D:
            raise WindowError("cannot raise the Taylor order")
        if lo is None:
            lo = self.lo
        elif self.lo is not None and lo < self.lo:
            raise WindowError(f"cannot extend window from lo={self.lo} down to {lo}")
        return XZSeries(self.coeffs, D, lo, self.var)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _lo2(self, other):
        if self.lo is None:
            return other.lo
        if other.lo is None:
            return self.lo
        return max(self.lo, other.lo)

    def _same(self, other):
        if other.var != self.var:
            raise ValueError("series in different variables")

    def __add__(self, other: "XZSeries") -> "XZSeries":
        self._same(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return XZSeries(out, min(self.D, other.D), self._lo2(other), self.var)

    def __neg__(self):
        return XZSeries({k: -c for k, c in self.coeffs.items()}, self.D, self.lo, self.var)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "XZSeries":
        c = as_scalar(c)
        return XZSeries({k: v * c for k, v in self.coeffs.items()}, self.D, self.lo, self.var)

    def __mul__(self, other):
        if isinstance(other, XZSeries):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = scale

    def mul(self, other: "XZSeries") -> "XZSeries":
        self._same(other)
        D = min(self.D, other.D)
        if (self.lo is None and not self.coeffs) or (other.lo is None and not other.coeffs):
            return XZSeries({}, D, None, self.var)
        cands = []
        if self.lo is not None:
            cands.append(self.lo + other.top())
        if other.lo is not None:
            cands.append(other.lo + self.top())
        cands = [c for c in cands if c != _NEG_INF]
        lo = max(cands) if cands else None
        out: dict = {}
        for (i1, j1, e1), c1 in self.coeffs.items():
            for (i2, j2, e2), c2 in other.coeffs.items():
                if i1 + i2 + j1 + j2 > D:
                    continue
                e = e1 + e2
                if lo is not None and e < lo:
                    continue
                k = (i1 + i2, j1 + j2, e)
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return XZSeries(out, D, lo, self.var)

    def shift(self, s: int) -> "XZSeries":
        """Multiply by ``z^s``."""
        lo = None if self.lo is None else self.lo + s
        return XZSeries({(i, j, e + s): c for (i, j, e), c in self.coeffs.items()}, self.D, lo, self.var)

    def z_deriv(self) -> "XZSeries":
        return XZSeries({(i, j, e): c * e for (i, j, e), c in self.coeffs.items()}, self.D, self.lo, self.var)

    def d1(self) -> "XZSeries":
        return XZSeries({(i - 1, j, e): c * i for (i, j, e), c in self.coeffs.items() if i}, self.D - 1, self.lo, self.var)

    def d2(self) -> "XZSeries":
        return XZSeries({(i, j - 1, e): c * j for (i, j, e), c in self.coeffs.items() if j}, self.D - 1, self.lo, self.var)

    def mul_x1(self) -> "XZSeries":
        return XZSeries({(i + 1, j, e): c for (i, j, e), c in self.coeffs.items()}, self.D, self.lo, self.var)

    def mul_x2(self) -> "XZSeries":
        return XZSeries({(i, j + 1, e): c for (i, j, e), c in self.coeffs.items()}, self.D, self.lo, self.var)

    def exp(self) -> "XZSeries":
        """``exp(self)`` for an argument with no x-degree-0 part."""
        if any(i + j == 0 for i, j, _ in self.coeffs):
            raise ValueError("exp needs an argument of positive x-degree")
        result = XZSeries.one(self.D, self.var)
        term = XZSeries.one(self.D, self.var)
        for n in range(1, self.D + 1):
            term = term.mul(self).scale(Scalar(mpq(1, n)))
            result = result + term
        return result

    def min_x_degree(self) -> int:
        return min((i + j for i, j, _ in self.coeffs), default=self.D + 1)

    def equal_on(self, other: "XZSeries", D: int | None = None, lo: int | None = None) -> bool:
        """Coefficientwise equality on the common (or given) window."""
        D = min(self.D, other.D) if D is None else D
        lo = self._lo2(other) if lo is None else lo
        for k in set(self.coeffs) | set(other.coeffs):
            i, j, e = k
            if i + j > D or (lo is not None and e < lo):
                continue
            if self.coeffs.get(k, ZERO) != other.coeffs.get(k, ZERO):
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, XZSeries) and (self.D, self.lo, self.var, self.coeffs) == (other.D, other.lo, other.var, other.coeffs)

    def __repr__(self):
        return f"XZSeries(D={self.D}, lo={self.lo}, terms={len(self.coeffs)})"

    def to_json(self) -> dict:
        rows = [[i, j, e, c.to_json()] for (i, j, e), c in sorted(self.coeffs.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0], -kv[0][2]))]
        return {"var": self.var, "x_order": self.D, "z_lo": self.lo, "terms": rows}


@dataclass
class WaveExpansion:
    """The two components ``Psi^{(a)}`` with ``e^{x_a z_a}`` factored out."""

    N: int
    u1: XZSeries
    u2: XZSeries

    def component(self, a: int) -> XZSeries:
        return self.u1 if a == 1 else self.u2

    @property
    def x_order(self) -> int:
        return min(self.u1.D, self.u2.D)

    def taylor_vector(self, m: int, n: int) -> VVec:
        """Coefficient of ``x1^m x2^n`` in ``Psi = Psi^{(1)} e1 + i Psi^{(2)} e2`` with exponentials restored."""
        c1 = LSeries.zero("z1", None)
        for i in range(m + 1):
            c1 = c1 + self.u1.x_slice(i, n).shift(m - i).scale(Scalar(mpq(1, factorial(m - i))))
        c2 = LSeries.zero("z2", None)
        for j in range(n + 1):
            c2 = c2 + self.u2.x_slice(m, j).shift(n - j).scale(Scalar(mpq(1, factorial(n - j))))
        return VVec(c1, c2.scale(I))

    def equal_on(self, other: "WaveExpansion") -> bool:
        return self.u1.equal_on(other.u1) and self.u2.equal_on(other.u2)

    def leading_ok(self) -> bool:
        """Shape ``1 + O(z^{-1})``: the ``z^0`` coefficient is exactly 1 and nothing lies above."""
        for u in (self.u1, self.u2):
            for (i, j, e), c in u.coeffs.items():
                if e > 0 or (e == 0 and (i, j) != (0, 0)):
                    return False
            if u.coeff(0, 0, 0) != ONE:
                return False
        return True

    def to_json(self) -> dict:
        return {"N": self.N, "psi1": self.u1.to_json(), "psi2": self.u2.to_json()}
