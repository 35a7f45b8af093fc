"""Exact arithmetic in the Gaussian rationals Q(i).

Every constant that appears in the hierarchy lives in Q(i), so all other
modules use :class:`Scalar` as their coefficient type and every "is zero"
test is exact.
"""

from __future__ import annotations

import re

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["Scalar", "I", "ZERO", "ONE", "parse_scalar", "as_scalar"]

_MPQ = type(mpq(0))


def _q(x) -> mpq:
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return mpq(x.numerator, x.denominator) if not isinstance(x, int) else mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class Scalar:
    """An element ``re + im*i`` of Q(i) with arbitrary-precision parts.

    Instances are immutable and hashable.  Integers, ``Fraction`` and
    ``gmpy2.mpq`` values are accepted wherever a Scalar is expected.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = as_scalar(other)
        return Scalar._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_scalar(other)
        return Scalar._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            o = _q(other)
            return Scalar._raw(self.re * o, self.im * o)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar._raw(a * c, b)
        return Scalar._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_scalar(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)")
        c, d = o.re, o.im
        if not d:
            return Scalar._raw(self.re / c, self.im / c)
        n = c * c + d * d
        a, b = self.re, self.im
        return Scalar._raw((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are defined in Q(i)")
        if n < 0:
            return ONE / (self ** (-n))
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "Scalar":
        return Scalar._raw(self.re, -self.im)

    def inverse(self) -> "Scalar":
        return ONE / self

    def norm2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        try:
            o = _q(other)
        except TypeError:
            return NotImplemented
        return not self.im and self.re == o

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- text forms -------------------------------------------------------

    def __str__(self):
        return render_scalar(self)

    def __repr__(self):
        return f"Scalar('{render_scalar(self)}')"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, obj) -> "Scalar":
        if isinstance(obj, str):
            return parse_scalar(obj)
        return cls(mpq(str(obj.get("re", "0"))), mpq(str(obj.get("im", "0"))))


ZERO = Scalar._raw(mpq(0), mpq(0))
ONE = Scalar._raw(mpq(1), mpq(0))
I = Scalar._raw(mpq(0), mpq(1))


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar._raw(_q(x), mpq(0))


def render_scalar(s: Scalar) -> str:
    """Canonical text form: ``p/q``, ``r/s*i`` or ``p/q+r/s*i``; zero parts omitted."""
    if not s.im:
        return str(s.re)
    im = f"{s.im}*i"
    if not s.re:
        return im
    sign = "+" if s.im > 0 else ""
    return f"{s.re}{sign}{im}"


_RAT = r"\d+(?:/\d+)?"
_TERM = re.compile(
    rf"\s*([+-]?)\s*(?:({_RAT})\s*(\*\s*i|i)?|(i))\s*"
)


def parse_scalar(text: str) -> Scalar:
    """Parse the text grammar accepted by :func:`render_scalar` (and a bit more).

    Accepted: ``3``, ``-1/2``, ``i``, ``-i``, ``2*i``, ``1/2+3/4*i``, ``1-i``.
    """
    if not isinstance(text, str):
        raise TypeError("expected a string")
    s = text.strip()
    if not s:
        raise ValueError("empty scalar literal")
    pos, re_part, im_part, nterms = 0, mpq(0), mpq(0), 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"malformed scalar literal: {text!r}")
        sign, num, star_i, bare_i = m.groups()
        if nterms and not sign:
            raise ValueError(f"malformed scalar literal: {text!r}")
        v = mpq(num) if num else mpq(1)
        if sign == "-":
            v = -v
        if star_i or bare_i:
            im_part += v
        else:
            re_part += v
        nterms += 1
        pos = m.end()
    if nterms > 2:
        raise ValueError(f"malformed scalar literal: {text!r}")
    return Scalar._raw(re_part, im_part)
