"""Sparse polynomials in the times ``t^a_m``, truncated by weight.

Monomials are packed into a single Python integer: each variable owns an
8-bit exponent field, and fields are ordered by variable weight.  Adding
packed keys multiplies monomials, which keeps the inner product loops cheap.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Iterator

from gmpy2 import mpq

from ..coeffield import ONE, ZERO, Scalar, as_scalar
from .params import HierarchyParams, VarId

BITS = 8
MASK = (1 << BITS) - 1
MAX_VAR_WEIGHT = 63

_INF = float("inf")


def _cap_le(a, b) -> bool:
    return (a if a is not None else _INF) <= (b if b is not None else _INF)


def min_cap(*caps):
    """Minimum of weight caps, ``None`` standing for 'exact'."""
    finite = [c for c in caps if c is not None]
    return min(finite) if finite else None


class VarTable:
    """Dense index of the variables ``t^a_m`` (optionally several disjoint copies)."""

    def __init__(self, N: int, copies: int = 1):
        self.params = HierarchyParams(N)
        self.N = N
        self.copies = copies
        base = []
        for a in (1, 2):
            m = 1
            while self.params.var_weight(a, m) <= MAX_VAR_WEIGHT:
                base.append((self.params.var_weight(a, m), a, m))
                m += 2
        base.sort()
        self.base_size = len(base)
        self.vars: list[VarId] = [VarId(a, m, c) for c in range(copies) for _, a, m in base]
        self.weights: list[int] = [w for c in range(copies) for w, _, _ in base]
        self.index = {v: i for i, v in enumerate(self.vars)}
        self._wcache: dict[int, int] = {0: 0}

    def __repr__(self):
        return f"VarTable(N={self.N}, copies={self.copies})"

    def shift(self, v: VarId) -> int:
        try:
            return BITS * self.index[v]
        except KeyError:
            raise ValueError(f"variable {v} of weight above {MAX_VAR_WEIGHT} is not tabulated") from None

    def unit(self, v: VarId) -> int:
        return 1 << self.shift(v)

    def copy_offset(self, copy: int) -> int:
        return BITS * self.base_size * copy

    def decode(self, key: int) -> list[tuple[int, int]]:
        out = []
        i = 0
        while key:
            e = key & MASK
            if e:
                out.append((i, e))
            key >>= BITS
            i += 1
        return out

    def encode(self, exps: dict[VarId, int]) -> int:
        key = 0
        for v, e in exps.items():
            if e < 0 or e > MASK:
                raise ValueError(f"exponent {e} out of range")
            key += e << self.shift(v)
        return key

    def weight(self, key: int) -> int:
        w = self._wcache.get(key)
        if w is None:
            w = sum(self.weights[i] * e for i, e in self.decode(key))
            self._wcache[key] = w
        return w

    def exponent(self, key: int, v: VarId) -> int:
        return (key >> self.shift(v)) & MASK


@lru_cache(maxsize=None)
def var_table(N: int, copies: int = 1) -> VarTable:
    return VarTable(N, copies)


class TPoly:
    """A polynomial in the times, exact for all monomials of weight <= ``cap``.

    ``cap is None`` means the polynomial is exact (no truncation).  Terms of
    weight above the cap are never stored, and every operation recomputes a
    cap that is sound for its output.
    """

    __slots__ = ("table", "terms", "cap", "_buckets")

    def __init__(self, table: VarTable, terms: dict | None = None, cap: int | None = None, *, _clean=False):
        self.table = table
        self.cap = cap
        self._buckets = None
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            wt = table.weight
            self.terms = {
                k: as_scalar(c)
                for k, c in terms.items()
                if c and (cap is None or wt(k) <= cap)
            }

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, table: VarTable, c=1, cap: int | None = None) -> "TPoly":
        c = as_scalar(c)
        return cls(table, {0: c} if c else {}, cap, _clean=True)

    @classmethod
    def var(cls, table: VarTable, a: int, m: int, copy: int = 0, cap: int | None = None) -> "TPoly":
        return cls(table, {table.unit(VarId(a, m, copy)): ONE}, cap)

    @classmethod
    def from_monomials(cls, table: VarTable, items: Iterable[tuple[dict, object]], cap=None) -> "TPoly":
        terms: dict[int, Scalar] = {}
        for exps, c in items:
            k = table.encode(exps)
            terms[k] = terms.get(k, ZERO) + as_scalar(c)
        return cls(table, terms, cap)

    # -- basic queries ----------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Scalar:
        return self.terms.get(0, ZERO)

    def coeff(self, exps: dict[VarId, int]) -> Scalar:
        k = self.table.encode(exps)
        if self.cap is not None and self.table.weight(k) > self.cap:
            raise ValueError(f"coefficient of weight {self.table.weight(k)} lies above cap {self.cap}")
        return self.terms.get(k, ZERO)

    def buckets(self) -> list[tuple[int, list[tuple[int, Scalar]]]]:
        if self._buckets is None:
            by_w: dict[int, list] = {}
            wt = self.table.weight
            for k, c in self.terms.items():
                by_w.setdefault(wt(k), []).append((k, c))
            self._buckets = sorted(by_w.items())
        return self._buckets

    def min_weight(self):
        b = self.buckets()
        return b[0][0] if b else _INF

    def max_weight(self) -> int:
        b = self.buckets()
        return b[-1][0] if b else -1

    def max_exponent(self) -> int:
        return max((e for k in self.terms for _, e in self.table.decode(k)), default=0)

    def homogeneous(self, w: int) -> "TPoly":
        if self.cap is not None and w > self.cap:
            raise ValueError(f"weight {w} lies above cap {self.cap}")
        wt = self.table.weight
        return TPoly(self.table, {k: c for k, c in self.terms.items() if wt(k) == w}, self.cap, _clean=True)

    def monomials(self) -> Iterator[tuple[list[tuple[VarId, int]], Scalar]]:
        """Terms in canonical order: by weight, then by exponent vector."""
        dec = self.table.decode
        rows = []
        for k, c in self.terms.items():
            exps = [(self.table.vars[i], e) for i, e in dec(k)]
            rows.append((self.table.weight(k), [(v.copy, v.a, v.m, e) for v, e in exps], exps, c))
        rows.sort(key=lambda r: (r[0], r[1]))
        for _, _, exps, c in rows:
            yield exps, c

    # -- arithmetic -------------------------------------------------------

    def _check_table(self, other: "TPoly"):
        if other.table is not self.table:
            raise ValueError("polynomials live in different variable tables")

    def __add__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly.const(self.table, other)
        self._check_table(other)
        cap = min_cap(self.cap, other.cap)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            out[k] = c if v is None else v + c
        return TPoly(self.table, out, cap)

    __radd__ = __add__

    def __neg__(self):
        return TPoly(self.table, {k: -c for k, c in self.terms.items()}, self.cap, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly.const(self.table, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TPoly":
        c = as_scalar(c)
        if not c:
            return TPoly(self.table, {}, self.cap, _clean=True)
        return TPoly(self.table, {k: v * c for k, v in self.terms.items()}, self.cap, _clean=True)

    def __mul__(self, other):
        if isinstance(other, TPoly):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def product_cap(self, other: "TPoly"):
        """Largest weight up to which ``self * other`` is known exactly."""
        c1, c2 = self.cap, other.cap
        cands = []
        if c2 is not None:
            cands.append(c2 + self.min_weight())
        if c1 is not None:
            cands.append(c1 + other.min_weight())
        if c1 is not None and c2 is not None:
            cands.append(c1 + c2 + 1)
        cap = min(cands) if cands else None
        return None if cap == _INF else cap

    def mul(self, other: "TPoly", cap: int | None = None) -> "TPoly":
        """Product, truncated at ``min(cap, sound cap)``."""
        self._check_table(other)
        cap = min_cap(cap, self.product_cap(other))
        if cap is None or cap > MASK:
            if self.max_exponent() + other.max_exponent() > MASK:
                raise OverflowError("exponent exceeds the packed field width")
        out: dict[int, Scalar] = {}
        get = out.get
        ob = other.buckets()
        for w1, row1 in self.buckets():
            if cap is not None and w1 + (ob[0][0] if ob else 0) > cap:
                break
            for w2, row2 in ob:
                if cap is not None and w1 + w2 > cap:
                    break
                for k1, a in row1:
                    for k2, b in row2:
                        k = k1 + k2
                        v = get(k)
                        out[k] = a * b if v is None else v + a * b
        return TPoly(self.table, {k: c for k, c in out.items() if c}, cap, _clean=True)

    def __pow__(self, n: int) -> "TPoly":
        result = TPoly.const(self.table, 1)
        for _ in range(n):
            result = result.mul(self)
        return result

    def truncate(self, cap: int | None) -> "TPoly":
        if cap is None:
            return self
        cap = min_cap(cap, self.cap)
        wt = self.table.weight
        return TPoly(self.table, {k: c for k, c in self.terms.items() if wt(k) <= cap}, cap, _clean=True)

    def with_cap(self, cap) -> "TPoly":
        return self.truncate(cap) if cap is not None else self

    # -- calculus ---------------------------------------------------------

    def deriv(self, v: VarId) -> "TPoly":
        """Partial derivative; the cap drops by the weight of ``v``."""
        s = self.table.shift(v)
        u = 1 << s
        out = {}
        for k, c in self.terms.items():
            e = (k >> s) & MASK
            if e:
                out[k - u] = c * e
        cap = None if self.cap is None else self.cap - self.table.weights[self.table.index[v]]
        return TPoly(self.table, out, cap, _clean=True)

    def mul_var(self, v: VarId) -> "TPoly":
        u = self.table.unit(v)
        w = self.table.weights[self.table.index[v]]
        for k in self.terms:
            if (k >> self.table.shift(v)) & MASK == MASK:
                raise OverflowError("exponent exceeds the packed field width")
        cap = None if self.cap is None else self.cap + w
        return TPoly(self.table, {k + u: c for k, c in self.terms.items()}, cap, _clean=True)

    def euler(self, weights: Callable[[VarId], object]) -> "TPoly":
        """Apply ``sum_v weights(v) * t_v d/dt_v`` (diagonal on monomials)."""
        wv = [as_scalar(weights(v)) for v in self.table.vars]
        out = {}
        for k, c in self.terms.items():
            s = ZERO
            for i, e in self.table.decode(k):
                s = s + wv[i] * e
            if s:
                out[k] = c * s
        return TPoly(self.table, out, self.cap, _clean=True)

    def restrict(self, keep: Callable[[VarId], bool]) -> "TPoly":
        """Set every variable with ``keep(v) == False`` to zero."""
        kill = 0
        for i, v in enumerate(self.table.vars):
            if not keep(v):
                kill |= MASK << (BITS * i)
        return TPoly(self.table, {k: c for k, c in self.terms.items() if not k & kill}, self.cap, _clean=True)

    def embed(self, table: VarTable, copy: int) -> "TPoly":
        """Move a single-copy polynomial into copy ``copy`` of a multi-copy table."""
        if table.N != self.table.N or self.table.copies != 1:
            raise ValueError("can only embed single-copy polynomials with the same N")
        off = table.copy_offset(copy)
        return TPoly(table, {k << off: c for k, c in self.terms.items()}, self.cap, _clean=True)

    # -- inversion / exponentials ----------------------------------------

    def inverse(self) -> "TPoly":
        """Multiplicative inverse, exact up to the same cap (needs nonzero constant)."""
        c0 = self.constant_term()
        if not c0:
            raise ZeroDivisionError("polynomial with zero constant term is not invertible")
        if self.cap is None:
            rest = self - c0
            if not rest.is_zero():
                raise ValueError("the inverse of a non-constant exact polynomial is an infinite series; truncate first")
            return TPoly.const(self.table, ONE / c0)
        comps = {w: TPoly(self.table, dict(row), None, _clean=True) for w, row in self.buckets()}
        inv0 = ONE / c0
        parts = {0: TPoly.const(self.table, inv0)}
        for w in range(1, self.cap + 1):
            acc = TPoly(self.table)
            for j, comp in comps.items():
                if 0 < j <= w and (w - j) in parts:
                    acc = acc + comp.mul(parts[w - j])
            parts[w] = acc.scale(-inv0)
        out = {}
        for p in parts.values():
            out.update(p.terms)
        return TPoly(self.table, out, self.cap)

    # -- equality / serialisation -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, TPoly):
            return self.table is other.table and self.cap == other.cap and self.terms == other.terms
        if self.terms.keys() - {0}:
            return False
        return self.constant_term() == other

    def __hash__(self):
        return hash((self.cap, frozenset(self.terms.items())))

    def agrees_with(self, other: "TPoly") -> bool:
        """Equality on the common known range of weights."""
        cap = min_cap(self.cap, other.cap)
        return (self.truncate(cap) - other.truncate(cap)).is_zero()

    def __repr__(self):
        return f"TPoly({self.render()}, cap={self.cap})"

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.monomials():
            mono = "*".join(f"{v}^{e}" if e > 1 else str(v) for v, e in exps)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    def to_json(self) -> dict:
        names = {0: "t'", 1: "t''"} if self.table.copies == 2 else {0: "t"}
        rows = []
        for exps, c in self.monomials():
            rows.append({"monomial": [[names.get(v.copy, "t"), v.a, v.m, e] for v, e in exps], "coeff": c.to_json()})
        return {"N": self.table.N, "weight_cap": self.cap, "terms": rows}

    @classmethod
    def from_json(cls, obj: dict, table: VarTable | None = None) -> "TPoly":
        if table is None:
            table = var_table(int(obj["N"]))
        copy_of = {"t": 0, "t'": 0, "t''": 1}
        items = []
        for row in obj["terms"]:
            exps: dict[VarId, int] = {}
            for name, a, m, e in row["monomial"]:
                v = VarId(int(a), int(m), copy_of[name])
                exps[v] = exps.get(v, 0) + int(e)
            items.append((exps, Scalar.from_json(row["coeff"])))
        cap = obj.get("weight_cap")
        return cls.from_monomials(table, items, None if cap is None else int(cap))


def exp_truncated(p: TPoly, cap: int | None = None) -> TPoly:
    """``exp(p)`` for ``p`` without constant term, exact up to the cap.

    Uses the weighted Euler recurrence ``w E_w = sum_j j p_j E_{w-j}`` on
    homogeneous components, which is exact and needs no division by
    anything but the weight.
    """
    if p.constant_term():
        raise ValueError("exp of a polynomial with nonzero constant term leaves Q(i)")
    cap = min_cap(cap, p.cap)
    if cap is None:
        if p.is_zero():
            return TPoly.const(p.table, 1)
        raise ValueError("exp of a nonzero exact polynomial is infinite; give a weight cap")
    table = p.table
    comps = [(j, TPoly(table, dict(row), None, _clean=True)) for j, row in p.buckets() if j <= cap]
    parts: dict[int, TPoly] = {0: TPoly.const(table, 1)}
    for w in range(1, cap + 1):
        acc = TPoly(table)
        for j, comp in comps:
            if j > w:
                break
            prev = parts.get(w - j)
            if prev is not None and prev.terms:
                acc = acc + comp.mul(prev).scale(j)
        parts[w] = acc.scale(mpq(1, w))
    out = {}
    for q in parts.values():
        out.update(q.terms)
    return TPoly(table, out, cap, _clean=True)
