"""Points of the Grassmannian from wave functions, and their symmetry checks.

The space is ``V = C((z1^{-1})) e1 + C((z2^{-1})) e2`` with the pairing
``(f, g) = Res dz1/z1 f1(z1) g1(-z1) + Res dz2/z2 f2(z2) g2(-z2)``.  The
reference subspace is ``U0 = C(e1 + i e2) + C[z1] z1 e1 + C[z2] z2 e2``; the
projection onto it keeps positive powers and sends the constant part
``c1 e1 + c2 e2`` to ``((c1 - i c2)/2)(e1 + i e2)``.

A point is represented by the x-Taylor coefficients ``w_{m,n}`` of ``Psi``;
the vectors ``w_00``, ``m! w_{m0}`` and ``-i n! w_{0n}`` project to the U0
basis unitriangularly, so membership in the span is decided by reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from gmpy2 import mpq

from .coeffield import I, ZERO, Scalar
from .report import CheckReport
from .ring.lseries import VVec, WindowError
from .virasoro import ell_apply
from .wave import WaveExpansion, XZSeries

ALL_FLAGS = ("isotropy", "big_cell", "reduction", "string")


def pair(f: VVec, g: VVec) -> Scalar:
    """The residue pairing; raises :class:`WindowError` if ``z^0`` of a product is unknown."""
    total = ZERO
    for a in (1, 2):
        prod = f[a].mul(g[a].sign_twist())
        total = total + prod.residue()
    return total


def u0_projection(v: VVec) -> tuple[Scalar, dict[int, Scalar], dict[int, Scalar]]:
    """``(alpha, {k: z1^k coeff}, {k: z2^k coeff})`` for ``k >= 1``."""
    c1 = v.c1.coeff(0)
    c2 = v.c2.coeff(0)
    alpha = (c1 - I * c2) * Scalar(mpq(1, 2))
    return alpha, _positive(v.c1), _positive(v.c2)


def _positive(s) -> dict[int, Scalar]:
    return {e: c for e, c in s.coeffs.items() if e > 0}


@dataclass
class GrPoint:
    """Truncated span of the Taylor vectors of a wave function."""

    N: int
    x_order: int
    vectors: dict  # (m, n) -> VVec, Taylor coefficient of x1^m x2^n
    pivots: dict = field(default_factory=dict)  # (0, 0) / (1, k) / (2, k) -> VVec
    dropped: list = field(default_factory=list)  # pivots whose positive part is not fully known

    def pivot(self, kind: int, k: int) -> VVec | None:
        return self.pivots.get((kind, k))

    def windows(self) -> dict:
        return {f"{m},{n}": [v.c1.lo, v.c2.lo] for (m, n), v in sorted(self.vectors.items())}

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "x_order": self.x_order,
            "windows": self.windows(),
            "basis": [{"m": m, "n": n, "vector": v.to_json()} for (m, n), v in sorted(self.vectors.items())],
        }


def span_from_wave(w: WaveExpansion, x_order: int | None = None) -> GrPoint:
    """Taylor vectors ``w_{m,n}`` for ``m + n <= x_order`` with the exponentials restored."""
    D = w.x_order if x_order is None else x_order
    if D > w.x_order:
        raise WindowError(f"wave only known to x-order {w.x_order}")
    vecs = {}
    for m in range(D + 1):
        for n in range(D + 1 - m):
            vecs[(m, n)] = w.taylor_vector(m, n)
    piv = {(0, 0): vecs[(0, 0)]}
    dropped = []
    for k in range(1, D + 1):
        for key, v in (((1, k), vecs[(k, 0)].scale(factorial(k))), ((2, k), vecs[(0, k)].scale(-I * factorial(k)))):
            # a pivot is usable only if all its positive powers are inside the window
            if _lo(v[1]) <= 1 and _lo(v[2]) <= 1:
                piv[key] = v
            else:
                dropped.append(list(key))
    return GrPoint(w.N, D, vecs, piv, dropped)


def _lo(s) -> float:
    return float("-inf") if s.lo is None else s.lo


class OutsideSpan(Exception):
    """Reduction needs a pivot beyond the truncated span."""


def reduce(p: GrPoint, v: VVec) -> VVec:
    """Subtract pivot multiples until the U0-projection of ``v`` vanishes."""
    r = v
    for a in (1, 2):
        while True:
            pos = _positive(r[a])
            if not pos:
                break
            k = max(pos)
            b = p.pivot(a, k)
            if b is None:
                raise OutsideSpan(f"needs pivot z{a}^{k}")
            r = r - b.scale(pos[k])
    alpha, _, _ = u0_projection(r)
    if alpha:
        r = r - p.pivot(0, 0).scale(alpha)
    return r


def _in_span(p: GrPoint, v: VVec):
    """``(True|False|None, detail)``; None when the needed pivots lie outside the truncation."""
    try:
        r = reduce(p, v)
    except OutsideSpan as exc:
        return None, str(exc)
    except WindowError as exc:
        return None, str(exc)
    # the remainder must vanish on the part of the window that was actually known
    return r.is_zero(), {"window": [r.c1.lo, r.c2.lo], "nonzero": [sorted(r.c1.coeffs)[-3:], sorted(r.c2.coeffs)[-3:]]}


def subspace_checks(p: GrPoint, flags=ALL_FLAGS) -> CheckReport:
    rep = CheckReport(command="grassmannian-check", config={"N": p.N, "x_order": p.x_order, "flags": list(flags)})
    keys = sorted(p.vectors)
    h = 2 * p.N - 2
    if "isotropy" in flags:
        bad, n_pairs, skipped = [], 0, 0
        for i, ki in enumerate(keys):
            for kj in keys[i:]:
                try:
                    val = pair(p.vectors[ki], p.vectors[kj])
                except WindowError:
                    skipped += 1
                    continue
                n_pairs += 1
                if val:
                    bad.append([list(ki), list(kj), str(val)])
        rep.add("isotropy", not bad and n_pairs > 0, n_pairs=n_pairs, skipped=skipped, failures=bad[:10])
    if "big_cell" in flags:
        bad = []
        for (kind, k), v in sorted(p.pivots.items()):
            one = Scalar(1)
            p1, p2 = _positive(v[1]), _positive(v[2])
            if kind == 0:
                try:
                    alpha, _, _ = u0_projection(v)
                except WindowError as exc:
                    bad.append([kind, k, str(exc)])
                    continue
                lead_ok = alpha == one and not p1 and not p2
            elif kind == 1:
                lead_ok = not p2 and bool(p1) and max(p1) == k and p1[k] == one
            else:
                lead_ok = not p1 and bool(p2) and max(p2) == k and p2[k] == one
            if not lead_ok:
                bad.append([kind, k])
        # vectors that are not pivots must reduce to zero (injectivity of the projection)
        extra = []
        for (m, n), v in sorted(p.vectors.items()):
            if m and n:
                ok, detail = _in_span(p, v)
                if ok is False:
                    extra.append([m, n, detail])
        rep.add("big_cell", not bad and not extra, pivot_failures=bad, kernel_failures=extra[:6],
                n_pivots=len(p.pivots), unknown_pivots=p.dropped)
    for name in ("reduction", "string"):
        if name not in flags:
            continue
        bad, n_checked, skipped = [], 0, []
        for (m, n), v in sorted(p.vectors.items()):
            if name == "reduction":
                images = [("(z1^h,z2^2)", VVec(v.c1.shift(h), v.c2.shift(2)))]
            else:
                images = [("ell_-1", ell_apply(p.N, -1, v))]
            for tag, img in images:
                ok, detail = _in_span(p, img)
                if ok is None:
                    skipped.append([m, n, tag])
                    continue
                n_checked += 1
                if not ok:
                    bad.append({"m": m, "n": n, "image": tag, **detail})
        rep.add(name, not bad and n_checked > 0, n_checked=n_checked, n_skipped=len(skipped), failures=bad[:6])
    return rep


def vacuum_wave(N: int, x_order: int) -> WaveExpansion:
    """``Psi = (e^{x1 z1}, i e^{x2 z2})``, the wave of ``tau = 1``, exactly."""
    return WaveExpansion(N, XZSeries.one(x_order, "z1"), XZSeries.one(x_order, "z2"))


def gaussian_reduction_routes(model, x_order: int) -> dict:
    """The reduction symmetry of a Gaussian point by two routes.

    ``span``: ``(z1^h, z2^2)`` maps the Taylor span of the direct wave into
    itself.  ``curve``: the spectral pair satisfies the curve relation with
    ``lambda = z_a^{h_a}``, which makes ``U = C[X1, X2] Psi(0)`` stable.
    """
    from .gaussian import direct_wave, verify_structure

    spanned = subspace_checks(span_from_wave(direct_wave(model, x_order)), ("reduction",))
    structural = verify_structure(model)
    return {"span": spanned.passed, "curve": structural["curve_relation"].passed}
