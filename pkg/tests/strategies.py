from __future__ import annotations

from hypothesis import strategies as st

from twobkp.coeffield import Scalar
from twobkp.ring import TPoly, VarId, var_table

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def scalars(draw, nonzero=False):
    re = draw(small_q)
    im = draw(small_q)
    s = Scalar(f"{re.numerator}/{re.denominator}", f"{im.numerator}/{im.denominator}")
    if nonzero and not s:
        s = Scalar(1)
    return s


@st.composite
def tpolys(draw, N=3, cap=6, max_terms=4, constant=None):
    """Random polynomials of weight <= cap in the first few times."""
    table = var_table(N)
    vars_ = [v for v in table.vars if table.params.var_weight(v.a, v.m) <= cap]
    items = []
    for _ in range(draw(st.integers(0, max_terms))):
        exps = {}
        w = 0
        for v in draw(st.lists(st.sampled_from(vars_), max_size=3)):
            vw = table.params.var_weight(v.a, v.m)
            if w + vw <= cap:
                exps[v] = exps.get(v, 0) + 1
                w += vw
        items.append((exps, draw(scalars())))
    if constant is not None:
        items.append(({}, constant))
    return TPoly.from_monomials(table, items, cap)


def var(N, a, m, cap=None):
    return TPoly.var(var_table(N), a, m, cap=cap)


__all__ = ["scalars", "tpolys", "var", "VarId"]
