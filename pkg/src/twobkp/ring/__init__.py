"""Truncated weighted polynomials and windowed Laurent series."""

from .lseries import LSeries, VVec, WindowError, binom
from .mixed import MixedSeries, exp_factor, residue, shift_substitute
from .params import HierarchyParams, VarId
from .tpoly import TPoly, VarTable, exp_truncated, min_cap, var_table

__all__ = [
    "HierarchyParams",
    "VarId",
    "VarTable",
    "var_table",
    "TPoly",
    "exp_truncated",
    "min_cap",
    "LSeries",
    "VVec",
    "WindowError",
    "binom",
    "MixedSeries",
    "shift_substitute",
    "exp_factor",
    "residue",
]
