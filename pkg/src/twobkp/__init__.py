"""Exact truncated computations for the D_N Kac-Wakimoto hierarchy."""

from __future__ import annotations

from .coeffield import I, ONE, ZERO, Scalar, parse_scalar, render_scalar
from .descendant import DescendantWave, expand_operator, expand_wave, psi_x2, psi_zero, verify_descendant
from .gaussian import DeformationPoint, GaussianModel, assemble, direct_wave, verify_structure
from .grassmannian import GrPoint, pair, span_from_wave, subspace_checks, vacuum_wave
from .hirota import InsufficientCapError, hirota_check, omega_apply, wave_from_tau
from .report import Check, CheckReport
from .ring import HierarchyParams, LSeries, TPoly, VVec, WindowError, exp_truncated, var_table
from .virasoro import d_apply, ell_apply, l_apply, vertex_commutator_check
from .wave import WaveExpansion, XZSeries

__version__ = "0.1.0"

__all__ = [
    "I", "ONE", "ZERO", "Scalar", "parse_scalar", "render_scalar",
    "DescendantWave", "expand_operator", "expand_wave", "psi_x2", "psi_zero", "verify_descendant",
    "DeformationPoint", "GaussianModel", "assemble", "direct_wave", "verify_structure",
    "GrPoint", "pair", "span_from_wave", "subspace_checks", "vacuum_wave",
    "InsufficientCapError", "hirota_check", "omega_apply", "wave_from_tau",
    "Check", "CheckReport",
    "HierarchyParams", "LSeries", "TPoly", "VVec", "WindowError", "exp_truncated", "var_table",
    "d_apply", "ell_apply", "l_apply", "vertex_commutator_check",
    "WaveExpansion", "XZSeries",
]
