"""Soft/hard edge limiting kernels, finite-n correlation kernels and their checks."""
from .equilibrium import EquilibriumMeasure, Potential, check_variational, equilibrium_vc, symmetrize
from .fredholm import FredholmOperator, fredholm_det, smallest_eig_cdf
from .limitkernel import (
    CritIIContext,
    LimitKernelContext,
    consistency_residual,
    eval_soft_hard,
    solve_crit_ii,
    solve_fg,
)
from .orthopoly import CDKernelContext, RecurrenceTable, WeightSpec, cd_kernel, quad_transform_residual, stieltjes_table
from .painleve import HastingsMcLeod, hm_diagnostics, hm_solve, tw_cdf
from .specfun import ClassicalKernelTag, airy_ai, bessel_j, classical_kernel

__all__ = [
    "CDKernelContext",
    "ClassicalKernelTag",
    "CritIIContext",
    "EquilibriumMeasure",
    "FredholmOperator",
    "HastingsMcLeod",
    "LimitKernelContext",
    "Potential",
    "RecurrenceTable",
    "WeightSpec",
    "airy_ai",
    "bessel_j",
    "cd_kernel",
    "check_variational",
    "classical_kernel",
    "consistency_residual",
    "equilibrium_vc",
    "eval_soft_hard",
    "fredholm_det",
    "hm_diagnostics",
    "hm_solve",
    "quad_transform_residual",
    "smallest_eig_cdf",
    "solve_crit_ii",
    "solve_fg",
    "stieltjes_table",
    "symmetrize",
    "tw_cdf",
]
