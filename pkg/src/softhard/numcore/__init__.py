"""Foundation numerics: quadrature, tridiagonal eigensolver, ODEs, LU, double-double."""
from .ddouble import ExtendedReal
from .linalg import SingularMatrixError, dense_solve_det
from .ode import OdeSolution, ode_solve
from .quadrature import (
    QuadratureRule,
    adaptive_quad,
    gauss_jacobi_rule,
    gauss_legendre_rule,
    golub_welsch,
    tridiag_eig_first,
)

__all__ = [
    "ExtendedReal",
    "OdeSolution",
    "QuadratureRule",
    "SingularMatrixError",
    "adaptive_quad",
    "dense_solve_det",
    "gauss_jacobi_rule",
    "gauss_legendre_rule",
    "golub_welsch",
    "ode_solve",
    "tridiag_eig_first",
]
