"""LU factorization with partial pivoting for small dense systems."""
from __future__ import annotations

import numpy as np

from ..errors import NumericalError


class SingularMatrixError(NumericalError):
    pass


def lu_factor(A):
    """Return (LU, perm, sign) with L unit-lower and U upper packed in LU."""
    lu = np.array(A, dtype=float, copy=True)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError("square matrix required")
    m = lu.shape[0]
    perm = np.arange(m)
    sign = 1.0
    for k in range(m - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = lu[k, k]
        if pivot == 0.0:
            continue
        lu[k + 1 :, k] /= pivot
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, perm, sign


def dense_solve_det(A, rhs=None):
    """Determinant of ``A`` and, if ``rhs`` is given, the solution of A x = rhs.

    The determinant is the pivot product times the permutation sign.  An
    exactly singular matrix yields determinant 0.0; asking for a solve in
    that case raises :class:`SingularMatrixError`.
    """
    lu, perm, sign = lu_factor(A)
    piv = np.diag(lu)
    det = float(sign * np.prod(piv))
    if rhs is None:
        return None, det
    if np.any(piv == 0.0):
        raise SingularMatrixError("matrix is exactly singular")
    b = np.array(rhs, dtype=float)[perm]
    m = len(piv)
    for i in range(m):
        b[i] -= lu[i, :i] @ b[:i]
    for i in range(m - 1, -1, -1):
        b[i] = (b[i] - lu[i, i + 1 :] @ b[i + 1 :]) / lu[i, i]
    return b, det


def logdet(A):
    """(sign, log|det|) for matrices whose determinant may underflow."""
    lu, _, sign = lu_factor(A)
    piv = np.diag(lu)
    if np.any(piv == 0.0):
        return 0.0, -np.inf
    return float(sign * np.prod(np.sign(piv))), float(np.sum(np.log(np.abs(piv))))
