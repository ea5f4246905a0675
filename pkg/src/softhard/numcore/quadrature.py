"""Gauss rules via Golub-Welsch and a small adaptive integrator."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from ..errors import ConvergenceError

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights on the interval ``(a, b)``."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def integrate(self, f: Callable) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def __len__(self):
        return len(self.nodes)


def tridiag_eig_first(diag, offdiag, max_iter: int = 60):
    """Eigenvalues and first eigenvector components of a symmetric tridiagonal.

    Implicit-shift QL; only the first row of the eigenvector matrix is
    carried through the rotations, which is all Golub-Welsch needs.

    Parameters
    ----------
    diag : sequence of m floats
    offdiag : sequence of m-1 floats, ``offdiag[i]`` couples rows i and i+1

    Returns
    -------
    (eigenvalues, first_components) sorted by eigenvalue.
    """
    d = [float(v) for v in diag]
    n = len(d)
    e = [float(v) for v in offdiag] + [0.0]
    z = [0.0] * n
    z[0] = 1.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ConvergenceError(
                    "implicit QL did not converge", detail={"index": l, "offdiag": e[l]}
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = np.argsort(d)
    return np.asarray(d)[order], np.asarray(z)[order]


def golub_welsch(diag, offdiag, mu0: float):
    """Gauss nodes/weights from Jacobi-matrix recurrence coefficients.

    ``offdiag`` holds the orthonormal-recurrence coefficients a_1..a_{m-1}.
    """
    nodes, first = tridiag_eig_first(diag, offdiag)
    return nodes, mu0 * first**2


@lru_cache(maxsize=64)
def _legendre_ref(m: int):
    k = np.arange(1, m, dtype=float)
    off = k / np.sqrt(4.0 * k * k - 1.0)
    x, w = golub_welsch(np.zeros(m), off, 2.0)
    # symmetrize away last-bit asymmetry from the eigensolve
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_rule(m: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """m-point Gauss-Legendre rule on (a, b)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not a < b:
        raise ValueError("need a < b")
    x, w = _legendre_ref(int(m))
    half = 0.5 * (b - a)
    return QuadratureRule(a + half * (x + 1.0), half * w, (a, b))


def jacobi_recurrence(m: int, alpha: float, beta: float):
    """Orthonormal recurrence for (1-t)^alpha (1+t)^beta on [-1, 1].

    Returns (diag[0..m-1], offdiag[1..m-1], mu0).
    """
    ab = alpha + beta
    k = np.arange(m, dtype=float)
    diag = np.empty(m)
    denom = (2 * k + ab) * (2 * k + ab + 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag[:] = (beta**2 - alpha**2) / denom
    diag[0] = (beta - alpha) / (ab + 2)
    off = np.empty(max(m - 1, 0))
    for j in range(1, m):
        if j == 1:
            a2 = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        else:
            t = 2 * j + ab
            a2 = 4 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1) * (t - 1))
        off[j - 1] = math.sqrt(a2)
    mu0 = math.exp(
        (ab + 1) * math.log(2.0)
        + math.lgamma(alpha + 1)
        + math.lgamma(beta + 1)
        - math.lgamma(ab + 2)
    )
    return diag, off, mu0


@lru_cache(maxsize=64)
def _jacobi_ref(m: int, alpha: float, beta: float):
    diag, off, mu0 = jacobi_recurrence(m, alpha, beta)
    x, w = golub_welsch(diag, off, mu0)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi_rule(m: int, a: float, b: float, alpha: float = 0.0, beta: float = 0.0):
    """Rule for the weight (b-x)^alpha (x-a)^beta on (a, b).

    The weight is built into the returned weights, so ``integrate(f)``
    approximates the integral of f(x)(b-x)^alpha(x-a)^beta.
    """
    if alpha <= -1 or beta <= -1:
        raise ValueError("Jacobi exponents must exceed -1")
    x, w = _jacobi_ref(int(m), float(alpha), float(beta))
    half = 0.5 * (b - a)
    return QuadratureRule(a + half * (x + 1.0), w * half ** (1 + alpha + beta), (a, b))


def adaptive_quad(
    f: Callable,
    a: float,
    b: float,
    *,
    abstol: float = 1e-13,
    reltol: float = 1e-12,
    order: int = 15,
    max_depth: int = 50,
    max_panels: int = 20000,
):
    """Globally adaptive Gauss-Legendre integration.

    Each panel is scored by comparing its rule against the sum over its two
    halves; the worst panel is split until the summed estimate meets
    ``max(abstol, reltol*|I|)``.  ``f`` must accept an array of nodes.

    Returns (value, error_estimate).
    """
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    ref_x, ref_w = _legendre_ref(order)

    def rule(lo, hi):
        half = 0.5 * (hi - lo)
        return half * float(np.dot(ref_w, f(lo + half * (ref_x + 1.0))))

    def score(lo, hi, whole):
        mid = 0.5 * (lo + hi)
        left, right = rule(lo, mid), rule(mid, hi)
        return left + right, abs(left + right - whole), left, right

    panels = []
    whole = rule(a, b)
    val, err, _, _ = score(a, b, whole)
    panels.append([err, a, b, val, 0])
    total = val
    total_err = err
    while total_err > max(abstol, reltol * abs(total)):
        panels.sort(key=lambda p: p[0])
        err, lo, hi, val, depth = panels.pop()
        if depth >= max_depth or len(panels) > max_panels:
            raise ConvergenceError(
                "adaptive quadrature did not converge",
                detail={"worst_interval": (lo, hi), "error": total_err},
            )
        mid = 0.5 * (lo + hi)
        lval, lerr, _, _ = score(lo, mid, rule(lo, mid))
        rval, rerr, _, _ = score(mid, hi, rule(mid, hi))
        panels.append([lerr, lo, mid, lval, depth + 1])
        panels.append([rerr, mid, hi, rval, depth + 1])
        total = sum(p[3] for p in panels)
        total_err = sum(p[0] for p in panels)
    return sign * total, total_err
