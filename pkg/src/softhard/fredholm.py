"""Fredholm determinants det(I - K) by symmetrized Nystrom quadrature."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError
from .limitkernel import LimitKernelContext, eval_soft_hard, solve_fg
from .numcore import dense_solve_det, gauss_legendre_rule
from .painleve import hastings_mcleod, tw_cdf
from .specfun import ClassicalKernelTag, classical_kernel

DEFAULT_TOL = 1e-7


@dataclass(frozen=True)
class FredholmOperator:
    """Kernel restricted to (a, b).

    ``kernel(X, Y)`` must accept broadcast arrays.  An infinite ``b`` is
    handled either by truncating at ``truncate`` or, if that is None, by the
    map t = a + u/(1-u) on u in (0, 1).
    """

    kernel: Callable
    a: float
    b: float
    m: int = 16
    truncate: float | None = None


@dataclass(frozen=True)
class FredholmResult:
    value: float
    m: int
    delta: float
    history: tuple


def _nodes(op: FredholmOperator, m: int):
    b = op.b
    if math.isinf(b):
        if op.truncate is not None:
            rule = gauss_legendre_rule(m, op.a, op.truncate)
            return rule.nodes, rule.weights
        rule = gauss_legendre_rule(m, 0.0, 1.0)
        u = rule.nodes
        return op.a + u / (1.0 - u), rule.weights / (1.0 - u) ** 2
    rule = gauss_legendre_rule(m, op.a, b)
    return rule.nodes, rule.weights


def nystrom_det(op: FredholmOperator, m: int) -> float:
    """det(delta_ij - sqrt(w_i) K(t_i, t_j) sqrt(w_j)) at fixed m."""
    if m < 1:
        raise ValueError("m must be positive")
    t, w = _nodes(op, m)
    sw = np.sqrt(w)
    K = np.asarray(op.kernel(t[:, None], t[None, :]), dtype=float)
    K = 0.5 * (K + K.T)
    _, det = dense_solve_det(np.eye(m) - sw[:, None] * K * sw[None, :])
    return det


def fredholm_det_report(op: FredholmOperator, tol: float = DEFAULT_TOL, m_max: int = 256) -> FredholmResult:
    """Double m from ``op.m`` until successive determinants differ by <= tol."""
    if op.m < 4:
        raise ValueError("m must be at least 4")
    m = op.m
    prev = nystrom_det(op, m)
    history = [(m, prev)]
    while 2 * m <= m_max:
        m *= 2
        cur = nystrom_det(op, m)
        history.append((m, cur))
        if abs(cur - prev) <= tol:
            return FredholmResult(cur, m, abs(cur - prev), tuple(history))
        prev = cur
    raise ConvergenceError(
        "Fredholm determinant did not converge under m-doubling",
        detail={"last_two": history[-2:]},
    )


def fredholm_det(op: FredholmOperator, tol: float = DEFAULT_TOL) -> float:
    return fredholm_det_report(op, tol).value


# ------------------------------------------------------------ named kernels


def airy_operator(a: float = 0.0, m: int = 16) -> FredholmOperator:
    """Airy kernel on (a, inf), truncated where its diagonal drops below 1e-16."""
    tag = ClassicalKernelTag.airy()
    diag = lambda x: float(classical_kernel(tag, x, x))
    cut = max(a, 0.0) + 1.0
    while diag(cut) >= 1e-16:
        cut += 0.5
    return FredholmOperator(lambda x, y: classical_kernel(tag, x, y), a, math.inf, m, cut)


def airy_det(a: float = 0.0, tol: float = 1e-10) -> float:
    """det(I - K_Airy) on (a, inf); equals the Tracy-Widom cdf at a."""
    return fredholm_det(airy_operator(a), tol)


def soft_hard_operator(ctx: LimitKernelContext, x: float, m: int = 8) -> FredholmOperator:
    if not 0 < x <= ctx.x_max:
        raise DomainError(f"x must lie in (0, {ctx.x_max}]")
    return FredholmOperator(lambda u, v: eval_soft_hard(ctx, u, v), 0.0, float(x), m)


def gap_probability(ctx: LimitKernelContext, x: float, tol: float = DEFAULT_TOL) -> float:
    """det(I - K_soft/hard) on (0, x).

    The Gauss nodes must stay above the context's x_min; contexts for tiny x
    should be built with a smaller x_min.
    """
    op = soft_hard_operator(ctx, x)
    try:
        return fredholm_det(op, tol)
    except DomainError as exc:
        raise DomainError(
            f"quadrature nodes on (0, {x}) fall below x_min={ctx.x_min}; rebuild the context with a smaller x_min"
        ) from exc


def gap_context(s: float = 0.0, x_min: float = 1e-4, x_max: float = 30.0) -> LimitKernelContext:
    """Soft/hard context with alpha = 0, the case of the smallest-eigenvalue law."""
    return solve_fg(0.0, s, x_max=x_max, x_min=x_min)


@dataclass(frozen=True)
class SmallestEigRow:
    x: float
    gap: float
    tw_ratio: float

    @property
    def abs_diff(self) -> float:
        return abs(self.gap - self.tw_ratio)


def smallest_eig_cdf(x: float, s: float = 0.0, ctx: LimitKernelContext | None = None, tw_scale: float = 1.0):
    """(gap, tw_ratio) with gap = det(I - K_0(.,.;s)) on (0, x) and
    tw_ratio = F_TW(-tw_scale x) / F_TW(0).

    ``tw_scale`` = 1 is the ratio exactly as stated for the cutoff law; the
    kernel's own normalization (diagonal ~ 2 sqrt(x)/pi) corresponds to
    ``tw_scale = 2**(2/3)``.
    """
    if not x > 0:
        raise DomainError("x must be positive")
    ctx = ctx or gap_context(s)
    if ctx.alpha != 0:
        raise DomainError("the smallest-eigenvalue law uses alpha = 0")
    gap = gap_probability(ctx, x)
    hm = hastings_mcleod(0.0)
    ratio = tw_cdf(-tw_scale * x, hm) / tw_cdf(0.0, hm)
    return gap, ratio


def smallest_eig_table(xs, s: float = 0.0, ctx: LimitKernelContext | None = None, tw_scale: float = 1.0):
    ctx = ctx or gap_context(s)
    rows = []
    for x in xs:
        g, r = smallest_eig_cdf(float(x), s, ctx, tw_scale)
        rows.append(SmallestEigRow(float(x), g, r))
    return rows
