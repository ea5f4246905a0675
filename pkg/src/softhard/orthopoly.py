"""Orthonormal polynomials for hard-edge and symmetric weights.

Recurrence coefficients come from a discretized Stieltjes procedure on a
composite Gauss discretization of the weight; correlation kernels are the
plain weighted sums sum_j p_j(x) p_j(y).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .equilibrium import Potential
from .errors import ConvergenceError, DomainError, PrecisionError
from .numcore import ddouble as dd
from .numcore import gauss_jacobi_rule, gauss_legendre_rule, golub_welsch

HARD_EDGE = "hard_edge"
SYMMETRIC = "symmetric"
LOG_CUTOFF = 280.0 * math.log(10.0)
EXTENDED_THRESHOLD = 40
REFINE_TOL = 1e-13
PANEL_POINTS = 64
START_PANELS = 16
MAX_PANELS = 256


# ------------------------------------------------------------ weights


@dataclass(frozen=True)
class WeightSpec:
    """x^gamma e^{-N V(x)} on [0, inf)  (kind ``hard_edge``), or
    |x|^gamma e^{-N W(x)} on the line with W(x) = V(x^2)/2 (kind ``symmetric``).

    For the symmetric kind ``potential`` is the half-line field V; the
    partner W is derived from it.
    """

    kind: str
    gamma: float
    potential: Potential = field(repr=False)
    N: float

    def __post_init__(self):
        if self.kind not in (HARD_EDGE, SYMMETRIC):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if not self.gamma > -1:
            raise DomainError("weight exponent must exceed -1")
        if not self.N > 0:
            raise DomainError("N must be positive")

    @classmethod
    def hard_edge(cls, alpha: float, V: Potential, N: float) -> "WeightSpec":
        return cls(HARD_EDGE, float(alpha), V, float(N))

    @classmethod
    def symmetric(cls, beta: float, V: Potential, N: float) -> "WeightSpec":
        return cls(SYMMETRIC, float(beta), V, float(N))

    def field_value(self, x):
        """N V(x) or N W(x)."""
        x = np.asarray(x, dtype=float)
        if self.kind == HARD_EDGE:
            return self.N * self.potential(x)
        return 0.5 * self.N * self.potential(x * x)

    def log_weight(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return self.gamma * np.log(np.abs(x)) - self.field_value(x)

    def weight(self, x):
        return np.exp(self.log_weight(x))

    def sqrt_weight(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == HARD_EDGE and np.any(x < 0):
            raise DomainError("hard-edge weight lives on [0, inf)")
        if self.gamma < 0 and np.any(x == 0):
            raise DomainError("weight is infinite at 0")
        if self.gamma == 0:
            return np.exp(-0.5 * self.field_value(x))
        return np.exp(0.5 * self.log_weight(x))

    @property
    def x_max(self) -> float:
        """Point beyond which the weight stays below 1e-280."""
        lw = lambda x: float(self.log_weight(x))
        hi = 1.0
        while lw(hi) > -LOG_CUTOFF or lw(2 * hi) > lw(hi):
            hi *= 2.0
            if hi > 1e12:
                raise DomainError("weight does not decay; check the field")
        lo = hi / 2.0 if lw(hi / 2.0) > -LOG_CUTOFF else 0.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if lw(mid) > -LOG_CUTOFF:
                lo = mid
            else:
                hi = mid
        return hi


def discretize(weight: WeightSpec, panels: int = START_PANELS, m: int = PANEL_POINTS):
    """Composite Gauss discretization (nodes, weights) of the weight.

    A Gauss-Jacobi panel absorbs |x|^gamma at the origin; uniform
    Gauss-Legendre panels cover the rest up to the 1e-280 cutoff.
    """
    X = weight.x_max
    h = X / panels
    jr = gauss_jacobi_rule(m, 0.0, h, 0.0, weight.gamma)
    xs = [jr.nodes]
    ws = [jr.weights * np.exp(-weight.field_value(jr.nodes))]
    for k in range(1, panels):
        r = gauss_legendre_rule(m, k * h, (k + 1) * h)
        xs.append(r.nodes)
        ws.append(r.weights * weight.weight(r.nodes))
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    if weight.kind == SYMMETRIC:
        x = np.concatenate([-x[::-1], x])
        w = np.concatenate([w[::-1], w])
    keep = w > 0
    return x[keep], w[keep]


# ------------------------------------------------------------ Stieltjes


@dataclass(frozen=True)
class RecurrenceTable:
    """x p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1}, p_0 = 1/sqrt(mu0).

    ``b[k]`` is b_k for k < n_max; ``a[k-1]`` is a_k for 1 <= k <= n_max.
    """

    b: np.ndarray
    a: np.ndarray
    mu0: float
    precision_mode: str
    weight: WeightSpec = field(repr=False, default=None)
    refinement_change: float = 0.0
    panels: int = 0

    @property
    def n_max(self) -> int:
        return len(self.b)

    def gauss_rule(self, m: int | None = None):
        m = m or self.n_max
        return golub_welsch(self.b[:m], self.a[: m - 1], self.mu0)

    def rows(self):
        """(k, a_k, b_k) rows; a_0 and b_{n_max} are absent (None)."""
        out = []
        for k in range(self.n_max + 1):
            ak = float(self.a[k - 1]) if k >= 1 else None
            bk = float(self.b[k]) if k < self.n_max else None
            out.append((k, ak, bk))
        return out


def _stieltjes_native(x, w, n):
    mu0 = float(np.sum(w))
    q = np.sqrt(w) / math.sqrt(mu0)  # sqrt(w_i) p_k(x_i)
    q_prev = np.zeros_like(q)
    a_prev = 0.0
    b = np.empty(n)
    a = np.empty(n)
    for k in range(n):
        xq = x * q
        b[k] = float(np.dot(xq, q))
        r = xq - b[k] * q - a_prev * q_prev
        # one reorthogonalization pass against the last two vectors
        r -= np.dot(r, q) * q
        if k > 0:
            r -= np.dot(r, q_prev) * q_prev
        nr = float(np.dot(r, r))
        if not nr > 0:
            raise PrecisionError(f"a_{k + 1} lost positivity; try extended mode")
        a[k] = math.sqrt(nr)
        q_prev, q, a_prev = q, r / a[k], a[k]
    return b, a, mu0


def _stieltjes_extended(x, w, n):
    mu0h, mu0l = dd.dd_sum(w)
    sh, sl = dd.dd_sqrt(w, np.zeros_like(w))
    inv = dd.dd_div(1.0, 0.0, *dd.dd_sqrt(mu0h, mu0l))
    qh, ql = dd.dd_mul(sh, sl, *inv)
    ph, pl = np.zeros_like(qh), np.zeros_like(qh)
    ah, al = 0.0, 0.0
    b = np.empty(n)
    a = np.empty(n)
    for k in range(n):
        xh, xl = dd.dd_mul_d(qh, ql, x)
        bh, bl = dd.dd_dot(xh, xl, qh, ql)
        rh, rl = dd.dd_sub(xh, xl, *dd.dd_mul(qh, ql, bh, bl))
        rh, rl = dd.dd_sub(rh, rl, *dd.dd_mul(ph, pl, ah, al))
        for vh, vl in ((qh, ql), (ph, pl)) if k > 0 else ((qh, ql),):
            ch, cl = dd.dd_dot(rh, rl, vh, vl)
            rh, rl = dd.dd_sub(rh, rl, *dd.dd_mul(vh, vl, ch, cl))
        nh, nl = dd.dd_dot(rh, rl, rh, rl)
        if not nh > 0:
            raise PrecisionError(f"a_{k + 1} lost positivity in extended mode")
        ah, al = dd.dd_sqrt(nh, nl)
        inv = dd.dd_div(1.0, 0.0, ah, al)
        ph, pl = qh, ql
        qh, ql = dd.dd_mul(rh, rl, *inv)
        b[k] = bh + bl
        a[k] = ah + al
    return b, a, mu0h + mu0l


def _change(t1, t2):
    scale = np.maximum(t2[1], 1e-300)
    da = np.abs(t1[1] - t2[1]) / scale
    db = np.abs(t1[0] - t2[0]) / (np.abs(t2[0]) + scale)
    return float(max(da.max(), db.max()))


def stieltjes_table(weight: WeightSpec, n_max: int, mode: str | None = None, tol: float = REFINE_TOL) -> RecurrenceTable:
    """Recurrence coefficients for the first n_max orthonormal polynomials.

    ``mode`` is ``"native"``, ``"extended"`` or None (extended when
    n_max > 40 or when native coefficients lose six digits under
    refinement).  Panels are doubled until the coefficients change by at
    most ``tol`` (relative).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if mode not in (None, "native", "extended"):
        raise ValueError("mode must be 'native' or 'extended'")
    auto = mode is None
    if auto:
        mode = "extended" if n_max > EXTENDED_THRESHOLD else "native"
    run = _stieltjes_extended if mode == "extended" else _stieltjes_native
    panels = START_PANELS
    prev = run(*discretize(weight, panels), n_max)
    change = math.inf
    while panels < MAX_PANELS:
        panels *= 2
        cur = run(*discretize(weight, panels), n_max)
        change = _change(prev, cur)
        if change <= tol:
            return RecurrenceTable(cur[0], cur[1], cur[2], mode, weight, change, panels)
        if auto and mode == "native" and change > 1e-6:
            return stieltjes_table(weight, n_max, "extended", tol)
        prev = cur
    raise ConvergenceError(
        "recurrence coefficients did not settle under refinement",
        detail={"change": change, "panels": panels, "mode": mode},
    )


@lru_cache(maxsize=256)
def _cached_table(kind, gamma, c, N, n_max, mode):
    V = Potential.model_vc(c)
    return stieltjes_table(WeightSpec(kind, gamma, V, N), n_max, mode)


def vc_table(kind: str, gamma: float, c: float, N: float, n_max: int, mode: str | None = None) -> RecurrenceTable:
    """Memoized table for the model field V_c."""
    return _cached_table(kind, float(gamma), float(c), float(N), int(n_max), mode)


# ------------------------------------------------------------ evaluation


def poly_values(table: RecurrenceTable, x, n: int | None = None, scale=None):
    """p_0..p_{n-1} at x, shape (n, len(x)); optional per-point scale
    factor multiplies every row (used to carry sqrt(weight))."""
    n = table.n_max if n is None else n
    if n > table.n_max:
        raise DomainError(f"degree count {n} exceeds the table size {table.n_max}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((n, x.size))
    p = np.full(x.size, 1.0 / math.sqrt(table.mu0))
    if scale is not None:
        p = p * np.broadcast_to(scale, x.shape)
    p_prev = np.zeros_like(p)
    for k in range(n):
        out[k] = p
        if k + 1 < n:
            a_prev = table.a[k - 1] if k > 0 else 0.0
            p, p_prev = ((x - table.b[k]) * p - a_prev * p_prev) / table.a[k], p
    if not np.all(np.isfinite(out)):
        raise PrecisionError("overflow in polynomial recurrence; retry in extended mode")
    return out


def orthonormal_poly(table: RecurrenceTable, j: int, x):
    return poly_values(table, x, j + 1)[j]


@dataclass(frozen=True)
class CDKernelContext:
    weight: WeightSpec
    table: RecurrenceTable = field(repr=False)
    n: int

    @property
    def N(self) -> float:
        return self.weight.N

    def __call__(self, x, y):
        return cd_kernel(self, x, y)

    def diagonal(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        self._check(x)
        v = poly_values(self.table, x, self.n, self.weight.sqrt_weight(x))
        return np.sum(v * v, axis=0)

    def _check(self, x):
        if self.weight.kind == HARD_EDGE and np.any(x < 0):
            raise DomainError("hard-edge kernel needs x >= 0")


def make_cd_context(weight: WeightSpec, n: int, mode: str | None = None) -> CDKernelContext:
    return CDKernelContext(weight, stieltjes_table(weight, n, mode), n)


def cd_kernel(ctx: CDKernelContext, x, y):
    """sqrt(w(x) w(y)) sum_{j<n} p_j(x) p_j(y); arrays broadcast."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    xf, yf = x.ravel(), y.ravel()
    ctx._check(xf)
    ctx._check(yf)
    # evaluate on the union of abscissae once
    pts, inv = np.unique(np.concatenate([xf, yf]), return_inverse=True)
    v = poly_values(ctx.table, pts, ctx.n, ctx.weight.sqrt_weight(pts))
    vx = v[:, inv[: xf.size]]
    vy = v[:, inv[xf.size :]]
    # pairwise products summed in a fixed order, so K(x,y) == K(y,x) bitwise
    out = np.sum(vx * vy, axis=0)
    return float(out[0]) if shape == () else out.reshape(shape)


# ------------------------------------------------------------ quadratic transformation


@dataclass(frozen=True)
class QuadTransformReport:
    res_plus: float
    res_minus: float | None
    res_P2n: float
    res_Q2n1: float | None


def quad_transform_residual(alpha: float, V: Potential, n: int, N: float, grid, xs=None, want_minus: bool | None = None) -> QuadTransformReport:
    """Residuals of the quadratic transformation between the hard-edge
    kernel for (alpha, V, n, N) and the symmetric kernels for
    (2 alpha +- 1, W, 2n, 2N)."""
    if not alpha > -1:
        raise DomainError("alpha must exceed -1")
    if want_minus is None:
        want_minus = alpha > 0
    if want_minus and not alpha > 0:
        raise DomainError("the minus variant needs alpha > 0")
    grid = np.asarray(grid, dtype=float)
    x, y = grid[:, 0], grid[:, 1]
    if np.any(grid <= 0):
        raise DomainError("grid pairs must be positive")
    xs = np.linspace(0.05, 2.0, 40) if xs is None else np.asarray(xs, dtype=float)

    hard = make_cd_context(WeightSpec.hard_edge(alpha, V, N), n)
    K = cd_kernel(hard, x, y)
    sx, sy = np.sqrt(x), np.sqrt(y)
    pre = 0.5 * (x * y) ** -0.25
    # p_n(x^2) needs the table up to degree n
    p_table = stieltjes_table(WeightSpec.hard_edge(alpha, V, N), n + 1)
    pn = poly_values(p_table, xs * xs, n + 1)[n]

    sym_p = make_cd_context(WeightSpec.symmetric(2 * alpha + 1, V, 2 * N), 2 * n)
    res_plus = float(np.max(np.abs(K - pre * (cd_kernel(sym_p, sx, sy) + cd_kernel(sym_p, sx, -sy)))))
    tp = stieltjes_table(WeightSpec.symmetric(2 * alpha + 1, V, 2 * N), 2 * n + 1)
    res_P = float(np.max(np.abs(poly_values(tp, xs, 2 * n + 1)[2 * n] - pn)))

    res_minus = res_Q = None
    if want_minus:
        sym_m = make_cd_context(WeightSpec.symmetric(2 * alpha - 1, V, 2 * N), 2 * n)
        res_minus = float(
            np.max(np.abs(K - pre * (cd_kernel(sym_m, sx, sy) - cd_kernel(sym_m, sx, -sy))))
        )
        tm = stieltjes_table(WeightSpec.symmetric(2 * alpha - 1, V, 2 * N), 2 * n + 2)
        res_Q = float(np.max(np.abs(poly_values(tm, xs, 2 * n + 2)[2 * n + 1] - xs * pn)))
    return QuadTransformReport(res_plus, res_minus, res_P, res_Q)


def moment_check(table: RecurrenceTable, panels: int = 64) -> float:
    """Max relative mismatch between the table's Gauss rule and a fine
    discretization on the scaled moments of degree < 2 n_max."""
    x, w = discretize(table.weight, panels)
    nodes, weights = table.gauss_rule()
    scale = max(np.max(np.abs(nodes)), 1.0)
    worst = 0.0
    for k in range(2 * table.n_max):
        exact = float(np.dot(w, (x / scale) ** k))
        approx = float(np.dot(weights, (nodes / scale) ** k))
        denom = float(np.dot(w, np.abs(x / scale) ** k))
        worst = max(worst, abs(exact - approx) / denom)
    return worst
