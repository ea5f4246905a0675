"""Limiting soft/hard-edge kernels built from the Painleve II Lax pair.

Two linear systems are integrated backward from a large abscissa, where
the wanted solution is pinned down by its oscillatory asymptotics:

* the (f, g) system in x > 0 whose solutions give the soft/hard kernel
  K(x, y; s) = (f(x) g(y) - f(y) g(x)) / (pi (x - y));
* the real-form (F1, F2) system whose solutions give the critical
  kernel of the symmetrized (quartic-type) problem, with F1 even and F2 odd.

Starting data come from the formal series of the Lax-pair solution
Psi(z) = (I + sum_k m_k z^-k) exp(-i(4z^3/3 + s z) sigma_3), optimally
truncated; the two-term cosine/sine asymptotics are its leading part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError
from .numcore import OdeSolution, ode_solve
from .painleve import HastingsMcLeod, hastings_mcleod

X_MIN = 1e-4
DEFAULT_X_MAX = 30.0
DEFAULT_RTOL = 1e-11
DIAGONAL_PATCH = 1e-5
LAX_DELTA = 1e-3
# step cap relative to x; keeps the dense derivative accurate near x = 0
MAX_REL_STEP = 0.004


# ------------------------------------------------------------ asymptotics


def lax_series_coefficients(beta: float, s: float, q: float, r: float, kmax: int = 60):
    """First column of the formal Lax-pair series, (a_k, b_k) for k <= kmax.

    With y = Psi e^{i theta sigma_3} (first column) = (sum a_k z^-k,
    sum b_k z^-k), matching powers of z in the z-equation of the Lax pair
    gives b_{k+1} from row two and a_k from row one; a_0 = 1, b_1 = iq/2.
    """
    a = np.zeros(kmax + 2, dtype=complex)
    b = np.zeros(kmax + 2, dtype=complex)

    def A(k):
        return a[k] if k >= 0 else 0.0

    def B(k):
        return b[k] if k >= 0 else 0.0

    w = s + q * q
    a[0] = 1.0
    b[1] = 0.5j * q
    for k in range(1, kmax + 1):
        # row two at orders k and k-1, with the a_k / a_{k+1} parts dropped:
        # their contributions to row one cancel identically
        b2 = (-(k - 1) * B(k - 1) - beta * A(k - 1) - 2j * w * B(k)) / 8j
        b1 = (-(k - 2) * B(k - 2) + 2j * r * A(k - 1) - beta * A(k - 2) - 2j * w * B(k - 1)) / 8j
        a[k] = -(4 * q * b2 + 2j * r * b1 + beta * B(k)) / k
        b[k + 1] = (
            -(k - 2) * B(k - 2) - 4 * q * a[k] + 2j * r * A(k - 1)
            - beta * A(k - 2) - 2j * w * B(k - 1)
        ) / 8j
    return a[: kmax + 1], b[: kmax + 1]


def crit_asymptotics(x: float, beta: float, s: float, q: float, r: float, kmax: int = 60):
    """(F1, F2, truncation estimate) at large x > 0 from the optimally
    truncated series; leading order is (cos phi, -sin phi),
    phi = 4x^3/3 + s x - pi beta / 2.
    """
    a, b = lax_series_coefficients(beta, s, q, r, kmax)
    zk = float(x) ** -np.arange(kmax + 1.0)
    mags = (np.abs(a) + np.abs(b)) * zk
    # stop at the smallest term past the leading ones
    k_opt = 2 + int(np.argmin(mags[2:]))
    y1 = np.sum(a[:k_opt] * zk[:k_opt])
    y2 = np.sum(b[:k_opt] * zk[:k_opt])
    theta = 4.0 / 3.0 * x**3 + s * x
    phase = np.exp(1j * (0.5 * math.pi * beta - theta))
    u = phase * y1
    v = phase * y2
    return float(u.real + v.real), float(u.imag - v.imag), float(mags[k_opt])


def fg_asymptotics(x: float, alpha: float, s: float, q: float, r: float):
    """(f, g, truncation estimate) at large x via f = x^-1/4 F1(sqrt x),
    g = x^1/4 F2(sqrt x) with F-parameter alpha + 1/2."""
    F1, F2, err = crit_asymptotics(math.sqrt(x), alpha + 0.5, s, q, r)
    return x**-0.25 * F1, x**0.25 * F2, err * x**0.25


def two_term_fg(x, alpha, s):
    """Leading oscillatory asymptotics of (f, g) on the positive axis."""
    x = np.asarray(x, dtype=float)
    th = 4.0 / 3.0 * x**1.5 + s * np.sqrt(x) - 0.5 * math.pi * (alpha + 0.5)
    return x**-0.25 * np.cos(th), -(x**0.25) * np.sin(th)


# ------------------------------------------------------------ (f, g) system


def fg_matrix(x, alpha, s, q, r):
    """Coefficient matrix of the (f, g) system at x."""
    return np.array(
        [
            [2 * q + alpha / (2 * x), 2 + (q * q + r + s / 2) / x],
            [-2 * x - q * q + r - s / 2, -2 * q - alpha / (2 * x)],
        ]
    )


def _fg_field(alpha, s, q, r):
    p1 = q * q + r + 0.5 * s
    c21 = -q * q + r - 0.5 * s
    two_q = 2.0 * q
    half_a = 0.5 * alpha

    def field(x, y):
        f, g = y
        d = two_q + half_a / x
        return np.array([d * f + (2.0 + p1 / x) * g, (c21 - 2.0 * x) * f - d * g])

    return field


@dataclass(frozen=True, eq=False)
class LimitKernelContext:
    """Dense (f, g) for one (alpha, s) on [x_min, x_max]."""

    alpha: float
    s: float
    hm: HastingsMcLeod = field(repr=False)
    q: float
    r: float
    x_min: float
    x_max: float
    solution: OdeSolution = field(repr=False)
    start_error: float
    rtol: float

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x_min * (1 - 1e-12)) or np.any(x > self.x_max * (1 + 1e-12)):
            raise DomainError(
                f"argument outside the stored range [{self.x_min}, {self.x_max}]"
            )
        return x

    def fg(self, x):
        """(f(x), g(x)); arrays accepted."""
        x = self._check(x)
        y = self.solution(x)
        return y[0], y[1]

    def f(self, x):
        return self.fg(x)[0]

    def g(self, x):
        return self.fg(x)[1]

    def derivatives(self, x):
        """(f', g') from the right-hand side of the system."""
        f, g = self.fg(x)
        x = np.asarray(x, dtype=float)
        a, s, q, r = self.alpha, self.s, self.q, self.r
        d = 2 * q + a / (2 * x)
        fp = d * f + (2 + (q * q + r + s / 2) / x) * g
        gp = (-2 * x - q * q + r - s / 2) * f - d * g
        return fp, gp

    def diagonal(self, x):
        """K(x, x) = (f' g - f g') / pi."""
        f, g = self.fg(x)
        fp, gp = self.derivatives(x)
        return (fp * g - f * gp) / math.pi

    def kernel(self, x, y):
        return eval_soft_hard(self, x, y)

    def system_residual(self, x):
        """|d/dx (f,g) - M (f,g)| componentwise, with d/dx taken exactly from
        the dense interpolant."""
        x = self._check(x)
        dy = self.solution.derivative(x)
        return np.abs(dy - np.array(self.derivatives(x)))


def solve_fg(
    alpha: float,
    s: float,
    x_max: float = DEFAULT_X_MAX,
    rtol: float = DEFAULT_RTOL,
    hm: HastingsMcLeod | None = None,
    x_min: float = X_MIN,
) -> LimitKernelContext:
    """Integrate the (f, g) system backward from x_max to x_min."""
    if not alpha > -1:
        raise DomainError("alpha must exceed -1")
    if x_max < 30.0:
        raise DomainError("x_max must be at least 30")
    hm = hm or hastings_mcleod(alpha + 0.5)
    q, r = hm.q(s), hm.r(s)
    f0, g0, err = fg_asymptotics(x_max, alpha, s, q, r)
    sol = ode_solve(
        _fg_field(alpha, s, q, r), x_max, x_min, [f0, g0], rtol=rtol, atol=rtol * 1e-2,
        max_rel_step=MAX_REL_STEP,
    )
    return LimitKernelContext(alpha, s, hm, q, r, x_min, x_max, sol, err, rtol)


def _pair_kernel(num_fn, diag_fn, x, y):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    scalar = x.ndim == 0
    xf = np.atleast_1d(x).ravel()
    yf = np.atleast_1d(y).ravel()
    d = xf - yf
    out = np.empty_like(xf)
    near = np.abs(d) < DIAGONAL_PATCH * np.maximum(1.0, np.abs(xf))
    if np.any(near):
        out[near] = diag_fn(0.5 * (xf[near] + yf[near]))
    far = ~near
    if np.any(far):
        out[far] = num_fn(xf[far], yf[far]) / (math.pi * d[far])
    return float(out[0]) if scalar else out.reshape(x.shape)


def eval_soft_hard(ctx: LimitKernelContext, x, y):
    """Soft/hard kernel (f(x)g(y) - f(y)g(x)) / (pi (x - y)), diagonal by limit."""

    def num(a, b):
        fa, ga = ctx.fg(a)
        fb, gb = ctx.fg(b)
        return fa * gb - fb * ga

    return _pair_kernel(num, ctx.diagonal, x, y)


# ------------------------------------------------------------ real form (F1, F2)


def _crit_field(beta, s, q, r):
    c12 = s + 2 * q * q + 2 * r
    c21 = -s - 2 * q * q + 2 * r

    def field(x, y):
        F1, F2 = y
        d = 4.0 * x * q + beta / x
        x2 = 4.0 * x * x
        return np.array([d * F1 + (x2 + c12) * F2, (c21 - x2) * F1 - d * F2])

    return field


@dataclass(frozen=True, eq=False)
class CritIIContext:
    """Dense (F1, F2) on x > 0, extended by parity (F1 even, F2 odd)."""

    beta: float
    s: float
    hm: HastingsMcLeod = field(repr=False)
    q: float
    r: float
    x_min: float
    x_max: float
    solution: OdeSolution = field(repr=False)
    start_error: float

    def F(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        if np.any(ax < self.x_min * (1 - 1e-12)) or np.any(ax > self.x_max * (1 + 1e-12)):
            raise DomainError(
                f"|x| outside the stored range [{self.x_min}, {self.x_max}]"
            )
        y = self.solution(ax)
        return y[0], np.sign(x) * y[1]

    def derivatives(self, x):
        F1, F2 = self.F(x)
        x = np.asarray(x, dtype=float)
        q, r, s, b = self.q, self.r, self.s, self.beta
        d = 4 * x * q + b / x
        return (
            d * F1 + (4 * x * x + s + 2 * q * q + 2 * r) * F2,
            (-4 * x * x - s - 2 * q * q + 2 * r) * F1 - d * F2,
        )

    def diagonal(self, x):
        F1, F2 = self.F(x)
        d1, d2 = self.derivatives(x)
        return (d1 * F2 - F1 * d2) / math.pi

    def kernel(self, x, y):
        """Critical kernel (F1(x)F2(y) - F1(y)F2(x)) / (pi (x - y))."""

        def num(a, b):
            F1a, F2a = self.F(a)
            F1b, F2b = self.F(b)
            return F1a * F2b - F1b * F2a

        return _pair_kernel(num, self.diagonal, x, y)


def solve_crit_ii(
    beta: float,
    s: float,
    x_max: float = math.sqrt(DEFAULT_X_MAX),
    rtol: float = DEFAULT_RTOL,
    hm: HastingsMcLeod | None = None,
    x_min: float = math.sqrt(X_MIN),
) -> CritIIContext:
    """Integrate the real-form system backward from x_max (F variable)."""
    if not beta > -0.5:
        raise DomainError("beta must exceed -1/2")
    hm = hm or hastings_mcleod(beta)
    q, r = hm.q(s), hm.r(s)
    F1, F2, err = crit_asymptotics(x_max, beta, s, q, r)
    sol = ode_solve(
        _crit_field(beta, s, q, r), x_max, x_min, [F1, F2], rtol=rtol, atol=rtol * 1e-2,
        max_rel_step=MAX_REL_STEP,
    )
    return CritIIContext(beta, s, hm, q, r, x_min, x_max, sol, err)


# ------------------------------------------------------------ identities


def soft_hard_from_crit(crit: CritIIContext, x, y, sign: int = +1):
    """(1/2)(xy)^-1/4 (Kc(sqrt x, sqrt y) +- Kc(sqrt x, -sqrt y))."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    sx, sy = np.sqrt(x), np.sqrt(y)
    return 0.5 * (x * y) ** -0.25 * (crit.kernel(sx, sy) + sign * crit.kernel(sx, -sy))


def fg_from_crit(crit: CritIIContext, x):
    """f = x^-1/4 F1(sqrt x), g = x^1/4 F2(sqrt x)."""
    x = np.asarray(x, dtype=float)
    F1, F2 = crit.F(np.sqrt(x))
    return x**-0.25 * F1, x**0.25 * F2


@lru_cache(maxsize=64)
def fg_context(alpha: float, s: float, x_max: float = DEFAULT_X_MAX) -> LimitKernelContext:
    """Memoized :func:`solve_fg` at default tolerance."""
    return solve_fg(alpha, s, x_max)


@lru_cache(maxsize=64)
def crit_context(beta: float, s: float, x_max: float = math.sqrt(DEFAULT_X_MAX)) -> CritIIContext:
    return solve_crit_ii(beta, s, x_max)


@dataclass(frozen=True)
class ConsistencyReport:
    res_plus_route: float
    res_minus_route: float | None
    res_lax: float


def lax_residual(alpha: float, s: float, xs, delta: float = LAX_DELTA, x_max=DEFAULT_X_MAX):
    """max over xs of |d_s f - (q f + g)| + |d_s g - (-x f - q g)|."""
    xs = np.asarray(xs, dtype=float)
    c0 = fg_context(alpha, s, x_max)
    cp = fg_context(alpha, s + delta, x_max)
    cm = fg_context(alpha, s - delta, x_max)
    f, g = c0.fg(xs)
    fp, gp = cp.fg(xs)
    fm, gm = cm.fg(xs)
    dsf = (fp - fm) / (2 * delta)
    dsg = (gp - gm) / (2 * delta)
    q = c0.q
    return float(np.max(np.abs(dsf - (q * f + g)) + np.abs(dsg - (-xs * f - q * g))))


def consistency_residual(alpha: float, s: float, grid, x_max: float = DEFAULT_X_MAX) -> ConsistencyReport:
    """Check the soft/hard kernel against both critical-kernel routes and the
    s-equation of the Lax pair.

    ``grid`` is an array of (x, y) pairs with x, y > 0.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2 or grid.shape[1] != 2:
        raise ValueError("grid must be an (m, 2) array of pairs")
    x, y = grid[:, 0], grid[:, 1]
    ctx = fg_context(alpha, s, x_max)
    K = eval_soft_hard(ctx, x, y)
    plus = crit_context(alpha + 0.5, s, math.sqrt(x_max))
    res_plus = float(np.max(np.abs(K - soft_hard_from_crit(plus, x, y, +1))))
    res_minus = None
    if alpha > 0:
        minus = crit_context(alpha - 0.5, s, math.sqrt(x_max))
        res_minus = float(np.max(np.abs(K - soft_hard_from_crit(minus, x, y, -1))))
    xs = np.unique(np.concatenate([x, y]))
    res_lax = lax_residual(alpha, s, xs, x_max=x_max)
    return ConsistencyReport(res_plus, res_minus, res_lax)


def xmax_drift(alpha: float, s: float, x: float = 1.0, x_max: float = DEFAULT_X_MAX) -> float:
    """|K(x,x)| change when the starting abscissa is doubled."""
    a = fg_context(alpha, s, x_max).diagonal(x)
    b = fg_context(alpha, s, 2 * x_max).diagonal(x)
    return float(abs(a - b))


def near_origin_exponent(ctx: LimitKernelContext, x0: float | None = None):
    """Which of x^{+-alpha/2} describes f at the left end.

    Returns (exponent, limit) where f(x) x^{-exponent} -> limit, choosing the
    candidate whose scaled values vary least over [x0, 10 x0].
    """
    x0 = x0 or ctx.x_min
    xs = np.array([x0, 3 * x0, 10 * x0])
    f = ctx.f(xs)
    best = None
    for e in (ctx.alpha / 2, -ctx.alpha / 2):
        scaled = f * xs**-e
        spread = np.ptp(scaled) / max(np.max(np.abs(scaled)), 1e-300)
        if best is None or spread < best[0]:
            best = (spread, e, scaled[0])
    if best[2] == 0:
        raise ConvergenceError("f vanishes at the left end; exponent undetermined")
    return best[1], float(best[2])
