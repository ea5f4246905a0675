"""Hastings-McLeod solutions of Painleve II and the Tracy-Widom distribution.

The Hastings-McLeod solution with parameter nu solves

    q'' = s q + 2 q^3 - nu

with q ~ sqrt(-s/2) as s -> -inf and q ~ nu/s (q ~ Ai(s) when nu = 0) as
s -> +inf.  It is computed as a two-point boundary value problem by
Chebyshev collocation and damped Newton, continued in nu from the
classical nu = 0 case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import Chebyshev

from .errors import ConvergenceError, DomainError, NumericalError
from .numcore import adaptive_quad
from .specfun import airy_ai

DEFAULT_S_MIN = -12.0
DEFAULT_S_MAX = 10.0
DEFAULT_NODES = 240
CONTINUATION_STEP = 0.25
POLE_BOUND = 1e6


@dataclass(frozen=True, eq=False)
class HastingsMcLeod:
    """A certified Hastings-McLeod solution on ``[s_min, s_max]``."""

    nu: float
    s_min: float
    s_max: float
    nodes: np.ndarray
    q_samples: np.ndarray
    r_samples: np.ndarray
    cheb: Chebyshev = field(repr=False)
    residual: float
    newton_iterations: int

    def __post_init__(self):
        object.__setattr__(self, "_d1", self.cheb.deriv(1))
        object.__setattr__(self, "_d2", self.cheb.deriv(2))
        object.__setattr__(self, "_d3", self.cheb.deriv(3))

    def _check(self, s):
        s = np.asarray(s, dtype=float)
        span = self.s_max - self.s_min
        if np.any(s < self.s_min - 1e-12 * span) or np.any(s > self.s_max + 1e-12 * span):
            raise DomainError(
                f"s outside the solved range [{self.s_min}, {self.s_max}]"
            )
        return s

    def q(self, s):
        s = self._check(s)
        out = self.cheb(s)
        return float(out) if out.ndim == 0 else out

    __call__ = q

    def r(self, s):
        """q'(s)."""
        s = self._check(s)
        out = self._d1(s)
        return float(out) if out.ndim == 0 else out

    def qpp(self, s):
        s = self._check(s)
        out = self._d2(s)
        return float(out) if out.ndim == 0 else out

    def qppp(self, s):
        s = self._check(s)
        out = self._d3(s)
        return float(out) if out.ndim == 0 else out

    def ode_residual(self, s):
        s = self._check(s)
        q = self.cheb(s)
        return self._d2(s) - s * q - 2 * q**3 + self.nu

    def table(self):
        """Rows (s, q, q') at the collocation nodes, ascending in s."""
        order = np.argsort(self.nodes)
        return np.column_stack(
            [self.nodes[order], self.q_samples[order], self.r_samples[order]]
        )


def _cheb_points(n, a, b):
    x = np.cos(np.pi * np.arange(n + 1) / n)
    return 0.5 * (b - a) * (x + 1.0) + a, x


@lru_cache(maxsize=8)
def _cheb_diff(n):
    x = np.cos(np.pi * np.arange(n + 1) / n)
    c = np.hstack([2.0, np.ones(n - 1), 2.0]) * (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    D.setflags(write=False)
    return D


def _right_boundary(nu, s_max):
    if nu == 0.0:
        return airy_ai(s_max)[0]
    return nu / s_max


def _initial_guess(s, nu):
    sigma = 1.0 / (1.0 + np.exp(s))
    if nu == 0.0:
        right = airy_ai(np.maximum(s, 0.0))[0]
    else:
        right = nu / np.maximum(s, 1.0)
    return sigma * np.sqrt(np.maximum(-s, 0.0) / 2.0) + (1.0 - sigma) * right


def _newton(nu, s, D2, q, qa, qb, tol, max_iter=60):
    """Damped Newton on the collocation equations; returns (q, iterations)."""

    def residual(u):
        R = D2 @ u - s * u - 2.0 * u**3 + nu
        R[0] = u[0] - qb
        R[-1] = u[-1] - qa
        return R

    R = residual(q)
    rnorm = np.max(np.abs(R))
    best_step = math.inf
    stall = 0
    for it in range(1, max_iter + 1):
        J = D2 - np.diag(s + 6.0 * q**2)
        J[0, :] = 0.0
        J[0, 0] = 1.0
        J[-1, :] = 0.0
        J[-1, -1] = 1.0
        dq = np.linalg.solve(J, -R)
        lam = 1.0
        while True:
            trial = q + lam * dq
            Rt = residual(trial)
            tn = np.max(np.abs(Rt))
            if np.isfinite(tn) and (tn <= (1.0 - 0.25 * lam) * rnorm or tn < 1e-9):
                break
            lam *= 0.5
            if lam < 1e-6:
                # no descent possible: accept if already at the roundoff floor
                if np.max(np.abs(dq)) <= 1e3 * tol * max(1.0, np.max(np.abs(q))):
                    return q, it
                raise ConvergenceError(
                    "Hastings-McLeod Newton line search failed",
                    detail={"residual": rnorm, "iteration": it},
                )
        q, R, rnorm = trial, Rt, tn
        if np.max(np.abs(q)) > POLE_BOUND:
            raise NumericalError("pole detected while solving for Hastings-McLeod")
        step = lam * np.max(np.abs(dq))
        if step <= tol * max(1.0, np.max(np.abs(q))):
            return q, it
        # roundoff floor: stop once steps no longer shrink
        if step >= 0.5 * best_step:
            stall += 1
            if stall >= 3 and step < 1e3 * tol:
                return q, it
        else:
            stall = 0
        best_step = min(best_step, step)
    raise ConvergenceError(
        "Hastings-McLeod Newton did not converge",
        detail={"residual": rnorm, "last_step": step},
    )


def hm_solve(
    nu: float,
    s_min: float = DEFAULT_S_MIN,
    s_max: float = DEFAULT_S_MAX,
    tol: float = 1e-13,
    nodes: int | None = None,
) -> HastingsMcLeod:
    """Solve for the Hastings-McLeod solution with parameter ``nu``.

    Continuation runs from nu = 0 in steps of at most 0.25; each stage is a
    damped Newton solve of the Chebyshev collocation system with Dirichlet
    data from the leading asymptotics at both ends.
    """
    nu = float(nu)
    if not nu > -0.5:
        raise DomainError("Hastings-McLeod needs nu > -1/2")
    if s_min > -10 or s_max < 8:
        raise DomainError("need s_min <= -10 and s_max >= 8")
    if nodes is None:
        nodes = int(round(DEFAULT_NODES * (s_max - s_min) / 22.0))
    s, _ = _cheb_points(nodes, s_min, s_max)
    D = _cheb_diff(nodes) * (2.0 / (s_max - s_min))
    D2 = D @ D
    qa = math.sqrt(-s_min / 2.0)

    nsteps = max(1, math.ceil(abs(nu) / CONTINUATION_STEP))
    path = [0.0] + [nu * k / nsteps for k in range(1, nsteps + 1)] if nu != 0 else [0.0]
    q = _initial_guess(s, 0.0)
    total_it = 0
    for nu_k in path:
        q, it = _newton(nu_k, s, D2, q, qa, _right_boundary(nu_k, s_max), tol)
        total_it += it
    return _finish(nu, s_min, s_max, s, q, D, total_it)


def _finish(nu, s_min, s_max, s, q, D, iterations):
    n = len(s) - 1
    x = np.cos(np.pi * np.arange(n + 1) / n)
    coef = Chebyshev.fit(x, q, n, domain=[-1, 1]).coef
    cheb = Chebyshev(coef, domain=[s_min, s_max])
    r = D @ q
    probe = np.linspace(s_min, s_max, 4001)[1:-1]
    qq = cheb(probe)
    res = float(np.max(np.abs(cheb.deriv(2)(probe) - probe * qq - 2 * qq**3 + nu)))
    return HastingsMcLeod(
        nu=nu,
        s_min=s_min,
        s_max=s_max,
        nodes=s,
        q_samples=q,
        r_samples=r,
        cheb=cheb,
        residual=res,
        newton_iterations=iterations,
    )


def hm_continue(hm: HastingsMcLeod, nu: float, tol: float = 1e-13) -> HastingsMcLeod:
    """Continue an existing solution to a new parameter on the same grid."""
    nu = float(nu)
    if not nu > -0.5:
        raise DomainError("Hastings-McLeod needs nu > -1/2")
    s = hm.nodes
    n = len(s) - 1
    D = _cheb_diff(n) * (2.0 / (hm.s_max - hm.s_min))
    D2 = D @ D
    qa = math.sqrt(-hm.s_min / 2.0)
    nsteps = max(1, math.ceil(abs(nu - hm.nu) / CONTINUATION_STEP))
    q = hm.q_samples.copy()
    total = 0
    for k in range(1, nsteps + 1):
        nu_k = hm.nu + (nu - hm.nu) * k / nsteps
        q, it = _newton(nu_k, s, D2, q, qa, _right_boundary(nu_k, hm.s_max), tol)
        total += it
    return _finish(nu, hm.s_min, hm.s_max, s, q, D, total)


@lru_cache(maxsize=32)
def hastings_mcleod(nu: float, s_min: float = DEFAULT_S_MIN, s_max: float = DEFAULT_S_MAX):
    """Memoized :func:`hm_solve` with default tolerances."""
    return hm_solve(nu, s_min, s_max)


@dataclass(frozen=True)
class HMDiagnostics:
    ode_residual: float
    pxxxiv_p1: float
    pxxxiv_p2: float
    doubling_drift: float


def pxxxiv_residuals(hm: HastingsMcLeod, s):
    """Residuals of the two Painleve XXXIV equations for p = q^2 +- q' + s/2.

    Written in the multiplied-out form 2p p'' - 4p^3 + 2s p^2 - (p'^2 - c^2)
    so that zeros of p do not blow the residual up.
    """
    s = np.asarray(s, dtype=float)
    a = hm.nu - 0.5
    q, r, q2, q3 = hm.q(s), hm.r(s), hm.qpp(s), hm.qppp(s)
    out = []
    for sign, c in ((1.0, a), (-1.0, a + 1.0)):
        p = q * q + sign * r + s / 2.0
        dp = 2 * q * r + sign * q2 + 0.5
        d2p = 2 * r * r + 2 * q * q2 + sign * q3
        out.append(2 * p * d2p - 4 * p**3 + 2 * s * p * p - (dp * dp - c * c))
    return out[0], out[1]


def hm_diagnostics(hm: HastingsMcLeod, window=(-8.0, 6.0), npts: int = 1401) -> HMDiagnostics:
    """ODE residual, Painleve XXXIV residuals and domain-doubling drift."""
    s = np.linspace(window[0], window[1], npts)
    r1, r2 = pxxxiv_residuals(hm, s)
    big = hm_solve(hm.nu, 2 * hm.s_min, 2 * hm.s_max, nodes=2 * (len(hm.nodes) - 1))
    drift = float(np.max(np.abs(big.q(s) - hm.q(s))))
    return HMDiagnostics(
        ode_residual=hm.residual,
        pxxxiv_p1=float(np.max(np.abs(r1))),
        pxxxiv_p2=float(np.max(np.abs(r2))),
        doubling_drift=drift,
    )


# ---------------------------------------------------------------- Tracy-Widom


def _tail_integrals(x, b):
    """int_b^inf (y-x) Ai(y)^2 dy and int_b^inf Ai(y)^2 dy."""
    def f1(y):
        return (y - x) * airy_ai(y)[0] ** 2

    def f0(y):
        return airy_ai(y)[0] ** 2

    top = b + 30.0
    return (
        adaptive_quad(f1, b, top, abstol=1e-300, reltol=1e-12)[0],
        adaptive_quad(f0, b, top, abstol=1e-300, reltol=1e-12)[0],
    )


def _tw_exponents(hm: HastingsMcLeod, x: float):
    """(int_x^inf (y-x) q^2 dy, int_x^inf q^2 dy)."""
    b = hm.s_max
    if x < hm.s_min:
        raise DomainError(f"x={x} below the Hastings-McLeod range")
    if x >= b:
        return _tail_integrals(x, x)
    cheb = hm.cheb

    def f1(y):
        return (y - x) * cheb(y) ** 2

    def f0(y):
        return cheb(y) ** 2

    t1, t0 = _tail_integrals(x, b)
    i1 = adaptive_quad(f1, x, b, abstol=1e-15, reltol=1e-13)[0]
    i0 = adaptive_quad(f0, x, b, abstol=1e-15, reltol=1e-13)[0]
    return i1 + t1, i0 + t0


def tw_cdf(x: float, hm: HastingsMcLeod | None = None) -> float:
    """Tracy-Widom (GUE) distribution F(x) = exp(-int_x^inf (y-x) q(y)^2 dy)."""
    hm = hm or hastings_mcleod(0.0)
    if hm.nu != 0.0:
        raise DomainError("Tracy-Widom uses the nu = 0 Hastings-McLeod solution")
    return math.exp(-_tw_exponents(hm, float(x))[0])


def tw_pdf(x: float, hm: HastingsMcLeod | None = None) -> float:
    """dF/dx = F(x) * int_x^inf q^2."""
    hm = hm or hastings_mcleod(0.0)
    i1, i0 = _tw_exponents(hm, float(x))
    return math.exp(-i1) * i0


@dataclass(frozen=True)
class TWTable:
    x: np.ndarray
    F: np.ndarray
    density: np.ndarray


def tw_table(xs, hm: HastingsMcLeod | None = None) -> TWTable:
    hm = hm or hastings_mcleod(0.0)
    xs = np.asarray(xs, dtype=float)
    F = np.empty_like(xs)
    dens = np.empty_like(xs)
    for i, x in enumerate(xs):
        i1, i0 = _tw_exponents(hm, x)
        F[i] = math.exp(-i1)
        dens[i] = F[i] * i0
    return TWTable(xs, F, dens)
