"""Airy and Bessel functions, Gamma, and the sine/Airy/Bessel reference kernels.

Power series are summed in double-double so that the cancellation between
exponentially large terms (Airy for x > 0, Bessel for moderate x) leaves
full double accuracy; beyond the switch points the classical asymptotic
expansions take over.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numcore import ddouble as dd

# Ai(0) and -Ai'(0) as double-double pairs
_AI0 = (0.3550280538878172, 2.05233632436212e-17)
_AIP0 = (0.2588194037928068, -2.522243111610832e-17)

AIRY_SWITCH = 8.0
BESSEL_SWITCH = 25.0

# Lanczos g=7, n=9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma function by the Lanczos approximation (reflection below 1/2)."""
    x = float(x)
    if x < 0.5:
        if x == math.floor(x):
            raise DomainError("Gamma has poles at non-positive integers")
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, 9):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def _airy_series(x):
    """Maclaurin series for (Ai, Ai') in double-double, vectorized.

    Ai = Ai(0) f - |Ai'(0)| g with f, g the two even/odd-in-x^3 series; the
    four running terms obey simple ratio recurrences in x^3.
    """
    x = np.asarray(x, dtype=float)
    x2h, x2l = dd.two_prod(x, x)
    x3h, x3l = dd.dd_mul_d(x2h, x2l, x)
    one = (np.ones_like(x), np.zeros_like(x))
    tf, tg, tgp = one, (x.copy(), np.zeros_like(x)), one
    tfp = dd.dd_mul_d(x2h, x2l, 0.5)
    f, g, fp, gp = tf, tg, tfp, tgp
    for k in range(200):
        tf = dd.dd_div(*dd.dd_mul(*tf, x3h, x3l), float((3 * k + 2) * (3 * k + 3)), 0.0)
        tg = dd.dd_div(*dd.dd_mul(*tg, x3h, x3l), float((3 * k + 3) * (3 * k + 4)), 0.0)
        tfp = dd.dd_div(*dd.dd_mul(*tfp, x3h, x3l), float((3 * k + 3) * (3 * k + 5)), 0.0)
        tgp = dd.dd_div(*dd.dd_mul(*tgp, x3h, x3l), float((3 * k + 1) * (3 * k + 3)), 0.0)
        f = dd.dd_add(*f, *tf)
        g = dd.dd_add(*g, *tg)
        fp = dd.dd_add(*fp, *tfp)
        gp = dd.dd_add(*gp, *tgp)
        small = max(
            np.max(np.abs(t[0]) / np.maximum(np.abs(s[0]), 1e-300))
            for t, s in ((tf, f), (tg, g), (tfp, fp), (tgp, gp))
        )
        if small < 1e-34:
            break
    ai = dd.dd_sub(*dd.dd_mul(*_AI0, *f), *dd.dd_mul(*_AIP0, *g))
    aip = dd.dd_sub(*dd.dd_mul(*_AI0, *fp), *dd.dd_mul(*_AIP0, *gp))
    return ai[0] + ai[1], aip[0] + aip[1]


def _airy_u(kmax):
    u = [1.0]
    for k in range(1, kmax + 1):
        # u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) u_{k-1}
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, kmax + 1)]
    return np.array(u), np.array(v)


_U, _V = _airy_u(40)


def _asym_sum(coef, z, alternate=True):
    """Optimally truncated sum_k (+-1)^k coef_k / z^k for scalar z."""
    total = 0.0
    prev = math.inf
    for k, c in enumerate(coef):
        term = c / z**k * ((-1) ** k if alternate else 1)
        if abs(term) > prev:
            break
        total += term
        prev = abs(term)
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def _airy_asym_pos(x):
    z = 2.0 / 3.0 * x**1.5
    pref = math.exp(-z) / (2.0 * math.sqrt(math.pi))
    ai = pref * x**-0.25 * _asym_sum(_U, z)
    aip = -pref * x**0.25 * _asym_sum(_V, z)
    return ai, aip


def _airy_asym_neg(x):
    t = -x
    z = 2.0 / 3.0 * t**1.5
    # split even/odd parts of the alternating series
    def parts(coef):
        ev = od = 0.0
        prev = math.inf
        for k, c in enumerate(coef):
            term = c / z**k
            if abs(term) > prev:
                break
            prev = abs(term)
            sgn = (-1) ** (k // 2)
            if k % 2 == 0:
                ev += sgn * term
            else:
                od += sgn * term
            if abs(term) < 1e-17:
                break
        return ev, od

    chi = z - math.pi / 4
    ue, uo = parts(_U)
    ve, vo = parts(_V)
    pref = 1.0 / math.sqrt(math.pi)
    ai = pref * t**-0.25 * (math.cos(chi) * ue + math.sin(chi) * uo)
    aip = pref * t**0.25 * (math.sin(chi) * ve - math.cos(chi) * vo)
    return ai, aip


def airy_ai(x):
    """Return ``(Ai(x), Ai'(x))``; accepts a scalar or an array."""
    xa = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xa).ravel()
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)
    inner = np.abs(flat) <= AIRY_SWITCH
    if np.any(inner):
        ai[inner], aip[inner] = _airy_series(flat[inner])
    for i in np.flatnonzero(~inner):
        v = flat[i]
        if v > 0:
            ai[i], aip[i] = _airy_asym_pos(v) if v < 700 else (0.0, -0.0)
        else:
            ai[i], aip[i] = _airy_asym_neg(v)
    if xa.ndim == 0:
        return float(ai[0]), float(aip[0])
    return ai.reshape(xa.shape), aip.reshape(xa.shape)


def _bessel_series(nu, x):
    x = np.asarray(x, dtype=float)
    hx = 0.5 * x
    q2h, q2l = dd.two_prod(hx, hx)
    q2h, q2l = -q2h, -q2l
    g = gamma(nu + 1.0)
    th, tl = np.ones_like(x), np.zeros_like(x)
    sh, sl = th.copy(), tl.copy()
    for k in range(1, 400):
        # k*(nu+k) carried exactly; its rounding would swamp the cancellation
        den = dd.dd_mul_d(*dd.two_sum(float(nu), float(k)), float(k))
        th, tl = dd.dd_div(*dd.dd_mul(th, tl, q2h, q2l), *den)
        sh, sl = dd.dd_add(sh, sl, th, tl)
        if np.max(np.abs(th) / np.maximum(np.abs(sh), 1e-300)) < 1e-34:
            break
    with np.errstate(divide="ignore"):
        pref = np.where(x > 0, hx**nu, 1.0 if nu == 0 else 0.0)
    return pref * (sh + sl) / g


def _bessel_asym(nu, x):
    mu = 4.0 * nu * nu
    z = 8.0 * x
    p = q = 0.0
    term = 1.0
    prev = math.inf
    k = 0
    while k < 200:
        # term_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! z^k)
        if k > 0:
            term *= (mu - (2 * k - 1) ** 2) / (k * z)
        if abs(term) > prev and k > 2 * nu + 2:
            break
        prev = abs(term) if k > 0 else math.inf
        if k % 2 == 0:
            p += (-1) ** (k // 2) * term
        else:
            q += (-1) ** (k // 2) * term
        if abs(term) < 1e-17 and k > 2:
            break
        k += 1
    w = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(w) - q * math.sin(w))


def bessel_j(nu: float, x):
    """Bessel function of the first kind J_nu(x) for nu > -1, x >= 0."""
    if nu <= -1:
        raise DomainError("bessel_j requires nu > -1")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("bessel_j requires x >= 0")
    flat = np.atleast_1d(xa).ravel()
    out = np.empty_like(flat)
    switch = max(BESSEL_SWITCH, nu * nu)
    inner = flat <= switch
    if np.any(inner):
        out[inner] = _bessel_series(nu, flat[inner])
    for i in np.flatnonzero(~inner):
        out[i] = _bessel_asym(nu, flat[i])
    # exact values at the origin
    out[flat == 0] = 1.0 if nu == 0 else (0.0 if nu > 0 else math.inf)
    if xa.ndim == 0:
        return float(out[0])
    return out.reshape(xa.shape)


def bessel_j_and_derivative(nu: float, x):
    """(J_nu(x), J_nu'(x)) using J' = (nu/x) J - J_{nu+1}."""
    j = bessel_j(nu, x)
    j1 = bessel_j(nu + 1.0, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        jp = nu / np.asarray(x) * j - j1
    return j, jp


@dataclass(frozen=True)
class ClassicalKernelTag:
    """Which reference kernel: ``'sine'``, ``'airy'`` or ``'bessel'`` (with alpha)."""

    variant: str
    alpha: float | None = None

    def __post_init__(self):
        if self.variant not in ("sine", "airy", "bessel"):
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        if self.variant == "bessel":
            if self.alpha is None or not self.alpha > -1:
                raise DomainError("bessel kernel needs alpha > -1")

    @classmethod
    def sine(cls):
        return cls("sine")

    @classmethod
    def airy(cls):
        return cls("airy")

    @classmethod
    def bessel(cls, alpha):
        return cls("bessel", float(alpha))


DIAGONAL_PATCH = 1e-4


def _airy_diag(x):
    ai, aip = airy_ai(x)
    return aip * aip - x * ai * ai


def _bessel_diag(alpha, x):
    t = np.sqrt(x)
    j, jp = bessel_j_and_derivative(alpha, t)
    return 0.25 * (jp * jp + (1.0 - alpha * alpha / (t * t)) * j * j)


def classical_kernel(tag: ClassicalKernelTag, x, y):
    """Evaluate the tagged kernel at (x, y); arrays broadcast.

    Pairs closer than ``DIAGONAL_PATCH`` use the diagonal (L'Hopital)
    formula at their midpoint.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    scalar = x.ndim == 0
    shape = x.shape
    x = np.atleast_1d(x).ravel()
    y = np.atleast_1d(y).ravel()
    d = x - y
    if tag.variant == "sine":
        out = np.sinc(d)
    else:
        near = np.abs(d) < DIAGONAL_PATCH
        far = ~near
        out = np.empty_like(x)
        mid = 0.5 * (x + y)
        if tag.variant == "airy":
            if np.any(near):
                out[near] = _airy_diag(mid[near])
            if np.any(far):
                ax, apx = airy_ai(x[far])
                ay, apy = airy_ai(y[far])
                out[far] = (ax * apy - apx * ay) / d[far]
        else:
            if np.any(x <= 0) or np.any(y <= 0):
                raise DomainError("bessel kernel needs positive arguments")
            a = tag.alpha
            if np.any(near):
                out[near] = _bessel_diag(a, mid[near])
            if np.any(far):
                sx, sy = np.sqrt(x[far]), np.sqrt(y[far])
                jx, jpx = bessel_j_and_derivative(a, sx)
                jy, jpy = bessel_j_and_derivative(a, sy)
                out[far] = (jx * sy * jpy - jy * sx * jpx) / (2.0 * d[far])
    if scalar:
        return float(out[0])
    return out.reshape(shape)
