"""Dormand-Prince 5(4) integrator with continuous (dense) output."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import ConvergenceError, SingularityError

# Butcher tableau (DOPRI5)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A2 = (1 / 5,)
_A3 = (3 / 40, 9 / 40)
_A4 = (44 / 45, -56 / 15, 32 / 9)
_A5 = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_A6 = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
# Hairer's continuous extension
_D = (
    -12715105075 / 11282082432,
    0.0,
    87487479700 / 32700410799,
    -10690763975 / 1880347072,
    701980252875 / 199316789632,
    -1453857185 / 822651844,
    69997945 / 29380423,
)


class OdeSolution:
    """Piecewise quartic interpolant over the accepted steps.

    Callable on a scalar or an array of abscissae inside the integration
    range; returns an array of shape ``(dim,)`` or ``(dim, len(t))``.
    """

    def __init__(self, t0, t1, ts, coeffs, nfev):
        self.t0 = float(t0)
        self.t1 = float(t1)
        self._ts = np.asarray(ts)  # step start points, in direction of travel
        self._h = np.diff(self._ts)
        self._coef = coeffs  # (nsteps, 5, dim)
        self.nfev = nfev
        self._forward = t1 > t0
        # sorted view for searchsorted
        self._sorted = self._ts if self._forward else self._ts[::-1]

    @property
    def nsteps(self):
        return len(self._h)

    @property
    def t_grid(self):
        return self._ts

    @property
    def y_grid(self):
        """Solution at the accepted step points, shape (dim, nsteps+1)."""
        first = self._coef[:, 0, :]
        last = self._coef[-1, 0, :] + self._coef[-1, 1, :]
        return np.vstack([first, last[None, :]]).T

    def _locate(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        lo, hi = min(self.t0, self.t1), max(self.t0, self.t1)
        span = hi - lo
        if np.any(tt < lo - 1e-12 * span) or np.any(tt > hi + 1e-12 * span):
            raise ValueError("dense output queried outside the integration range")
        n = self.nsteps
        if self._forward:
            idx = np.searchsorted(self._sorted, tt, side="right") - 1
        else:
            idx = n - np.searchsorted(self._sorted, tt, side="left")
        idx = np.clip(idx, 0, n - 1)
        return scalar, idx, (tt - self._ts[idx]) / self._h[idx]

    def derivative(self, t):
        """Exact t-derivative of the interpolating quartic."""
        scalar, idx, theta = self._locate(t)
        c = self._coef[idx]
        th = theta[:, None]
        t1 = 1.0 - th
        A = c[:, 3] + t1 * c[:, 4]
        B = c[:, 2] + th * A
        dB = A - th * c[:, 4]
        C = c[:, 1] + t1 * B
        dC = -B + t1 * dB
        y = (C + th * dC) / self._h[idx][:, None]
        y = y.T
        return y[:, 0] if scalar else y

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        lo, hi = min(self.t0, self.t1), max(self.t0, self.t1)
        span = hi - lo
        if np.any(tt < lo - 1e-12 * span) or np.any(tt > hi + 1e-12 * span):
            raise ValueError("dense output queried outside the integration range")
        n = self.nsteps
        if self._forward:
            idx = np.searchsorted(self._sorted, tt, side="right") - 1
        else:
            idx = n - np.searchsorted(self._sorted, tt, side="left")
        idx = np.clip(idx, 0, n - 1)
        theta = (tt - self._ts[idx]) / self._h[idx]
        th1 = 1.0 - theta
        c = self._coef[idx]  # (k, 5, dim)
        th = theta[:, None]
        t1 = th1[:, None]
        y = c[:, 0] + th * (c[:, 1] + t1 * (c[:, 2] + th * (c[:, 3] + t1 * c[:, 4])))
        y = y.T
        return y[:, 0] if scalar else y


def ode_solve(
    field: Callable,
    t0: float,
    t1: float,
    y0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    *,
    h0: float | None = None,
    max_steps: int = 1_000_000,
    max_rel_step: float | None = None,
) -> OdeSolution:
    """Integrate ``y' = field(t, y)`` from t0 to t1 (either direction).

    Local error per step is controlled in the mixed norm
    ``max |err_i| / (atol + rtol*max(|y_i|,|y_new_i|)) <= 1``.

    ``max_rel_step`` caps each step at that multiple of |t|, which keeps
    the dense output accurate near a regular singular point at t = 0.

    Raises
    ------
    SingularityError
        step size underflow; ``location`` is the abscissa reached.
    ConvergenceError
        step budget exhausted before reaching t1.
    """
    if t0 == t1:
        raise ValueError("t0 and t1 must differ")
    direction = 1.0 if t1 > t0 else -1.0
    y = np.array(y0, dtype=float)
    span = abs(t1 - t0)
    f = lambda t, u: np.asarray(field(t, u), dtype=float)

    k1 = f(t0, y)
    nfev = 1
    if h0 is None:
        # Hairer-Wanner starting step heuristic
        scale = atol + rtol * np.abs(y)
        d0 = np.max(np.abs(y) / scale)
        d1 = np.max(np.abs(k1) / scale)
        h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h = min(h, span)
        y1 = y + direction * h * k1
        k2 = f(t0 + direction * h, y1)
        nfev += 1
        d2 = np.max(np.abs(k2 - k1) / scale) / h
        big = max(d1, d2)
        h1 = max(1e-6, h * 1e-3) if big <= 1e-15 else (0.01 / big) ** 0.2
        h = min(100 * h, h1, span)
    else:
        h = min(abs(h0), span)

    ts = [t0]
    coeffs = []
    t = t0
    fac_min, fac_max, safety = 0.2, 10.0, 0.9
    steps = 0
    rejected_last = False
    while direction * (t1 - t) > 0:
        if steps >= max_steps:
            raise ConvergenceError(
                "step budget exhausted", detail={"t": t, "steps": steps}
            )
        if h < 16 * np.spacing(max(abs(t), 1.0)):
            raise SingularityError(f"step size underflow at t={t:.17g}", location=t)
        if max_rel_step is not None:
            if t != 0:
                h = min(h, max_rel_step * abs(t))
        if direction * (t + direction * h - t1) > 0:
            h = abs(t1 - t)
        hs = direction * h
        k2 = f(t + _C[1] * hs, y + hs * (_A2[0] * k1))
        k3 = f(t + _C[2] * hs, y + hs * (_A3[0] * k1 + _A3[1] * k2))
        k4 = f(t + _C[3] * hs, y + hs * (_A4[0] * k1 + _A4[1] * k2 + _A4[2] * k3))
        k5 = f(
            t + _C[4] * hs,
            y + hs * (_A5[0] * k1 + _A5[1] * k2 + _A5[2] * k3 + _A5[3] * k4),
        )
        k6 = f(
            t + hs,
            y + hs * (_A6[0] * k1 + _A6[1] * k2 + _A6[2] * k3 + _A6[3] * k4 + _A6[4] * k5),
        )
        ynew = y + hs * (_B[0] * k1 + _B[2] * k3 + _B[3] * k4 + _B[4] * k5 + _B[5] * k6)
        k7 = f(t + hs, ynew)
        nfev += 6
        err = hs * (
            _E[0] * k1 + _E[2] * k3 + _E[3] * k4 + _E[4] * k5 + _E[5] * k6 + _E[6] * k7
        )
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
        en = float(np.max(np.abs(err) / scale))
        if not np.isfinite(en):
            h *= 0.25
            rejected_last = True
            continue
        if en <= 1.0:
            ydiff = ynew - y
            bspl = hs * k1 - ydiff
            coeffs.append(
                (
                    y,
                    ydiff,
                    bspl,
                    ydiff - hs * k7 - bspl,
                    hs
                    * (
                        _D[0] * k1 + _D[2] * k3 + _D[3] * k4 + _D[4] * k5
                        + _D[5] * k6 + _D[6] * k7
                    ),
                )
            )
            t = t1 if h == abs(t1 - t) else t + hs
            ts.append(t)
            y = ynew
            k1 = k7
            steps += 1
            fac = fac_max if en == 0 else min(fac_max, max(fac_min, safety * en**-0.2))
            if rejected_last:
                fac = min(fac, 1.0)
            h *= fac
            rejected_last = False
        else:
            h *= max(fac_min, safety * en**-0.2)
            rejected_last = True
    coef = np.array(coeffs)  # (nsteps, 5, dim)
    return OdeSolution(t0, t1, ts, coef, nfev)
