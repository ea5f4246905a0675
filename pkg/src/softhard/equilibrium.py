"""Equilibrium measures of the model fields V_c(x) = (x-2)^2/(2c) on [0, inf).

Only closed-form (single interval) measures are handled.  Custom fields
must come with their own density; there is no general equilibrium solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError
from .numcore import adaptive_quad

EDGE_EPS = 1e-6
HARD_ONLY = "hard_only"
SOFT_MEETS_HARD = "soft_meets_hard"
INTERIOR_GAP = "interior_gap"


# ------------------------------------------------------------ potentials


@dataclass(frozen=True)
class Potential:
    """External field with derivative.

    ``family`` is ``"model_vc"``, ``"custom"`` or ``"symmetrized"`` (the
    partner W(x) = V(x^2)/2 on the real line, built by :meth:`symmetrized`).
    """

    family: str
    V: Callable = field(repr=False)
    dV: Callable = field(repr=False)
    c: float | None = None
    domain: tuple = (0.0, math.inf)
    base: "Potential | None" = field(default=None, repr=False)

    def __call__(self, x):
        return self.V(np.asarray(x, dtype=float))

    def derivative(self, x):
        return self.dV(np.asarray(x, dtype=float))

    @classmethod
    def model_vc(cls, c: float) -> "Potential":
        if not c > 0:
            raise DomainError("c must be positive")
        c = float(c)
        return cls("model_vc", lambda x: (x - 2.0) ** 2 / (2.0 * c), lambda x: (x - 2.0) / c, c)

    @classmethod
    def custom(cls, V: Callable, dV: Callable) -> "Potential":
        pot = cls("custom", V, dV)
        if not pot.growth_ok():
            raise DomainError("field grows too slowly: need V(x)/log(x^2+1) >= 10 at x = 1e6")
        return pot

    def growth_ok(self, x: float = 1e6) -> bool:
        return float(self(x)) / math.log(x * x + 1.0) >= 10.0

    def symmetrized(self) -> "Potential":
        """W(x) = V(x^2)/2 on the whole line."""
        V, dV = self.V, self.dV
        return Potential(
            "symmetrized",
            lambda x: 0.5 * V(x * x),
            lambda x: x * dV(x * x),
            self.c,
            (-math.inf, math.inf),
            self,
        )


# ------------------------------------------------------------ quadrature helpers


def _smoothstep(t):
    return t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t)


def _edge_quad(f: Callable, lo: float, hi: float, abstol=1e-14, reltol=1e-13) -> float:
    """Integral of f over (lo, hi) after y = lo + (hi-lo) t^2(3-2t).

    The map's derivative vanishes linearly at both ends, which removes
    square-root and inverse-square-root endpoint behaviour.
    """
    if hi <= lo:
        return 0.0
    L = hi - lo

    def g(t):
        phi, dphi = _smoothstep(t)
        return f(lo + L * phi) * dphi * L

    val, _ = adaptive_quad(g, 0.0, 1.0, abstol=abstol, reltol=reltol, max_depth=60)
    return val


def edge_limit(func: Callable, xs=(1e-2, 1e-4, 1e-6)) -> float:
    """Value at 0 of the polynomial (in x) interpolating func at ``xs``."""
    xs = [float(x) for x in xs]
    ys = [float(func(x)) for x in xs]
    # Neville at 0
    p = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (xs[i] * p[i + 1] - xs[i + k] * p[i]) / (xs[i] - xs[i + k])
    return p[0]


# ------------------------------------------------------------ measures


@dataclass(frozen=True)
class EquilibriumMeasure:
    support: tuple  # tuple of (lo, hi)
    psi: Callable = field(repr=False)
    omega: Callable = field(repr=False)
    ell: float
    c1: float | None
    c2: float | None
    edge_type_at_zero: str
    potential: Potential = field(repr=False)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for lo, hi in self.support:
            inside = (x > lo) & (x < hi)
            if np.any(inside):
                out[inside] = self.psi(x[inside])
        return out

    def integrate(self, f: Callable = None, which: str = "psi") -> float:
        dens = self.psi if which == "psi" else self.omega
        g = (lambda y: dens(y)) if f is None else (lambda y: f(y) * dens(y))
        total = 0.0
        for lo, hi in self.support:
            # split at 0 for symmetric supports so the map sees each edge
            if lo < 0 < hi:
                total += _edge_quad(g, lo, 0.0) + _edge_quad(g, 0.0, hi)
            else:
                total += _edge_quad(g, lo, hi)
        return total

    def in_support(self, x: float, rel: float = 0.0) -> bool:
        return any(lo <= x <= hi for lo, hi in self.support)

    def log_potential(self, x: float) -> float:
        """2 * integral of log|x - y| psi(y) dy."""
        x = float(x)
        total = 0.0
        for lo, hi in self.support:
            cuts = [lo]
            if lo < 0 < hi:
                cuts.append(0.0)
            if lo < x < hi and x not in cuts:
                cuts.append(x)
            cuts.append(hi)
            cuts.sort()
            for a, b in zip(cuts[:-1], cuts[1:]):
                total += _edge_quad(lambda y: np.log(np.abs(x - y)) * self.psi(y), a, b)
        return 2.0 * total


def arcsine_density(A: float, B: float) -> Callable:
    return lambda x: 1.0 / (math.pi * np.sqrt((x - A) * (B - x)))


def classify_edge(psi: Callable, support, eps: float = EDGE_EPS, rtol: float = 1e-3) -> str:
    """Behaviour of the density at the hard wall x = 0."""
    lo = min(a for a, _ in support)
    if lo > eps:
        return INTERIOR_GAP
    r1 = float(psi(eps)) / math.sqrt(eps)
    r2 = float(psi(eps / 100)) / math.sqrt(eps / 100)
    if r1 > 0 and abs(r1 - r2) <= rtol * abs(r1):
        return SOFT_MEETS_HARD
    return HARD_ONLY


def vc_endpoints(c: float):
    """a, b of the c > 1 density (x + a) sqrt(b - x) / (2 pi c sqrt x)."""
    root = math.sqrt(1.0 + 3.0 * c)
    return -4.0 / 3.0 + 2.0 / 3.0 * root, 4.0 / 3.0 + 4.0 / 3.0 * root


def _fit_ell(measure_like, V, points) -> float:
    vals = [float(V(x)) - measure_like.log_potential(x) for x in points]
    return float(np.mean(vals))


def _constants(psi, omega, edge_type):
    if edge_type != SOFT_MEETS_HARD:
        return None, None
    lim_psi = edge_limit(lambda x: psi(x) / math.sqrt(x))
    lim_om = edge_limit(lambda x: math.sqrt(x) * omega(x))
    c1 = 0.5 * math.pi * lim_psi
    c2 = 2.0 * math.pi * lim_om / c1 ** (1.0 / 3.0)
    return c1, c2


def make_measure(potential: Potential, support, psi: Callable, c1=None, c2=None, edge_type=None):
    """Wrap a closed-form single-interval density; fills omega, ell, edge
    type and (for soft_meets_hard) numerical c1, c2 when not given."""
    if len(support) != 1:
        raise DomainError("only single-interval supports are supported")
    A, B = support[0]
    omega = arcsine_density(A, B)
    edge_type = edge_type or classify_edge(psi, support)
    if c1 is None and c2 is None:
        c1, c2 = _constants(psi, omega, edge_type)
    m = EquilibriumMeasure(tuple(support), psi, omega, 0.0, c1, c2, edge_type, potential)
    pts = A + (B - A) * np.array([0.3, 0.5, 0.7])
    return replace(m, ell=_fit_ell(m, potential, pts))


def equilibrium_vc(c: float) -> EquilibriumMeasure:
    """Closed-form equilibrium measure of V_c."""
    if not c > 0:
        raise DomainError("c must be positive")
    c = float(c)
    pot = Potential.model_vc(c)
    if c < 1:
        r = 2.0 * math.sqrt(c)
        support = ((2.0 - r, 2.0 + r),)
        psi = lambda x: np.sqrt(np.maximum(4.0 * c - (x - 2.0) ** 2, 0.0)) / (2.0 * math.pi * c)
        return make_measure(pot, support, psi, edge_type=INTERIOR_GAP)
    if c > 1:
        a, b = vc_endpoints(c)
        psi = lambda x: (x + a) * np.sqrt(np.maximum(b - x, 0.0)) / (2.0 * math.pi * c * np.sqrt(x))
        return make_measure(pot, ((0.0, b),), psi, edge_type=HARD_ONLY)
    psi = lambda x: np.sqrt(np.maximum(x * (4.0 - x), 0.0)) / (2.0 * math.pi)
    return make_measure(pot, ((0.0, 4.0),), psi, c1=0.5, c2=2.0 ** (1.0 / 3.0), edge_type=SOFT_MEETS_HARD)


def numerical_constants(measure: EquilibriumMeasure):
    """(c1, c2) from extrapolated edge limits, independent of stored values."""
    return _constants(measure.psi, measure.omega, SOFT_MEETS_HARD)


# ------------------------------------------------------------ variational check


@dataclass(frozen=True)
class VariationalReport:
    max_equality_residual: float
    min_slack: float | None  # min of -U over off-support points
    ell: float
    worst_point: float


def check_variational(measure: EquilibriumMeasure, field: Potential | None = None, grid=None, ell=None) -> VariationalReport:
    """U(x) = 2 int log|x-y| psi(y) dy - V(x) + ell on ``grid``.

    ``ell`` is refit as the mean over the on-support points unless given.
    """
    field = field or measure.potential
    grid = np.asarray(grid, dtype=float)
    lo_dom = field.domain[0]
    if np.any(grid < lo_dom):
        raise DomainError("grid leaves the domain of the field")
    on = np.array([measure.in_support(x) for x in grid])
    raw = {}
    for x in grid:
        try:
            raw[x] = measure.log_potential(x) - float(field(x))
        except ConvergenceError as exc:
            raise ConvergenceError("log-potential quadrature failed", detail={"worst_point": x}) from exc
    if ell is None:
        ell = -float(np.mean([raw[x] for x in grid[on]])) if np.any(on) else measure.ell
    U = np.array([raw[x] + ell for x in grid])
    eq = np.abs(U[on])
    max_eq = float(eq.max()) if eq.size else 0.0
    worst = float(grid[on][np.argmax(eq)]) if eq.size else float("nan")
    slack = float(np.min(-U[~on])) if np.any(~on) else None
    return VariationalReport(max_eq, slack, float(ell), worst)


# ------------------------------------------------------------ symmetrization


def symmetrize(measure: EquilibriumMeasure) -> EquilibriumMeasure:
    """Measure for W(x) = V(x^2)/2 on the real line.

    psi_W(x) = |x| psi_V(x^2), omega_W(x) = |x| omega_V(x^2),
    c1_W = c1_V / 2, c2_W = c2_V / 2^(2/3), ell_W = ell_V / 2.
    ``edge_type_at_zero`` is inherited from the input.
    """
    (A, B), = measure.support
    if A < 0:
        raise DomainError("input measure must live on [0, inf)")
    rB = math.sqrt(B)
    if A > 0:
        rA = math.sqrt(A)
        support = ((-rB, -rA), (rA, rB))
    else:
        support = ((-rB, rB),)
    psiV, omV = measure.psi, measure.omega
    psi = lambda x: np.abs(x) * psiV(np.asarray(x, dtype=float) ** 2)
    omega = lambda x: np.abs(x) * omV(np.asarray(x, dtype=float) ** 2)
    c1 = None if measure.c1 is None else measure.c1 / 2.0
    c2 = None if measure.c2 is None else measure.c2 / 2.0 ** (2.0 / 3.0)
    return EquilibriumMeasure(
        support, psi, omega, measure.ell / 2.0, c1, c2,
        measure.edge_type_at_zero, measure.potential.symmetrized(),
    )


# ------------------------------------------------------------ singular cases


@dataclass(frozen=True)
class SingularityReport:
    """Grid-sampled singular points, each as (location, margin).

    case I: density vanishing inside the support; case II: the inequality
    becoming an equality off the support; case III: density vanishing faster
    than a square root at a soft endpoint.
    """

    case_I_points: list
    case_II_points: list
    case_III_points: list

    @property
    def regular(self) -> bool:
        return not (self.case_I_points or self.case_II_points or self.case_III_points)


def singularity_report(measure: EquilibriumMeasure, grid_size: int = 200, tol: float = 1e-6) -> SingularityReport:
    case1, case2, case3 = [], [], []
    for lo, hi in measure.support:
        xs = np.linspace(lo, hi, grid_size + 2)[1:-1]
        vals = measure.density(xs)
        for x, v in zip(xs, vals):
            # the hard wall and the symmetric origin are not interior zeros
            if abs(x) > 0.02 * (hi - lo) and v < tol:
                case1.append((float(x), float(v)))
        for edge, side in ((lo, 1.0), (hi, -1.0)):
            if edge == 0.0 and measure.potential.family != "symmetrized":
                continue
            h1, h2 = 1e-4 * (hi - lo), 1e-6 * (hi - lo)
            r1 = measure.psi(edge + side * h1) / math.sqrt(h1)
            r2 = measure.psi(edge + side * h2) / math.sqrt(h2)
            if r2 < 0.1 * r1:
                case3.append((float(edge), float(r2)))
    # off-support equality check on a grid beyond the support
    lo_all = min(a for a, _ in measure.support)
    hi_all = max(b for _, b in measure.support)
    dom_lo = measure.potential.domain[0]
    off = list(np.linspace(hi_all, hi_all + 3.0, 13)[1:])
    if lo_all > dom_lo:
        start = dom_lo if math.isfinite(dom_lo) else lo_all - 3.0
        off += list(np.linspace(start, lo_all, 13)[:-1])
    if off:
        for x in off:
            U = measure.log_potential(x) - float(measure.potential(x)) + measure.ell
            if -U < tol:
                case2.append((float(x), float(-U)))
    return SingularityReport(case1, case2, case3)
