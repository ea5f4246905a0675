"""Acceptance checks with pinned tolerances.

Each check returns a :class:`CriterionResult`; ``run_all`` prints one
PASS/FAIL line per criterion.  Used by the test suite and by
``softhard selftest``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import equilibrium as eq
from . import fredholm as fr
from . import limitkernel as lk
from . import orthopoly as op
from . import painleve as pv
from .specfun import ClassicalKernelTag, airy_ai, classical_kernel


@dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        body = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{tag}] criterion {self.cid}: {self.title} ({body}; {self.seconds:.1f}s)"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def random_pairs(k: int = 20, lo: float = 0.2, hi: float = 4.0, seed: int = 20240):
    return np.random.default_rng(seed).uniform(lo, hi, (k, 2))


@_timed
def criterion_1() -> CriterionResult:
    grid = random_pairs()
    worst = {"res_plus": 0.0, "res_minus": 0.0, "res_P2n": 0.0, "res_Q2n1": 0.0}
    for alpha in (0.3, 0.7, 1.5):
        for c in (0.8, 1.0, 1.2):
            V = eq.Potential.model_vc(c)
            for n in range(1, 7):
                rep = op.quad_transform_residual(alpha, V, n, float(n), grid)
                worst["res_plus"] = max(worst["res_plus"], rep.res_plus)
                worst["res_minus"] = max(worst["res_minus"], rep.res_minus)
                worst["res_P2n"] = max(worst["res_P2n"], rep.res_P2n)
                worst["res_Q2n1"] = max(worst["res_Q2n1"], rep.res_Q2n1)
    ok = (
        worst["res_plus"] <= 1e-9
        and worst["res_minus"] <= 1e-9
        and worst["res_P2n"] <= 1e-10
        and worst["res_Q2n1"] <= 1e-10
    )
    return CriterionResult("1", "quadratic transformation exactness", ok, worst)


@_timed
def criterion_2() -> CriterionResult:
    m = {}
    pointwise = 0.0
    mass = 0.0
    var_eq = 0.0
    min_slack = math.inf
    for c in (0.7, 1.0, 1.2):
        meas = eq.equilibrium_vc(c)
        (A, B), = meas.support
        if c < 1:
            A0, B0 = 2 - 2 * math.sqrt(c), 2 + 2 * math.sqrt(c)
            ref = lambda x: np.sqrt(4 * c - (x - 2) ** 2) / (2 * math.pi * c)
        elif c > 1:
            a = -4 / 3 + 2 / 3 * math.sqrt(1 + 3 * c)
            A0, B0 = 0.0, 4 / 3 + 4 / 3 * math.sqrt(1 + 3 * c)
            ref = lambda x, a=a, b=B0: (x + a) * np.sqrt(b - x) / (2 * math.pi * c * np.sqrt(x))
        else:
            A0, B0 = 0.0, 4.0
            ref = lambda x: np.sqrt(x * (4 - x)) / (2 * math.pi)
        xs = A0 + (B0 - A0) * np.linspace(0.001, 0.999, 200)
        pointwise = max(pointwise, abs(A - A0), abs(B - B0), float(np.max(np.abs(meas.psi(xs) - ref(xs)))))
        mass = max(mass, abs(meas.integrate() - 1.0))
        on = list(A + (B - A) * np.linspace(0.01, 0.99, 50))
        off = [B + 0.25, B + 1.0, B + 3.0] + ([0.1, 0.5 * A] if A > 0.1 else [])
        rep = eq.check_variational(meas, grid=on + off)
        var_eq = max(var_eq, rep.max_equality_residual)
        min_slack = min(min_slack, rep.min_slack)
    c1n, c2n = eq.numerical_constants(eq.equilibrium_vc(1.0))
    m.update(
        pointwise=pointwise, mass=mass, variational=var_eq, min_slack=min_slack,
        c1_err=abs(c1n - 0.5), c2_err=abs(c2n - 2 ** (1 / 3)),
    )
    ok = (
        pointwise <= 1e-12 and mass <= 1e-10 and var_eq <= 1e-7 and min_slack > 0
        and m["c1_err"] <= 1e-8 and m["c2_err"] <= 1e-8
    )
    return CriterionResult("2", "equilibrium closed forms and constants", ok, m)


@_timed
def criterion_3() -> CriterionResult:
    m = {"ode_residual": 0.0, "q10_err": 0.0, "qm10_err": 0.0, "pxxxiv": 0.0}
    s = np.linspace(-8.0, 6.0, 1401)
    for nu in (0.0, 0.5, 1.0):
        hm = pv.hastings_mcleod(nu)
        m["ode_residual"] = max(m["ode_residual"], hm.residual)
        m["q10_err"] = max(m["q10_err"], abs(hm.q(10.0) - nu / 10.0))
        m["qm10_err"] = max(m["qm10_err"], abs(hm.q(-10.0) - math.sqrt(5.0)))
        r1, r2 = pv.pxxxiv_residuals(hm, s)
        m["pxxxiv"] = max(m["pxxxiv"], float(np.max(np.abs(r1))), float(np.max(np.abs(r2))))
    ok = m["ode_residual"] <= 1e-8 and m["q10_err"] <= 1e-3 and m["qm10_err"] <= 2e-2 and m["pxxxiv"] <= 1e-5
    return CriterionResult("3", "Hastings-McLeod certification", ok, m)


@_timed
def criterion_4() -> CriterionResult:
    m = {"system_residual": 0.0}
    for s in (-2.0, 0.0, 2.0):
        ctx = lk.fg_context(0.0, s)
        xs = np.linspace(1e-3, ctx.x_max / 2, 4000)
        m["system_residual"] = max(m["system_residual"], float(ctx.system_residual(xs).max()))
    lo, hi = 1.0, 0.0
    for s in (-2.0, 0.0, 2.0):
        big = lk.fg_context(0.0, s, 60.0)
        xs = np.linspace(20.0, big.x_max / 2, 400)
        ratio = big.diagonal(xs) * math.pi / (2 * np.sqrt(xs))
        lo, hi = min(lo, float(ratio.min())), max(hi, float(ratio.max()))
    m["growth_min"], m["growth_max"] = lo, hi
    m["xmax_drift"] = lk.xmax_drift(0.0, 0.0, 1.0)
    m["res_lax"] = lk.lax_residual(0.0, 0.0, np.linspace(0.3, 6.0, 40))
    ok = (
        m["system_residual"] <= 1e-7 and 0.97 <= lo and hi <= 1.03
        and m["xmax_drift"] <= 1e-6 and m["res_lax"] <= 1e-4
    )
    return CriterionResult("4", "soft/hard construction", ok, m)


@_timed
def criterion_5() -> CriterionResult:
    xs = np.linspace(0.3, 6.0, 16)
    X, Y = np.meshgrid(xs, xs)
    worst = 0.0
    for s in (-1.0, 0.0, 1.0):
        plus = lk.crit_context(1.0, s)
        minus = lk.crit_context(0.0, s)
        d = lk.soft_hard_from_crit(plus, X, Y, +1) - lk.soft_hard_from_crit(minus, X, Y, -1)
        worst = max(worst, float(np.max(np.abs(d))))
    return CriterionResult("5", "two-route identity via nu=1 and nu=0", worst <= 1e-5, {"max_diff": worst})


@_timed
def criterion_6() -> CriterionResult:
    from .cli import ExperimentConfig, run_converge

    cfg = ExperimentConfig(alpha=0.0, c=1.0, L=0.0, n_list=(20, 40, 60), window=(0.5, 4.0), grid=25)
    rows = run_converge(cfg)
    E = [r.error for r in rows]
    ok = all(r.available for r in rows) and E[0] > E[1] > E[2] and E[2] / E[0] <= 0.6
    m = {f"E{r.n}": r.error for r in rows}
    m["ratio"] = E[2] / E[0]
    return CriterionResult("6", "universality convergence", ok, m)


@_timed
def criterion_7a() -> CriterionResult:
    d = abs(pv.tw_cdf(0.0) - fr.airy_det(0.0))
    return CriterionResult("7a", "tw_cdf(0) vs Airy Fredholm determinant", d <= 1e-5, {"abs_diff": d})


@_timed
def criterion_7b() -> CriterionResult:
    gap, ratio = fr.smallest_eig_cdf(1.0, 0.0, lk.fg_context(0.0, 0.0))
    d = abs(gap - ratio)
    return CriterionResult("7b", "gap(1) vs F(-1)/F(0) as stated", d <= 1e-3, {"gap": gap, "tw_ratio": ratio, "abs_diff": d})


@_timed
def criterion_8() -> CriterionResult:
    sine = classical_kernel(ClassicalKernelTag.sine(), 0.37, 0.37)
    aip0 = -1.0 / (3 ** (1 / 3) * math.gamma(1 / 3))
    airy0 = classical_kernel(ClassicalKernelTag.airy(), 0.0, 0.0)
    pairs = random_pairs(50, 0.05, 20.0, seed=8)
    tag = ClassicalKernelTag.bessel(0.5)
    asym = float(np.max(np.abs(classical_kernel(tag, pairs[:, 0], pairs[:, 1]) - classical_kernel(tag, pairs[:, 1], pairs[:, 0]))))
    m = {"sine_diag_err": abs(sine - 1.0), "airy0_err": abs(airy0 - aip0**2), "bessel_asym": asym}
    ok = m["sine_diag_err"] == 0.0 and m["airy0_err"] <= 1e-10 and asym <= 1e-14
    return CriterionResult("8", "classical kernel sanity", ok, m)


CRITERIA = {
    "1": criterion_1,
    "2": criterion_2,
    "3": criterion_3,
    "4": criterion_4,
    "5": criterion_5,
    "6": criterion_6,
    "7a": criterion_7a,
    "7b": criterion_7b,
    "8": criterion_8,
}

RUNTIME_LIMITS = {"1": 30.0, "2": 10.0, "3": 60.0, "6": 600.0, "7a": 120.0, "7b": 120.0}


def run_all(which=None, echo=print):
    results = []
    for cid, fn in CRITERIA.items():
        if which and cid not in which:
            continue
        res = fn()
        limit = RUNTIME_LIMITS.get(cid)
        if limit is not None:
            res.measured["runtime_limit_s"] = limit
            if res.seconds > limit:
                res.passed = False
        echo(res.line())
        results.append(res)
    return results
