import math

import numpy as np
import pytest

from softhard import limitkernel as lk
from softhard.errors import DomainError


@pytest.fixture(scope="module")
def ctx00():
    return lk.fg_context(0.0, 0.0)


def test_envelope_at_half_xmax(ctx00):
    xs = np.linspace(ctx00.x_max / 2 - 1, ctx00.x_max / 2 + 1, 201)
    assert np.max(np.abs(ctx00.f(xs) * xs**0.25)) <= 1.2


def test_diagonal_ratio_at_25(ctx00):
    k = ctx00.diagonal(25.0)
    assert abs(k * math.pi / (2 * math.sqrt(25.0)) - 1.0) <= 2e-2


def test_xmax_doubling_drift():
    assert lk.xmax_drift(0.0, 0.0, 1.0) <= 1e-6


def test_symmetry_exact(ctx00):
    assert lk.eval_soft_hard(ctx00, 1.0, 2.0) == lk.eval_soft_hard(ctx00, 2.0, 1.0)
    rng = np.random.default_rng(5)
    x, y = rng.uniform(0.1, 10, (2, 100))
    assert np.array_equal(ctx00.kernel(x, y), ctx00.kernel(y, x))


def test_diagonal_positive(ctx00):
    xs = np.array([0.1, 0.5, 1.0, 2.0, 5.0])
    assert np.all(ctx00.diagonal(xs) > 0)


def test_diagonal_nonnegative_everywhere(ctx00):
    xs = np.geomspace(ctx00.x_min, ctx00.x_max, 2000)
    assert np.all(ctx00.diagonal(xs) >= 0)


def test_diagonal_continuity(ctx00):
    assert abs(ctx00.kernel(1.0, 1.0) - ctx00.kernel(1.0, 1.0 + 1e-6)) <= 1e-5
    # just outside the patch the quotient form takes over smoothly
    assert abs(ctx00.kernel(1.0, 1.0) - ctx00.kernel(1.0, 1.0 + 2e-5)) <= 1e-5


def test_out_of_range(ctx00):
    with pytest.raises(DomainError):
        ctx00.kernel(1e-6, 1.0)
    with pytest.raises(DomainError):
        ctx00.f(31.0)


def test_solve_preconditions():
    with pytest.raises(DomainError):
        lk.solve_fg(-1.0, 0.0)
    with pytest.raises(DomainError):
        lk.solve_fg(0.0, 0.0, x_max=20.0)
    with pytest.raises(DomainError):
        lk.solve_crit_ii(-0.5, 0.0)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0])
@pytest.mark.parametrize("s", [-2.0, 0.0, 2.0])
def test_system_residual(alpha, s):
    ctx = lk.fg_context(alpha, s)
    xs = np.linspace(1e-3, ctx.x_max / 2, 3000)
    assert float(ctx.system_residual(xs).max()) <= 1e-7


@pytest.mark.parametrize("s", [-2.0, 0.0, 2.0])
def test_diagonal_growth_window(s):
    big = lk.fg_context(0.0, s, 60.0)
    xs = np.linspace(20.0, 30.0, 200)
    ratio = big.diagonal(xs) * math.pi / (2 * np.sqrt(xs))
    assert 0.97 <= ratio.min() and ratio.max() <= 1.03


def test_substitution_identity():
    ctx = lk.fg_context(0.0, 0.0)
    crit = lk.crit_context(0.5, 0.0)
    xs = np.linspace(0.25, 9.0, 200)
    f, g = ctx.fg(xs)
    fc, gc = lk.fg_from_crit(crit, xs)
    assert np.max(np.abs(f - fc)) <= 1e-6
    assert np.max(np.abs(g - gc)) <= 1e-6


def test_route_equivalence_kernels():
    ctx = lk.fg_context(0.0, 0.0)
    crit = lk.crit_context(0.5, 0.0)
    xs = np.linspace(0.25, 9.0, 15)
    X, Y = np.meshgrid(xs, xs)
    assert np.max(np.abs(ctx.kernel(X, Y) - lk.soft_hard_from_crit(crit, X, Y, +1))) <= 1e-6


def test_parity():
    crit = lk.crit_context(0.5, 0.0)
    F1p, F2p = crit.F(1.3)
    F1m, F2m = crit.F(-1.3)
    assert F1m == F1p and F2m == -F2p
    assert np.isfinite(F1p) and np.isfinite(F2p)
    a, b = 0.7, -1.9
    assert crit.kernel(a, b) == crit.kernel(b, a)


def test_f1_zeros_follow_phase():
    beta, s = 0.5, 0.0
    crit = lk.crit_context(beta, s)
    xs = np.linspace(4.9, 5.1, 20001)
    F1 = crit.F(xs)[0]
    idx = np.flatnonzero(np.sign(F1[:-1]) != np.sign(F1[1:]))
    assert idx.size >= 4
    zeros = xs[idx] - F1[idx] * (xs[idx + 1] - xs[idx]) / (F1[idx + 1] - F1[idx])
    for z in zeros:
        theta = 4 * z**3 / 3 + s * z - math.pi * beta / 2
        k = round((theta - math.pi / 2) / math.pi)
        target = math.pi / 2 + k * math.pi + math.pi * beta / 2
        # solve 4 x^3 / 3 + s x = target by Newton from z
        x = z
        for _ in range(20):
            x -= (4 * x**3 / 3 + s * x - target) / (4 * x * x + s)
        assert abs(z - x) <= 1e-2


def test_consistency_routes():
    grid = np.random.default_rng(11).uniform(0.3, 6.0, (20, 2))
    rep = lk.consistency_residual(0.5, 0.0, grid)
    assert rep.res_plus_route <= 1e-6
    assert rep.res_minus_route <= 1e-5


def test_lax_residual():
    assert lk.lax_residual(0.0, 0.0, np.linspace(0.3, 6.0, 40)) <= 1e-4


def test_minus_route_absent_for_nonpositive_alpha():
    rep = lk.consistency_residual(0.0, 0.0, np.array([[1.0, 2.0]]))
    assert rep.res_minus_route is None


def test_near_origin_exponent():
    ctx = lk.fg_context(0.5, 0.0)
    e, lim = lk.near_origin_exponent(ctx)
    assert e in (0.25, -0.25)
    assert lim != 0 and np.isfinite(lim)
    xs = np.array([1e-4, 1e-3])
    scaled = ctx.f(xs) * xs**-e
    assert abs(scaled[1] / scaled[0] - 1) <= 0.05


def test_s_parameter_acts():
    xs = np.linspace(0.5, 4.0, 15)
    X, Y = np.meshgrid(xs, xs)
    d = np.abs(lk.fg_context(0.0, 0.1).kernel(X, Y) - lk.fg_context(0.0, 0.0).kernel(X, Y))
    assert d.max() <= 0.5
    assert d.max() >= 1e-4


def test_two_term_start_matches_series_leading_order():
    x = 30.0
    f2, g2 = lk.two_term_fg(x, 0.0, 0.0)
    ctx = lk.fg_context(0.0, 0.0)
    f, g = ctx.fg(x)
    assert abs(f - f2) <= 0.05 * x**-0.25
    assert abs(g - g2) <= 0.05 * x**0.25
