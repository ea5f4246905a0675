import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softhard import orthopoly as op
from softhard.equilibrium import Potential
from softhard.errors import DomainError
from softhard.numcore import adaptive_quad

LINEAR = Potential.custom(lambda x: x, lambda x: np.ones_like(x))
DOUBLE = Potential.custom(lambda x: 2 * x, lambda x: 2 * np.ones_like(x))


def laguerre(alpha=0.0):
    return op.WeightSpec.hard_edge(alpha, LINEAR, 1.0)


def test_laguerre_recurrence_oracle():
    t = op.stieltjes_table(laguerre(), 8)
    k = np.arange(7)
    assert np.max(np.abs(t.b[:7] - (2 * k + 1))) <= 1e-11
    assert np.max(np.abs(t.a[:6] - np.arange(1, 7))) <= 1e-11
    assert abs(t.mu0 - 1.0) <= 1e-13


def test_hermite_diagonal_vanishes():
    # e^{-x^2} on the line is |x|^0 e^{-W} with W(x) = V(x^2)/2, V(s) = 2s
    t = op.stieltjes_table(op.WeightSpec.symmetric(0.0, DOUBLE, 1.0), 10)
    assert np.max(np.abs(t.b)) <= 1e-13
    assert abs(t.mu0 - math.sqrt(math.pi)) <= 1e-13
    # a_k = sqrt(k/2)
    assert np.max(np.abs(t.a - np.sqrt(np.arange(1, 11) / 2))) <= 1e-12


def test_half_integer_moment_ratio():
    t = op.stieltjes_table(laguerre(0.5), 3)
    assert abs(t.b[0] - math.gamma(2.5) / math.gamma(1.5)) <= 1e-11
    assert abs(t.mu0 - math.gamma(1.5)) <= 1e-12


def test_one_term_kernel():
    ctx = op.make_cd_context(laguerre(), 1)
    assert abs(op.cd_kernel(ctx, 1.0, 1.0) - math.exp(-1.0)) <= 1e-13


def test_two_term_kernel_at_origin():
    ctx = op.make_cd_context(laguerre(), 2)
    assert abs(op.cd_kernel(ctx, 0.0, 0.0) - 2.0) <= 1e-12
    x, y = 0.7, 2.3
    ref = math.exp(-(x + y) / 2) * (1 + (1 - x) * (1 - y))
    assert abs(op.cd_kernel(ctx, x, y) - ref) <= 1e-13


def test_kernel_exactly_symmetric():
    ctx = op.make_cd_context(op.WeightSpec.hard_edge(0.3, Potential.model_vc(1.0), 5.0), 5)
    rng = np.random.default_rng(3)
    x, y = rng.uniform(0, 4, (2, 200))
    assert np.array_equal(op.cd_kernel(ctx, x, y), op.cd_kernel(ctx, y, x))


def test_kernel_domain_error():
    ctx = op.make_cd_context(laguerre(), 2)
    with pytest.raises(DomainError):
        op.cd_kernel(ctx, -1.0, 1.0)


def test_poly_values_degree_check():
    t = op.stieltjes_table(laguerre(), 3)
    with pytest.raises(DomainError):
        op.poly_values(t, [1.0], 5)


def test_weight_spec_validation():
    with pytest.raises(DomainError):
        op.WeightSpec.hard_edge(-1.0, LINEAR, 1.0)
    with pytest.raises(DomainError):
        op.WeightSpec.hard_edge(0.0, LINEAR, 0.0)
    with pytest.raises(ValueError):
        op.WeightSpec("other", 0.0, LINEAR, 1.0)


def test_weight_cutoff():
    w = op.WeightSpec.hard_edge(0.0, Potential.model_vc(1.0), 10.0)
    X = w.x_max
    assert float(w.log_weight(X)) <= -op.LOG_CUTOFF + 1e-6
    assert float(w.log_weight(0.99 * X)) > -op.LOG_CUTOFF


@pytest.mark.parametrize("alpha,c,N", [(0.0, 1.0, 10.0), (0.5, 0.8, 6.0), (1.5, 1.2, 12.0)])
def test_positive_offdiagonal_and_moments(alpha, c, N):
    t = op.vc_table("hard_edge", alpha, c, N, 12)
    assert np.all(t.a > 0)
    assert op.moment_check(t) <= 1e-9


def test_diagonal_monotone_in_n():
    w = op.WeightSpec.hard_edge(0.5, Potential.model_vc(1.0), 8.0)
    xs = np.linspace(0.0, 6.0, 121)
    prev = np.zeros_like(xs)
    for n in (2, 4, 6, 8):
        d = op.make_cd_context(w, n).diagonal(xs)
        assert np.all(d >= prev)
        prev = d


@pytest.mark.parametrize("n", [1, 3, 8])
def test_trace_equals_n(n):
    w = op.WeightSpec.hard_edge(0.3, Potential.model_vc(1.0), float(n))
    ctx = op.make_cd_context(w, n)
    f = lambda x: ctx.diagonal(np.atleast_1d(x))
    total = adaptive_quad(f, 0.0, w.x_max, abstol=1e-12, reltol=1e-12)[0]
    assert abs(total - n) <= 1e-8


def test_symmetric_parity():
    w = op.WeightSpec.symmetric(1.6, Potential.model_vc(1.0), 6.0)
    t = op.stieltjes_table(w, 9)
    xs = np.linspace(0.1, 2.0, 25)
    P = op.poly_values(t, xs)
    Pm = op.poly_values(t, -xs)
    for k in range(9):
        sign = 1 if k % 2 == 0 else -1
        assert np.max(np.abs(Pm[k] - sign * P[k])) <= 1e-12 * max(1, np.max(np.abs(P[k])))


def test_example_plus_identity():
    grid = np.random.default_rng(1).uniform(0.2, 4.0, (20, 2))
    r = op.quad_transform_residual(0.3, Potential.model_vc(1.0), 3, 3.0, grid)
    assert r.res_plus <= 1e-10
    assert r.res_minus is not None and r.res_minus <= 1e-10


def test_example_minus_identity():
    grid = np.random.default_rng(1).uniform(0.2, 4.0, (20, 2))
    r = op.quad_transform_residual(0.7, Potential.model_vc(1.0), 3, 3.0, grid)
    assert r.res_minus <= 1e-10
    assert r.res_Q2n1 <= 1e-10


def test_example_even_polynomial_identity():
    grid = np.random.default_rng(1).uniform(0.2, 4.0, (20, 2))
    r = op.quad_transform_residual(0.3, Potential.model_vc(1.0), 4, 4.0, grid, xs=np.linspace(0.01, 1.99, 60))
    assert r.res_P2n <= 1e-10


def test_minus_variant_needs_positive_alpha():
    grid = np.array([[1.0, 2.0]])
    with pytest.raises(DomainError):
        op.quad_transform_residual(-0.5, Potential.model_vc(1.0), 2, 2.0, grid, want_minus=True)
    r = op.quad_transform_residual(-0.5, Potential.model_vc(1.0), 2, 2.0, grid)
    assert r.res_minus is None and r.res_Q2n1 is None


def test_precision_modes_agree():
    w = op.WeightSpec.hard_edge(0.0, Potential.model_vc(1.0), 20.0)
    nat = op.stieltjes_table(w, 20, "native")
    ext = op.stieltjes_table(w, 20, "extended")
    assert nat.precision_mode == "native" and ext.precision_mode == "extended"
    assert np.max(np.abs(nat.a - ext.a)) <= 1e-11
    assert np.max(np.abs(nat.b - ext.b)) <= 1e-11


def test_auto_mode_switches_above_threshold():
    t = op.vc_table("hard_edge", 0.0, 1.0, 41.0, 41)
    assert t.precision_mode == "extended"
    assert np.all(t.a > 0)


def test_bad_mode_rejected():
    with pytest.raises(ValueError):
        op.stieltjes_table(laguerre(), 3, "quad")


def test_rows_layout():
    t = op.stieltjes_table(laguerre(), 3)
    rows = t.rows()
    assert rows[0][0] == 0 and rows[0][1] is None
    assert rows[-1][0] == 3 and rows[-1][2] is None
    assert abs(rows[1][1] - 1.0) <= 1e-12 and abs(rows[1][2] - 3.0) <= 1e-12


def test_gauss_rule_from_table_is_laguerre():
    t = op.stieltjes_table(laguerre(), 6)
    nodes, weights = t.gauss_rule()
    for k in range(12):
        assert abs(np.dot(weights, nodes**k) - math.factorial(k)) <= 1e-9 * math.factorial(k)


@settings(max_examples=10)
@given(st.floats(min_value=0.2, max_value=4.0), st.floats(min_value=0.2, max_value=4.0))
def test_kernel_cauchy_schwarz(x, y):
    ctx = op.make_cd_context(op.WeightSpec.hard_edge(0.7, Potential.model_vc(1.0), 6.0), 6)
    k = op.cd_kernel(ctx, x, y)
    assert k * k <= op.cd_kernel(ctx, x, x) * op.cd_kernel(ctx, y, y) * (1 + 1e-12)
