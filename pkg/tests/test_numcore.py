import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from softhard.errors import ConvergenceError, SingularityError
from softhard.numcore import (
    ExtendedReal,
    SingularMatrixError,
    adaptive_quad,
    dense_solve_det,
    gauss_jacobi_rule,
    gauss_legendre_rule,
    ode_solve,
    tridiag_eig_first,
)
from softhard.numcore import ddouble as dd
from softhard.numcore.ddouble import as_fraction


# ---------------------------------------------------------------- quadrature


def test_two_point_rule_closed_form():
    r = gauss_legendre_rule(2, -1.0, 1.0)
    assert np.allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(r.weights, [1.0, 1.0], atol=1e-15)


def test_two_point_rule_integrates_cubic_exactly():
    r = gauss_legendre_rule(2, 0.0, 1.0)
    assert abs(r.integrate(lambda x: x**2) - 1 / 3) <= 1e-15


def test_weights_sum_to_length():
    assert abs(gauss_legendre_rule(16, 0.0, 4.0).weights.sum() - 4.0) <= 1e-13


@pytest.mark.parametrize("m", range(2, 25))
def test_monomial_exactness(m):
    r = gauss_legendre_rule(m, 0.0, 1.0)
    for k in range(2 * m):
        exact = 1.0 / (k + 1)
        assert abs(r.integrate(lambda x: x**k) - exact) <= 1e-13 * exact


def test_rule_invariants():
    r = gauss_legendre_rule(30, -2.0, 5.0)
    assert np.all(r.weights > 0)
    assert np.all(np.diff(r.nodes) > 0)
    assert r.nodes[0] > -2.0 and r.nodes[-1] < 5.0


def test_rule_rejects_bad_input():
    with pytest.raises(ValueError):
        gauss_legendre_rule(0, 0, 1)
    with pytest.raises(ValueError):
        gauss_legendre_rule(3, 1, 0)


def test_tridiagonal_eigenvalues_match_dense():
    rng = np.random.default_rng(3)
    d = rng.normal(size=12)
    e = rng.uniform(0.1, 1.0, size=11)
    lam, z = tridiag_eig_first(d, e)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    ref, vecs = np.linalg.eigh(T)
    assert np.allclose(lam, ref, atol=1e-13)
    assert np.allclose(z**2, vecs[0] ** 2, atol=1e-13)


def test_jacobi_rule_moment():
    # int_0^1 x^0.5 dx = 2/3 with the weight built in
    r = gauss_jacobi_rule(5, 0.0, 1.0, 0.0, 0.5)
    assert abs(r.weights.sum() - 2 / 3) <= 1e-14
    # int_0^1 x^{0.5} x^3 dx = 1/4.5
    assert abs(r.integrate(lambda x: x**3) - 1 / 4.5) <= 1e-14


def test_adaptive_quad_sqrt_singularity():
    val, err = adaptive_quad(np.sqrt, 0.0, 1.0, abstol=1e-12, reltol=1e-12)
    assert abs(val - 2 / 3) <= 1e-11


def test_adaptive_quad_gives_up():
    with pytest.raises(ConvergenceError):
        adaptive_quad(lambda x: 1.0 / np.abs(x - 0.3), 0.0, 1.0, max_depth=8)


# ---------------------------------------------------------------- ODE


def test_ode_exponential():
    sol = ode_solve(lambda t, y: y, 0.0, 1.0, [1.0], rtol=1e-10, atol=1e-12)
    assert abs(sol(1.0)[0] - math.e) <= 1e-9


def test_ode_backward():
    sol = ode_solve(lambda t, y: y, 1.0, 0.0, [math.e], rtol=1e-10, atol=1e-12)
    assert abs(sol(0.0)[0] - 1.0) <= 1e-9


def test_ode_energy_one_period():
    sol = ode_solve(lambda t, y: np.array([y[1], -y[0]]), 0.0, 2 * math.pi, [1.0, 0.0], rtol=1e-10, atol=1e-12)
    t = np.linspace(0, 2 * math.pi, 200)
    y = sol(t)
    assert np.max(np.abs(y[0] ** 2 + y[1] ** 2 - 1.0)) <= 1e-8


def test_ode_order_check():
    errs = []
    for rtol in (1e-6, 5e-7):
        sol = ode_solve(lambda t, y: y, 0.0, 1.0, [1.0], rtol=rtol, atol=rtol * 1e-2)
        errs.append(abs(sol(1.0)[0] - math.e))
    # halving rtol cuts the achieved error; over a few halvings by >= 4x
    errs2 = []
    for rtol in (1e-6, 1e-6 / 16):
        sol = ode_solve(lambda t, y: y, 0.0, 1.0, [1.0], rtol=rtol, atol=rtol * 1e-2)
        errs2.append(abs(sol(1.0)[0] - math.e))
    assert errs[1] < errs[0]
    assert errs2[1] * 4 <= errs2[0]


def test_ode_dense_output_and_derivative():
    sol = ode_solve(lambda t, y: np.array([y[1], -y[0]]), 0.0, 3.0, [0.0, 1.0], rtol=1e-11, atol=1e-13)
    t = np.linspace(0, 3, 77)
    assert np.max(np.abs(sol(t)[0] - np.sin(t))) <= 1e-9
    assert np.max(np.abs(sol.derivative(t)[0] - np.cos(t))) <= 1e-8


def test_ode_singularity_reports_location():
    with pytest.raises(SingularityError) as info:
        ode_solve(lambda t, y: y * y, 0.0, 2.0, [1.0], rtol=1e-8, atol=1e-10)
    assert abs(info.value.location - 1.0) <= 1e-6


def test_ode_rejects_empty_interval():
    with pytest.raises(ValueError):
        ode_solve(lambda t, y: y, 1.0, 1.0, [1.0])


# ---------------------------------------------------------------- LU


def test_det_identity():
    assert dense_solve_det(np.eye(3))[1] == 1.0


def test_det_diag():
    assert dense_solve_det(np.diag([2.0, 3.0]))[1] == 6.0


def test_det_permutation():
    assert dense_solve_det(np.array([[0.0, 1.0], [1.0, 0.0]]))[1] == -1.0


def test_solve_and_singular():
    A = np.array([[4.0, 1.0, 2.0], [1.0, 3.0, 0.5], [2.0, 0.5, 5.0]])
    b = np.array([1.0, 2.0, 3.0])
    x, det = dense_solve_det(A, b)
    assert np.allclose(A @ x, b, atol=1e-14)
    assert abs(det - np.linalg.det(A)) <= 1e-12
    S = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert dense_solve_det(S)[1] == 0.0
    with pytest.raises(SingularMatrixError):
        dense_solve_det(S, [1.0, 1.0])


# ---------------------------------------------------------------- double-double

_mag = st.floats(min_value=-10, max_value=10).map(lambda e: 10.0**e)
_signed = st.tuples(_mag, st.sampled_from([-1.0, 1.0])).map(lambda t: t[0] * t[1])


@given(_signed, _signed)
def test_add_sub_roundtrip(a, b):
    A = ExtendedReal(a)
    back = (A + b) - b
    assert abs(float(back - A)) <= 2.0**-100 * abs(a) + 2.0**-100 * 1e-300


@given(_signed, _signed)
def test_mul_exact_to_106_bits(a, b):
    p = ExtendedReal(a) * ExtendedReal(b)
    exact = Fraction(a) * Fraction(b)
    assert abs(as_fraction(p) - exact) <= Fraction(2.0**-100) * abs(exact)


@given(_signed, _signed)
def test_add_exact_to_106_bits(a, b):
    s = ExtendedReal(a) + ExtendedReal(b)
    exact = Fraction(a) + Fraction(b)
    assert abs(as_fraction(s) - exact) <= Fraction(2.0**-100) * (abs(Fraction(a)) + abs(Fraction(b)))


def test_division_and_sqrt():
    third = ExtendedReal(1.0) / 3.0
    assert abs(as_fraction(third) - Fraction(1, 3)) <= Fraction(2.0**-104)
    r = ExtendedReal(2.0).sqrt()
    assert abs(float(r * r - 2.0)) <= 2.0**-100


def test_two_sum_is_error_free():
    s, e = dd.two_sum(1.0, 1e-20)
    assert s == 1.0 and e == 1e-20


def test_dd_sum_cancellation():
    vals = np.array([1e16, 1.0, -1e16, 1.0])
    hi, lo = dd.dd_sum(vals)
    assert hi + lo == 2.0
