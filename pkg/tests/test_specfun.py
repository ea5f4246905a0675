import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from softhard.errors import DomainError
from softhard.specfun import (
    ClassicalKernelTag,
    airy_ai,
    bessel_j,
    bessel_j_and_derivative,
    classical_kernel,
    gamma,
)

mp.mp.dps = 30

AI0 = 0.355028053887817239260063186004  # 3^{-2/3}/Gamma(2/3)
AIP0 = -0.258819403792806798405183560189  # -3^{-1/3}/Gamma(1/3)


def test_airy_at_zero():
    ai, aip = airy_ai(0.0)
    assert abs(ai - AI0) <= 1e-15
    assert abs(aip - AIP0) <= 1e-15


def test_airy_at_five():
    ai, _ = airy_ai(5.0)
    assert abs(ai - 1.0834442813607441e-4) <= 1e-16


@pytest.mark.parametrize("x", np.linspace(-15, 15, 121))
def test_airy_against_mpmath(x):
    ai, aip = airy_ai(float(x))
    ref = float(mp.airyai(x))
    refp = float(mp.airyai(x, derivative=1))
    scale_ai = max(abs(ref), 1e-3 * max(abs(refp), 1e-300)) if x < 0 else abs(ref)
    scale_p = max(abs(refp), 1e-3 * abs(ref)) if x < 0 else abs(refp)
    # relative error, measured against the local envelope where Ai oscillates
    assert abs(ai - ref) <= 1e-12 * scale_ai + 1e-300
    assert abs(aip - refp) <= 1e-12 * scale_p + 1e-300


def test_airy_switch_overlap():
    from softhard.specfun import _airy_asym_neg, _airy_asym_pos, _airy_series

    for x in (7.5, 8.0, 8.5):
        s = np.array(_airy_series(np.array([x])), dtype=float).ravel()
        a = _airy_asym_pos(x)
        assert abs(s[0] - a[0]) <= 1e-11 * abs(a[0])
        s = np.array(_airy_series(np.array([-x])), dtype=float).ravel()
        a = _airy_asym_neg(-x)
        assert abs(s[0] - a[0]) <= 1e-11


@given(st.floats(min_value=-12, max_value=12))
def test_airy_equation(x):
    # Richardson-extrapolated central difference of Ai'
    def d(h):
        return (airy_ai(x + h)[1] - airy_ai(x - h)[1]) / (2 * h)

    aipp = (4 * d(1e-3) - d(2e-3)) / 3
    assert abs(aipp - x * airy_ai(x)[0]) <= 1e-9


def test_bessel_closed_forms():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(1.0, 0.0) == 0.0
    assert abs(bessel_j(0.5, math.pi / 2) - 2 / math.pi) <= 1e-15


@pytest.mark.parametrize("nu", [-0.7, -0.3, 0.0, 0.3, 0.5, 1.0, 1.5, 2.5])
def test_bessel_against_mpmath(nu):
    for x in np.concatenate([np.linspace(0.05, 50, 60), [24.9, 25.1]]):
        val = bessel_j(nu, float(x))
        ref = float(mp.besselj(nu, x))
        env = max(abs(ref), float(mp.sqrt(2 / (mp.pi * x))) * 1e-3)
        assert abs(val - ref) <= 1e-10 * env


def test_bessel_derivative():
    j, jp = bessel_j_and_derivative(1.3, 7.0)
    assert abs(jp - float(mp.besselj(1.3, 7.0, derivative=1))) <= 1e-12


def test_bessel_domain():
    with pytest.raises(DomainError):
        bessel_j(0.5, -1.0)


def test_gamma_lanczos():
    for x in np.linspace(0.1, 30, 50):
        assert abs(gamma(x) - math.gamma(x)) <= 1e-13 * math.gamma(x)


# ---------------------------------------------------------------- kernels


def test_sine_diagonal_is_one():
    assert classical_kernel(ClassicalKernelTag.sine(), 3.3, 3.3) == 1.0


def test_sine_value():
    assert abs(classical_kernel(ClassicalKernelTag.sine(), 0.5, 0.0) - 2 / math.pi) <= 1e-15


def test_airy_diagonal_at_zero():
    assert abs(classical_kernel(ClassicalKernelTag.airy(), 0.0, 0.0) - AIP0**2) <= 1e-15
    assert abs(AIP0**2 - 0.0669875) <= 1e-7


def test_bessel_tag_validation():
    with pytest.raises(DomainError):
        ClassicalKernelTag.bessel(-1.0)
    with pytest.raises(DomainError):
        classical_kernel(ClassicalKernelTag.bessel(0.5), 0.0, 1.0)


_pos = st.floats(min_value=0.01, max_value=30)


@pytest.mark.parametrize("tag", [ClassicalKernelTag.sine(), ClassicalKernelTag.airy(), ClassicalKernelTag.bessel(0.3), ClassicalKernelTag.bessel(2.0)])
@given(x=_pos, y=_pos)
def test_kernels_symmetric(tag, x, y):
    assert abs(classical_kernel(tag, x, y) - classical_kernel(tag, y, x)) <= 1e-14 * max(1.0, abs(classical_kernel(tag, x, y)))


@pytest.mark.parametrize("tag", [ClassicalKernelTag.sine(), ClassicalKernelTag.airy(), ClassicalKernelTag.bessel(0.3)])
@pytest.mark.parametrize("x", [0.3, 1.0, 4.0, 9.0])
def test_diagonal_patch_continuity(tag, x):
    d = classical_kernel(tag, x, x)
    off = classical_kernel(tag, x, x + 1e-6)
    assert abs(d - off) <= 1e-6


def test_bessel_kernel_diagonal_matches_mpmath():
    a, x = 0.5, 2.0
    t = mp.sqrt(x)
    j = mp.besselj(a, t)
    jp = mp.besselj(a, t, derivative=1)
    ref = 0.25 * (jp**2 + (1 - a * a / t**2) * j**2)
    assert abs(classical_kernel(ClassicalKernelTag.bessel(a), x, x) - float(ref)) <= 1e-14
