import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import beta as beta_fn, betainc

from halfline_nls.quadrature import full_profile_integral, profile_integral, sine_power_integral, tanh_sinh


def betainc_profile(p, lower):
    """int_lower^1 (1-s^2)^k ds through the regularized incomplete beta function."""
    k = (4.0 - p) / (p - 2.0)
    b = beta_fn(0.5, k + 1.0)
    half = 0.5 * b
    x = lower * lower
    part = 0.5 * b * betainc(0.5, k + 1.0, x)  # int_0^|lower|
    return half - part if lower >= 0 else half + part


def test_polynomial_exact():
    val = tanh_sinh(lambda dl, dr: dl**3, 2.0)
    assert val == pytest.approx(4.0, rel=1e-14)


def test_endpoint_singularity():
    # int_0^1 x^(-1/2) dx = 2, singular at the left end
    val = tanh_sinh(lambda dl, dr: dl**-0.5, 1.0)
    assert val == pytest.approx(2.0, rel=1e-12)


def test_zero_length():
    assert tanh_sinh(lambda dl, dr: dl, 0.0) == 0.0


@pytest.mark.parametrize("g, exact", [(1.0, 2.0), (2.0, math.pi / 2), (3.0, 4.0 / 3.0)])
def test_sine_power_full_period(g, exact):
    assert sine_power_integral(g, math.pi, 0.0) == pytest.approx(exact, rel=1e-13)


def test_sine_power_g_zero_is_length():
    assert sine_power_integral(0.0, 1.25) == 1.25


def test_p4_integrand_is_one():
    assert profile_integral(4.0, -0.3) == pytest.approx(1.3, rel=1e-14)
    assert full_profile_integral(4.0) == pytest.approx(1.0, rel=1e-14)


def test_p6_is_arc_length():
    # g = 0 at p = 6: the integral is arccos(lower)
    assert profile_integral(6.0, 0.2) == pytest.approx(math.acos(0.2), rel=1e-14)


@pytest.mark.parametrize("p", [2.5, 3.0, 3.5, 4.5, 5.0, 5.5, 5.9])
@pytest.mark.parametrize("lower", [-0.999, -0.5, 0.0, 0.3, 0.9])
def test_against_incomplete_beta(p, lower):
    assert profile_integral(p, lower) == pytest.approx(betainc_profile(p, lower), rel=1e-12)


@given(p=st.floats(2.2, 5.95), lower=st.floats(-0.99, 0.99))
def test_against_incomplete_beta_property(p, lower):
    assert profile_integral(p, lower) == pytest.approx(betainc_profile(p, lower), rel=1e-11)


@given(g=st.floats(0.1, 8.0), upper=st.floats(0.01, math.pi - 0.01))
def test_sine_power_symmetry(g, upper):
    # int_0^u + int_0^(pi-u) = full integral, by sin(pi - x) = sin(x)
    a = sine_power_integral(g, upper)
    b = sine_power_integral(g, math.pi - upper)
    full = sine_power_integral(g, math.pi, 0.0)
    assert a + b == pytest.approx(full, rel=1e-12)


def test_arc_form_resolves_tiny_complement():
    # lower = -cos(eps): complement eps is far below the spacing of doubles near -1
    eps = 1e-12
    full = 2.0 * full_profile_integral(5.0)
    near = profile_integral(5.0, arc=math.pi - eps, arc_complement=eps)
    g = 1.0 / 3.0
    # missing piece is int_0^eps u^g du to leading order
    assert full - near == pytest.approx(eps ** (g + 1) / (g + 1), rel=1e-6)


def test_rejects_bad_bounds():
    with pytest.raises(ValueError):
        profile_integral(3.0, 1.5)
    with pytest.raises(ValueError):
        sine_power_integral(1.0, 4.0)
    with pytest.raises(ValueError):
        tanh_sinh(lambda dl, dr: dl, -1.0)
