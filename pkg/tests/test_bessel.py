import cmath

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasmonqd.numerics import bessel_log_ratio, log_derivative

mpmath.mp.dps = 40


def reference_ratio(l, z):
    """j_l(z) / (z j_l'(z)) in 40-digit arithmetic."""
    z = mpmath.mpc(z)
    j = mpmath.sqrt(mpmath.pi / (2 * z)) * mpmath.besselj(l + mpmath.mpf(1) / 2, z)
    jm = mpmath.sqrt(mpmath.pi / (2 * z)) * mpmath.besselj(l - mpmath.mpf(1) / 2, z)
    dj = jm - (l + 1) / z * j
    return complex(j / (z * dj))


def test_closed_form_l1_z1():
    z = 1.0
    j1 = np.sin(z) / z**2 - np.cos(z) / z
    j1p = np.sin(z) / z - 2 * j1 / z
    expected = j1 / (z * j1p)
    assert abs(bessel_log_ratio(1, 1.0) - expected) < 1e-13
    assert abs(bessel_log_ratio(1, 1.0) - 1.25942) < 1e-5


@pytest.mark.parametrize("l", [1, 2, 5])
def test_small_argument_limit(l):
    # j_l ~ z^l, so z j_l' / j_l -> l
    assert abs(bessel_log_ratio(l, 1e-6) - 1.0 / l) < 1e-9


def test_large_imaginary_argument():
    value = bessel_log_ratio(1, 120j)
    assert np.isfinite(value) and abs(value) < 1
    assert abs(value - reference_ratio(1, 120j)) < 1e-12 * abs(value)


@pytest.mark.parametrize("z", [350j, 10 + 400j, 0.5 + 600j])
def test_no_overflow_far_into_imaginary_axis(z):
    for l in (1, 10, 40):
        value = bessel_log_ratio(l, z)
        assert abs(value - reference_ratio(l, z)) < 1e-10 * abs(value)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 30),
    st.floats(0.1, 50),
    st.floats(0, 2 * np.pi),
)
def test_against_high_precision(l, modulus, phase):
    z = cmath.rect(modulus, phase)
    ref = reference_ratio(l, z)
    if not np.isfinite(ref) or abs(ref) > 1e8:
        return  # too close to a zero of j_l'
    assert abs(bessel_log_ratio(l, z) - ref) < 1e-9 * max(1.0, abs(ref))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.floats(0.1, 50), st.floats(0, 2 * np.pi))
def test_downward_recurrence_consistency(l, modulus, phase):
    z = cmath.rect(modulus, phase)
    d_l = log_derivative(l, z)
    d_lm1 = log_derivative(l - 1, z)
    denom = d_l + (l + 1) / z
    if abs(denom) < 1e-8:
        return
    residual = d_lm1 - ((l - 1) / z - 1 / denom)
    assert abs(residual) < 1e-10 * max(1.0, abs(d_lm1))


def test_order_limits():
    with pytest.raises(ValueError):
        bessel_log_ratio(0, 1.0)
    with pytest.raises(ValueError):
        bessel_log_ratio(61, 1.0)
    with pytest.raises(ValueError):
        log_derivative(1, 0)


@pytest.mark.parametrize("z", [2500j + 3, 4e4j, -6 - 1e5j, 3e7j + 1e5])
@pytest.mark.parametrize("l", [1, 7, 30])
def test_huge_imaginary_arguments(l, z):
    value = bessel_log_ratio(l, z)
    assert abs(value - reference_ratio(l, z)) < 1e-10 * abs(value)
