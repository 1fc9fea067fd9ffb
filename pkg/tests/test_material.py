import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasmonqd.constants import E_CHARGE, ev_to_rad_s, wavelength_nm
from plasmonqd.errors import DomainError, GeometryError
from plasmonqd.material import (
    LOCAL,
    MaterialParams,
    SystemGeometry,
    corrected_mode,
    dipole_moment,
    drude_permittivity,
    excitation_rate,
    field_amplitude,
    local_coupling,
    local_damping,
    local_dipole_moment,
    local_mode_frequency,
    longitudinal_wavevector,
    material_preset,
    mode_normalization,
    nonlocal_correction,
    plasmon_modes,
    radiative_decay,
    resonance_frequency,
)

SILVER = material_preset()
MU = E_CHARGE * 0.8e-9
GEOM = SystemGeometry(30e-9, 0.8e-9, 30e-9)


def test_preset_values():
    assert SILVER.omega_p == pytest.approx(ev_to_rad_s(8.5472))
    assert SILVER.gamma_p == pytest.approx(ev_to_rad_s(0.018))
    assert SILVER.eps_inf == 5.0 and SILVER.v_f == 1.39e6 and SILVER.eps_b == 3.0
    assert SILVER.beta == pytest.approx(math.sqrt(0.6) * 1.39e6)


def test_unknown_preset_and_invalid_params():
    with pytest.raises(KeyError):
        material_preset("gold")
    with pytest.raises(DomainError):
        MaterialParams(omega_p=1.0, gamma_p=0.1, eps_inf=0.5, v_f=1.0)
    with pytest.raises(DomainError):
        MaterialParams(omega_p=-1.0, gamma_p=0.1, eps_inf=5, v_f=1.0)


def test_geometry():
    g = SystemGeometry(30e-9, 0.8e-9, 5e-9)
    assert g.d == 0.8e-9 + 5e-9 + 30e-9
    with pytest.raises(GeometryError):
        SystemGeometry(30e-9, 0.8e-9, 0.0)


def test_drude_limits():
    assert abs(drude_permittivity(SILVER, 1e25) - SILVER.eps_inf) < 1e-6
    eps = drude_permittivity(SILVER, SILVER.omega_p / math.sqrt(11))
    assert eps.real == pytest.approx(-6.0, rel=1e-3)
    assert eps.imag > 0
    lossless = MaterialParams(SILVER.omega_p, 1e-30, 5.0, 1.39e6)
    assert abs(drude_permittivity(lossless, SILVER.omega_p / math.sqrt(5.0))) < 1e-12
    with pytest.raises(DomainError):
        drude_permittivity(SILVER, 0.0)


def test_longitudinal_wavevector():
    w = ev_to_rad_s(2.577)
    k = longitudinal_wavevector(SILVER, w)
    assert k.imag >= 0
    eps = drude_permittivity(SILVER, w)
    approx = w * math.sqrt(abs(eps / SILVER.eps_inf)) / SILVER.beta
    assert abs(k) == pytest.approx(approx, rel=0.02)
    assert 1e9 < abs(k) < 1e10
    lossless = MaterialParams(SILVER.omega_p, 1e-30, 5.0, 1.39e6)
    w0 = SILVER.omega_p / math.sqrt(5.0)
    # eps(w0) = 0 up to round-off
    assert abs(longitudinal_wavevector(lossless, w0)) < 1e-6 * w0 / lossless.beta


def direct_delta(mat, l, w, r):
    """Delta_l from the spherical Bessel functions themselves, 40 digits."""
    mpmath.mp.dps = 40
    eps = drude_permittivity(mat, w)
    z = mpmath.mpc(longitudinal_wavevector(mat, w) * r)
    j = mpmath.sqrt(mpmath.pi / (2 * z)) * mpmath.besselj(l + 0.5, z)
    jm = mpmath.sqrt(mpmath.pi / (2 * z)) * mpmath.besselj(l - 0.5, z)
    dj = jm - (l + 1) / z * j
    return complex(l * (l + 1) * (eps - mat.eps_inf) / mat.eps_inf * j / (z * dj))


@pytest.mark.parametrize("l", [1, 2, 5, 10])
def test_delta_against_direct_bessel(l):
    w = local_mode_frequency(SILVER, 1)
    value = nonlocal_correction(SILVER, l, w, 30e-9)
    assert abs(value - direct_delta(SILVER, l, w, 30e-9)) < 1e-10 * abs(value)


def test_delta_vanishes_for_large_spheres():
    w = local_mode_frequency(SILVER, 1)
    assert abs(nonlocal_correction(SILVER, 1, w, 1e-3)) < 1e-3
    radii = [5e-9, 5e-8, 5e-7, 5e-6]
    values = [abs(nonlocal_correction(SILVER, 1, w, r)) for r in radii]
    assert all(b <= a + 1e-6 for a, b in zip(values, values[1:]))


def test_local_lspr_wavelength():
    assert wavelength_nm(local_mode_frequency(SILVER, 1)) == pytest.approx(481, abs=1)
    assert local_mode_frequency(SILVER, 1) == pytest.approx(SILVER.omega_p / math.sqrt(11), rel=1e-4)


def test_nonlocal_blueshift():
    w_l = local_mode_frequency(SILVER, 1)
    w_nl = resonance_frequency(SILVER, 30e-9)
    assert w_nl - w_l == pytest.approx(math.sqrt(2) * SILVER.beta / 60e-9)
    assert w_nl - w_l == pytest.approx(ev_to_rad_s(0.017), rel=0.05)
    assert wavelength_nm(w_nl) == pytest.approx(478, abs=1)


def test_mode_frequency_asymptote():
    limit = math.sqrt(SILVER.omega_p**2 / (SILVER.eps_inf + SILVER.eps_b) - SILVER.gamma_p**2)
    assert local_mode_frequency(SILVER, 60) < limit
    assert local_mode_frequency(SILVER, 60) == pytest.approx(limit, rel=1e-2)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(1e15, 3e16),
    st.floats(1e12, 1e14),
    st.floats(1, 12),
    st.floats(1, 5),
)
def test_mode_frequency_increases_with_order(wp, gp, eps_inf, eps_b):
    mat = MaterialParams(wp, gp, eps_inf, 1e6, eps_b)
    try:
        w = [local_mode_frequency(mat, l) for l in range(1, 8)]
    except DomainError:
        return
    assert all(b > a for a, b in zip(w, w[1:]))


def test_local_damping():
    g = local_damping(SILVER, 1)
    assert g >= SILVER.gamma_p
    assert g == pytest.approx(SILVER.gamma_p, rel=1e-4)
    assert local_damping(SILVER, 2) < local_damping(SILVER, 1)
    # gamma_p = omega_l gives twice gamma_p
    wp = math.sqrt(11 * 2 * 1e14**2)
    mat = MaterialParams(wp, 1e14, 5.0, 1e6, 3.0)
    assert local_damping(mat, 1) == pytest.approx(2e14)


def test_local_coupling_scaling():
    near = SystemGeometry(30e-9, 0.8e-9, 5e-9)
    far = SystemGeometry(30e-9, 0.8e-9, 2 * near.d - 30e-9 - 0.8e-9)
    for l in (1, 2, 3):
        ratio = local_coupling(SILVER, far, l, MU) / local_coupling(SILVER, near, l, MU)
        assert ratio == pytest.approx(2.0 ** -(l + 2), rel=1e-12)
    assert local_coupling(SILVER, GEOM, 1, 0.0) == 0.0


def test_local_coupling_magnitude():
    g1 = local_coupling(SILVER, GEOM, 1, MU)
    assert 5e11 < g1 < 3e12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.floats(1e-9, 1e-6))
def test_coupling_power_law(l, s):
    geom = SystemGeometry(30e-9, 0.8e-9, s)
    ref = SystemGeometry(30e-9, 0.8e-9, 30e-9)
    a = local_coupling(SILVER, geom, l, MU) * geom.d ** (l + 2)
    b = local_coupling(SILVER, ref, l, MU) * ref.d ** (l + 2)
    assert a == pytest.approx(b, rel=1e-12)


def test_dipole_moment_scaling():
    assert local_dipole_moment(SILVER, 60e-9) / local_dipole_moment(SILVER, 30e-9) == pytest.approx(2**1.5)
    with pytest.raises(GeometryError):
        local_dipole_moment(SILVER, 0.0)
    w = resonance_frequency(SILVER, 30e-9)
    res = dipole_moment(SILVER, 30e-9, w)
    assert 0 < res.chi < res.chi_local
    assert dipole_moment(SILVER, 30e-9, w, LOCAL).chi == res.chi_local


def test_radiative_decay():
    assert radiative_decay(0.0, 1e15, 3.0) == 0.0
    assert radiative_decay(1e-27, 2e15, 3.0) / radiative_decay(1e-27, 1e15, 3.0) == pytest.approx(8.0)


def test_radiative_decay_exceeds_nonradiative_for_silver_30nm():
    # the formula as written gives gamma_r > gamma_nr here, which is why it is off by default
    w = resonance_frequency(SILVER, 30e-9)
    mode = corrected_mode(SILVER, GEOM, 1, w, MU, radiative_damping=True)
    assert mode.gamma_r > mode.gamma_nr
    assert mode.gamma == mode.gamma_nr + mode.gamma_r


def test_excitation_rate():
    chi = local_dipole_moment(SILVER, 30e-9)
    assert excitation_rate(0.0, chi, 3.0) == 0.0
    assert excitation_rate(4e5, chi, 3.0) / excitation_rate(1e5, chi, 3.0) == pytest.approx(2.0)
    assert field_amplitude(1e5, 1.0) == pytest.approx(math.sqrt(2e5 / (299792458 * 8.8541878128e-12)))
    with pytest.raises(DomainError):
        field_amplitude(-1.0, 3.0)


def test_local_mode_matches_local_functions():
    w = resonance_frequency(SILVER, 30e-9)
    for l in range(1, 11):
        m = corrected_mode(SILVER, GEOM, l, w, MU, response=LOCAL)
        assert m.omega == local_mode_frequency(SILVER, l)
        assert m.gamma == local_damping(SILVER, l)
        assert m.coupling == local_coupling(SILVER, GEOM, l, MU)
        assert m.eta == mode_normalization(SILVER, l)
        assert m.gamma_r == 0.0 and m.delta == 0


def test_switching_off_corrections_gives_local_values_exactly():
    w = resonance_frequency(SILVER, 30e-9)
    for l in range(1, 11):
        a = corrected_mode(SILVER, GEOM, l, w, MU, response=LOCAL)
        b = corrected_mode(SILVER, GEOM, l, w, MU, delta_override=0.0, additive_shifts=False)
        assert (a.omega, a.gamma, a.coupling) == (b.omega, b.gamma, b.coupling)


def test_nonlocal_exceeds_local():
    w = resonance_frequency(SILVER, 30e-9)
    for r in (5e-9, 30e-9, 90e-9):
        geom = SystemGeometry(r, 0.8e-9, r)
        for l in (1, 3, 6):
            nl = corrected_mode(SILVER, geom, l, w, MU)
            lo = corrected_mode(SILVER, geom, l, w, MU, response=LOCAL)
            assert nl.omega > lo.omega and nl.gamma_nr > lo.gamma_nr


def test_large_sphere_local_limit():
    geom = SystemGeometry(1e-2, 0.8e-9, 1e-2)
    w = resonance_frequency(SILVER, 1e-2)
    for l in (1, 2):
        nl = corrected_mode(SILVER, geom, l, w, MU)
        lo = corrected_mode(SILVER, geom, l, w, MU, response=LOCAL)
        assert nl.omega == pytest.approx(lo.omega, rel=1e-6)
        assert nl.coupling == pytest.approx(lo.coupling, rel=1e-6)
        assert nl.gamma_nr == pytest.approx(lo.gamma_nr, rel=1e-6)


def test_negative_factor_policies():
    w = resonance_frequency(SILVER, 30e-9)
    factors = [m.nonlocal_factor for m in plasmon_modes(SILVER, GEOM, 10, w, MU)]
    assert factors[0] > 0 and factors[-1] < 0
    clamped = corrected_mode(SILVER, GEOM, 10, w, MU)
    assert clamped.coupling == 0.0
    with pytest.raises(DomainError):
        corrected_mode(SILVER, GEOM, 10, w, MU, negative_policy="error")


def test_bad_arguments():
    w = resonance_frequency(SILVER, 30e-9)
    with pytest.raises(DomainError):
        corrected_mode(SILVER, GEOM, 0, w, MU)
    with pytest.raises(ValueError):
        corrected_mode(SILVER, GEOM, 1, w, MU, response="quantum")
    with pytest.raises(ValueError):
        plasmon_modes(SILVER, GEOM, 0, w, MU)
    np.testing.assert_equal(len(plasmon_modes(SILVER, GEOM, 3, w, MU)), 3)
