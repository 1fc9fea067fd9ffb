"""Physical constants (CODATA 2018, SI) and unit conversions."""

import math

HBAR = 1.054571817e-34  # J s
E_CHARGE = 1.602176634e-19  # C
C_LIGHT = 299792458.0  # m/s
EPS0 = 8.8541878128e-12  # F/m

#: angular frequency (rad/s) corresponding to 1 eV
EV_TO_RAD_S = E_CHARGE / HBAR

NM = 1e-9


def ev_to_rad_s(energy_ev):
    return energy_ev * EV_TO_RAD_S


def rad_s_to_ev(omega):
    return omega / EV_TO_RAD_S


def wavelength_nm(omega):
    """Free-space wavelength in nm of an angular frequency in rad/s."""
    return 2.0 * math.pi * C_LIGHT / omega / NM
