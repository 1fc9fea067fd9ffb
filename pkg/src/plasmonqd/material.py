"""Local and hydrodynamic-nonlocal plasmon parameters of a Drude sphere.

All quantities are SI: angular frequencies and rates in rad/s, lengths in m,
dipole moments in C m, intensities in W/m^2.
"""

import math
from dataclasses import dataclass

from .constants import C_LIGHT, EPS0, HBAR, ev_to_rad_s
from .errors import DomainError, GeometryError
from .numerics import bessel_log_ratio

LOCAL = "local"
NONLOCAL = "nonlocal"
RESPONSE_KINDS = (LOCAL, NONLOCAL)

#: how to treat modes whose nonlocal factor Re(1 + Delta_l) is negative
NEGATIVE_POLICIES = ("clamp", "error")


@dataclass(frozen=True)
class MaterialParams:
    """Drude metal in a dielectric host.

    Attributes
    ----------
    omega_p : float
        Bulk plasma frequency (rad/s).
    gamma_p : float
        Bulk electron damping (rad/s).
    eps_inf : float
        High-frequency (bound-electron) dielectric constant.
    v_f : float
        Fermi velocity (m/s).
    eps_b : float
        Dielectric constant of the host medium.
    """

    omega_p: float
    gamma_p: float
    eps_inf: float
    v_f: float
    eps_b: float = 3.0

    def __post_init__(self):
        for name in ("omega_p", "gamma_p", "eps_inf", "v_f", "eps_b"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if self.eps_inf < 1 or self.eps_b < 1:
            raise DomainError("eps_inf and eps_b must be >= 1")

    @property
    def beta(self):
        """Hydrodynamic convection velocity sqrt(3/5) v_F (m/s)."""
        return math.sqrt(3.0 / 5.0) * self.v_f

    def diffusion(self, omega):
        """Electron diffusion constant D(omega) = 4 gamma_p v_F^2 / (15 (omega^2 + gamma_p^2)), m^2/s."""
        return 4.0 * self.gamma_p * self.v_f**2 / (15.0 * (omega**2 + self.gamma_p**2))


PRESETS = {
    "silver-drude": dict(
        omega_p=ev_to_rad_s(8.5472),
        gamma_p=ev_to_rad_s(0.018),
        eps_inf=5.0,
        v_f=1.39e6,
    ),
}


def material_preset(name="silver-drude", eps_b=3.0, **overrides):
    try:
        base = dict(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown material preset {name!r}; known: {sorted(PRESETS)}") from None
    base.update(overrides)
    return MaterialParams(eps_b=eps_b, **base)


@dataclass(frozen=True)
class SystemGeometry:
    """Two identical QDs placed symmetrically on either side of the MNP.

    ``r`` is the MNP radius, ``r0`` the QD radius and ``s`` the
    surface-to-surface gap, all in metres.
    """

    r: float
    r0: float
    s: float

    def __post_init__(self):
        for name in ("r", "r0", "s"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise GeometryError(f"{name} must be positive, got {value}")

    @property
    def d(self):
        """Centre-to-centre QD-MNP distance."""
        return self.r0 + self.s + self.r


@dataclass(frozen=True)
class PlasmonMode:
    l: int
    omega: float
    gamma_nr: float
    gamma_r: float
    gamma: float
    coupling: float
    eta: float
    delta: complex
    response: str
    #: Re(1 + Delta_l) before any clamping
    nonlocal_factor: float = 1.0


@dataclass(frozen=True)
class DipoleMomentResult:
    chi: float
    chi_local: float


def _check_order(l):
    if int(l) != l or l < 1:
        raise DomainError(f"multipole order must be an integer >= 1, got {l}")


def drude_permittivity(mat, omega):
    """Local Drude permittivity eps_inf - omega_p^2 / (omega (omega + i gamma_p))."""
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega}")
    return mat.eps_inf - mat.omega_p**2 / (omega * (omega + 1j * mat.gamma_p))


def longitudinal_wavevector(mat, omega):
    """Hydrodynamic longitudinal wavevector k_L (1/m), branch with Im k_L >= 0."""
    eps = drude_permittivity(mat, omega)
    big_d = mat.diffusion(omega)
    num = omega * (omega + 1j * mat.gamma_p) * eps
    den = mat.eps_inf * (mat.beta**2 + big_d * (mat.gamma_p - 1j * omega))
    k = complex(num / den) ** 0.5
    if k.imag < 0 or (k.imag == 0 and k.real < 0):
        k = -k
    return k


def nonlocal_correction(mat, l, omega, r):
    """Size-dependent correction Delta_l(omega, r) of the l-th multipole."""
    _check_order(l)
    if not r > 0:
        raise GeometryError(f"radius must be positive, got {r}")
    eps = drude_permittivity(mat, omega)
    z = longitudinal_wavevector(mat, omega) * r
    if z == 0:
        return 0j
    return l * (l + 1) * (eps - mat.eps_inf) / mat.eps_inf * bessel_log_ratio(l, z)


def _shape_factor(mat, l):
    return l * mat.omega_p**2 / (l * mat.eps_inf + (l + 1) * mat.eps_b)


def local_mode_frequency(mat, l):
    _check_order(l)
    radicand = _shape_factor(mat, l) - mat.gamma_p**2
    if radicand <= 0:
        raise DomainError(f"over-damped mode l={l}: omega_l^2 = {radicand:.3e} <= 0")
    return math.sqrt(radicand)


def local_damping(mat, l):
    omega_l = local_mode_frequency(mat, l)
    return mat.gamma_p * (1.0 + (mat.gamma_p / omega_l) ** 2)


def mode_normalization(mat, l):
    """eta_l = (1 / 2 omega_l^L) (l omega_p / (l eps_inf + (l+1) eps_b))^2."""
    omega_l = local_mode_frequency(mat, l)
    return (l * mat.omega_p / (l * mat.eps_inf + (l + 1) * mat.eps_b)) ** 2 / (2.0 * omega_l)


def local_coupling(mat, geom, l, mu):
    """QD to l-pole coupling in the local-response approximation (rad/s)."""
    _check_order(l)
    d = geom.d
    if d <= geom.r:
        raise GeometryError(f"QD centre (d={d:.3e} m) lies inside the MNP (r={geom.r:.3e} m)")
    eta = mode_normalization(mat, l)
    root = math.sqrt((2 * l + 1) * eta * geom.r ** (2 * l + 1) / (4.0 * math.pi * EPS0 * HBAR * l))
    return mu * (l + 1) / d ** (l + 2) * root


def local_dipole_moment(mat, r):
    """Dipole moment of the l=1 plasmon, eps_b sqrt(12 pi eps0 eta_1 r^3 hbar)."""
    if not r > 0:
        raise GeometryError(f"radius must be positive, got {r}")
    eta1 = mode_normalization(mat, 1)
    return mat.eps_b * math.sqrt(12.0 * math.pi * EPS0 * eta1 * r**3 * HBAR)


def dipole_moment(mat, r, omega, response=NONLOCAL):
    chi_local = local_dipole_moment(mat, r)
    if response == LOCAL:
        return DipoleMomentResult(chi=chi_local, chi_local=chi_local)
    factor = (1.0 + nonlocal_correction(mat, 1, omega, r)).real
    if factor <= 0:
        raise DomainError(f"Re(1 + Delta_1) = {factor:.3e} <= 0; nonlocal correction invalid")
    return DipoleMomentResult(chi=chi_local * math.sqrt(factor), chi_local=chi_local)


def radiative_decay(chi, omega1, eps_b):
    """Dipole radiation rate chi^2 sqrt(eps_b) omega^3 / (3 pi eps0 hbar c^3)."""
    if chi < 0 or not omega1 > 0:
        raise DomainError("radiative_decay needs chi >= 0 and omega1 > 0")
    return chi**2 * math.sqrt(eps_b) * omega1**3 / (3.0 * math.pi * EPS0 * HBAR * C_LIGHT**3)


def field_amplitude(intensity, eps_b):
    """Peak field E_0 = sqrt(2 I / (c n eps0)) of a plane wave in the host, n = sqrt(eps_b)."""
    if intensity < 0:
        raise DomainError(f"intensity must be non-negative, got {intensity}")
    return math.sqrt(2.0 * intensity / (C_LIGHT * math.sqrt(eps_b) * EPS0))


def excitation_rate(intensity, chi, eps_b):
    """Plasmon excitation rate Omega = E_0 chi / (2 hbar) for intensity in W/m^2."""
    return field_amplitude(intensity, eps_b) * chi / (2.0 * HBAR)


def resonance_frequency(mat, r, response=NONLOCAL):
    """Dipolar LSPR omega_1 of the chosen response kind."""
    omega = local_mode_frequency(mat, 1)
    if response == NONLOCAL:
        omega += math.sqrt(2.0) * mat.beta / (2.0 * r)
    return omega


def corrected_mode(
    mat,
    geom,
    l,
    omega_drive,
    mu,
    response=NONLOCAL,
    radiative_damping=False,
    negative_policy="clamp",
    delta_override=None,
    additive_shifts=True,
):
    """Plasmon mode ``l`` with optional hydrodynamic corrections.

    The nonlocal correction ``Delta_l`` is evaluated at ``omega_drive``.
    For ``response="local"`` all shifts vanish and the local parameters are
    returned unchanged.

    ``negative_policy`` decides what happens when ``Re(1 + Delta_l) < 0``:
    ``"error"`` raises :class:`DomainError`, ``"clamp"`` decouples the mode
    (coupling set to zero). ``delta_override`` forces a value of ``Delta_l``;
    ``additive_shifts=False`` drops the convective blueshift and the
    diffusive broadening. With both switched off the nonlocal branch returns
    the local parameters exactly.
    """
    if response not in RESPONSE_KINDS:
        raise ValueError(f"response must be one of {RESPONSE_KINDS}, got {response!r}")
    if negative_policy not in NEGATIVE_POLICIES:
        raise ValueError(f"negative_policy must be one of {NEGATIVE_POLICIES}")
    omega_l = local_mode_frequency(mat, l)
    gamma_nr = local_damping(mat, l)
    coupling = local_coupling(mat, geom, l, mu)
    eta = mode_normalization(mat, l)
    delta = 0j
    factor = 1.0

    if response == NONLOCAL:
        r = geom.r
        if additive_shifts:
            omega_l = omega_l + math.sqrt(l * (l + 1)) * mat.beta / (2.0 * r)
            gamma_nr = gamma_nr + (
                0.5 * l * math.sqrt((l + 1) / (2 * l + 1)) * mat.diffusion(omega_drive) * mat.omega_p / (mat.beta * r)
            )
        delta = nonlocal_correction(mat, l, omega_drive, r) if delta_override is None else complex(delta_override)
        factor = (1.0 + delta).real
        if factor < 0:
            if negative_policy == "error":
                raise DomainError(
                    f"Re(1 + Delta_{l}) = {factor:.3e} < 0 at r = {r:.3e} m; "
                    "nonlocal correction outside its validity range"
                )
            coupling = 0.0
        else:
            coupling = coupling * math.sqrt(factor)

    gamma_r = 0.0
    if l == 1 and radiative_damping:
        chi = local_dipole_moment(mat, geom.r)
        if response == NONLOCAL:
            chi *= math.sqrt(max(factor, 0.0))
        gamma_r = radiative_decay(chi, omega_l, mat.eps_b)

    return PlasmonMode(
        l=l,
        omega=omega_l,
        gamma_nr=gamma_nr,
        gamma_r=gamma_r,
        gamma=gamma_nr + gamma_r,
        coupling=coupling,
        eta=eta,
        delta=delta,
        response=response,
        nonlocal_factor=factor,
    )


def plasmon_modes(mat, geom, n_modes, omega_drive, mu, response=NONLOCAL, **kwargs):
    """Modes ``l = 1..n_modes``; keyword arguments go to :func:`corrected_mode`."""
    if n_modes < 1:
        raise ValueError("need at least one multipole order")
    return [corrected_mode(mat, geom, l, omega_drive, mu, response, **kwargs) for l in range(1, n_modes + 1)]
