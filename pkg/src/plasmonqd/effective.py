"""Adiabatic elimination of the plasmon modes.

Each mode l is treated as a damped oscillator slaved to the qubits. Once it
is eliminated, the two QDs only see effective drives, a mediated exchange
coupling, a shared decay channel and Purcell-enhanced relaxation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .numerics import integrate_adaptive

#: sign convention for the cross terms g_1l g_2l
CROSS_PARITIES = ("axial", "symmetric")


@dataclass(frozen=True)
class QubitParams:
    mu: float
    gamma: float
    omega1: float
    omega2: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"qubit relaxation rate must be positive, got {self.gamma}")

    @property
    def delta(self):
        return 0.5 * (self.omega1 - self.omega2)


def symmetric_qubits(omega_pl, mu, gamma, delta_fraction=1e-5):
    """QDs detuned anti-symmetrically by ``delta_fraction * omega_pl`` around ``omega_pl``."""
    delta = delta_fraction * omega_pl
    return QubitParams(mu=mu, gamma=gamma, omega1=omega_pl + delta, omega2=omega_pl - delta)


@dataclass(frozen=True)
class EffectiveParams:
    """Effective two-qubit parameters (rad/s) after eliminating the plasmons.

    ``terms`` holds the per-mode contributions (index ``l - 1``) to each of
    the sums, keyed ``"rabi"``, ``"coupling"``, ``"cross_decay"``,
    ``"purcell"`` and ``"shift"``.
    """

    rabi: complex
    coupling: float
    cross_decay: float
    detuning1: float
    detuning2: float
    gamma1: float
    gamma2: float
    omega_drive: float
    gamma: float = 0.0
    terms: dict = field(default_factory=dict, compare=False, repr=False)

    def with_changes(self, **changes):
        values = {
            name: getattr(self, name)
            for name in (
                "rabi", "coupling", "cross_decay", "detuning1", "detuning2",
                "gamma1", "gamma2", "omega_drive", "gamma", "terms",
            )
        }
        values.update(changes)
        return EffectiveParams(**values)

    def summary(self):
        return {
            "rabi_re": float(np.real(self.rabi)),
            "rabi_im": float(np.imag(self.rabi)),
            "coupling": self.coupling,
            "cross_decay": self.cross_decay,
            "detuning1": self.detuning1,
            "detuning2": self.detuning2,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "omega_drive": self.omega_drive,
        }


@dataclass(frozen=True)
class DickeParams:
    omega_s: complex
    omega_a: complex
    delta_s: float
    delta_a: float
    delta_minus: float
    delta_plus: float
    gamma_s: float
    gamma_a: float


def effective_parameters(modes, qubits, rabi, omega_drive, cross_parity="axial"):
    """Effective parameters of the two QDs coupled through ``modes``.

    Parameters
    ----------
    modes : sequence of PlasmonMode
        Modes ``l = 1..N``; only ``l = 1`` is driven.
    qubits : QubitParams
    rabi : float
        Bare plasmon excitation rate Omega (rad/s).
    omega_drive : float
        Laser angular frequency.
    cross_parity : {"axial", "symmetric"}
        ``"axial"``: QDs sit on opposite poles with dipoles along the axis,
        so the product of their couplings to mode l carries ``(-1)**(l+1)``.
        ``"symmetric"``: g_1l g_2l = g_l^2 for every l.
    """
    if not modes:
        raise DomainError("effective_parameters needs at least one plasmon mode")
    if cross_parity not in CROSS_PARITIES:
        raise ValueError(f"cross_parity must be one of {CROSS_PARITIES}")
    n = len(modes)
    rabi_terms = np.zeros(n, dtype=complex)
    coupling_terms = np.zeros(n)
    cross_terms = np.zeros(n)
    purcell_terms = np.zeros(n)
    shift_terms = np.zeros(n)
    for k, mode in enumerate(modes):
        if not mode.gamma > 0:
            raise DomainError(f"mode l={mode.l} has non-positive damping {mode.gamma}")
        detuning = mode.omega - omega_drive
        dl = 1j * detuning + 0.5 * mode.gamma
        weight = mode.coupling**2 / abs(dl) ** 2
        sign = (-1) ** (mode.l + 1) if cross_parity == "axial" else 1
        if mode.l == 1:
            rabi_terms[k] = mode.coupling * 1j * rabi / dl
        coupling_terms[k] = sign * detuning * weight
        cross_terms[k] = sign * mode.gamma * weight
        purcell_terms[k] = mode.gamma * weight
        shift_terms[k] = detuning * weight

    shift = shift_terms.sum()
    purcell = purcell_terms.sum()
    return EffectiveParams(
        rabi=complex(rabi_terms.sum()),
        coupling=float(coupling_terms.sum()),
        cross_decay=float(cross_terms.sum()),
        detuning1=float(qubits.omega1 - omega_drive - shift),
        detuning2=float(qubits.omega2 - omega_drive - shift),
        gamma1=float(qubits.gamma + purcell),
        gamma2=float(qubits.gamma + purcell),
        omega_drive=float(omega_drive),
        gamma=float(qubits.gamma),
        terms={
            "rabi": rabi_terms,
            "coupling": coupling_terms,
            "cross_decay": cross_terms,
            "purcell": purcell_terms,
            "shift": shift_terms,
        },
    )


def partial_sums(eff):
    """Cumulative sums over l of every effective-parameter contribution."""
    return {name: np.cumsum(values) for name, values in eff.terms.items()}


def last_increment_ratios(eff):
    """|contribution of the highest l| / |total| for each summed parameter."""
    ratios = {}
    for name, values in eff.terms.items():
        total = abs(values.sum())
        ratios[name] = 0.0 if total == 0 else float(abs(values[-1]) / total)
    return ratios


def dicke_parameters(eff):
    """Parameters of the collective (Dicke) basis g, s, a, e."""
    rabi1 = rabi2 = eff.rabi
    delta_plus = eff.detuning1 + eff.detuning2
    return DickeParams(
        omega_s=(rabi1 + rabi2) / math.sqrt(2.0),
        omega_a=(rabi1 - rabi2) / math.sqrt(2.0),
        delta_s=0.5 * delta_plus + eff.coupling,
        delta_a=0.5 * delta_plus - eff.coupling,
        delta_minus=eff.detuning1 - eff.detuning2,
        delta_plus=delta_plus,
        gamma_s=0.5 * (eff.gamma1 + eff.gamma2 + 2.0 * eff.cross_decay),
        gamma_a=0.5 * (eff.gamma1 + eff.gamma2 - 2.0 * eff.cross_decay),
    )


@dataclass
class DickeTrajectory:
    t: np.ndarray
    #: columns gg, ss, aa, ee
    populations: np.ndarray
    #: rho_as
    coherence: np.ndarray


def dicke_rate_evolution(dicke, populations, t_samples, coherence=0j, rel_tol=1e-10, abs_tol=1e-14):
    """Undriven population dynamics in the Dicke basis.

    The population equations are

        d rho_ss/dt = -gamma_s (rho_ss - rho_ee) - i Delta_- (rho_as - rho_sa) / 2
        d rho_aa/dt = -gamma_a (rho_aa - rho_ee) + i Delta_- (rho_as - rho_sa) / 2
        d rho_gg/dt = gamma_s rho_ss + gamma_a rho_aa
        d rho_ee/dt = -(gamma_s + gamma_a) rho_ee

    closed by the s-a coherence of the same Dicke Hamiltonian,

        d rho_as/dt = -(i (Delta_a - Delta_s) + (gamma_s + gamma_a)/2) rho_as
                      - i Delta_- (rho_ss - rho_aa) / 2.

    ``populations`` is ``(rho_gg, rho_ss, rho_aa, rho_ee)`` at ``t = 0``.
    """
    pops = np.asarray(populations, dtype=float)
    if pops.shape != (4,) or np.any(pops < 0) or pops.sum() > 1 + 1e-12:
        raise DomainError("populations must be four non-negative numbers summing to <= 1")
    gs, ga, dm = dicke.gamma_s, dicke.gamma_a, dicke.delta_minus
    split = dicke.delta_a - dicke.delta_s

    def rhs(_t, y):
        gg, ss, aa, ee, as_ = y
        transfer = 0.5j * dm * (as_ - np.conj(as_))
        return np.array(
            [
                gs * ss + ga * aa,
                -gs * (ss - ee) - transfer,
                -ga * (aa - ee) + transfer,
                -(gs + ga) * ee,
                -(1j * split + 0.5 * (gs + ga)) * as_ - 0.5j * dm * (ss - aa),
            ]
        )

    y0 = np.concatenate([pops.astype(complex), [complex(coherence)]])
    sol = integrate_adaptive(rhs, y0, t_samples, rel_tol=rel_tol, abs_tol=abs_tol, t0=0.0)
    return DickeTrajectory(t=sol.t, populations=sol.y[:, :4].real.copy(), coherence=sol.y[:, 4].copy())
