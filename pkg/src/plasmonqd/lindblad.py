"""Two-qubit master-equation dynamics after plasmon elimination.

Basis ordering is |1> = |gg>, |2> = |ge>, |3> = |eg>, |4> = |ee>, with the
first label belonging to qubit 1. Density matrices are vectorised column by
column, ``vec(rho)[i + 4 j] = rho[i, j]``, so that
``vec(A rho B) = (B^T kron A) vec(rho)``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, SingularMatrixError, StiffnessError
from .numerics import integrate_adaptive, solve_linear

log = logging.getLogger(__name__)

DIM = 4
ENGINES = ("propagator", "superoperator", "explicit")

_SM = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e| with |g> first
_I2 = np.eye(2, dtype=complex)
_I4 = np.eye(DIM, dtype=complex)

#: lowering operators of qubit 1 and qubit 2
SIGMA = (np.kron(_SM, _I2), np.kron(_I2, _SM))

TRACE_TOL = 1e-9
HERMITIAN_TOL = 1e-10
MIN_EIG_TOL = -1e-8
PURITY_TOL = 1e-9
RENORM_THRESHOLD = 1e-12


def vec(rho):
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v):
    return np.asarray(v, dtype=complex).reshape(DIM, DIM, order="F")


def basis_state(label):
    """Projector for ``"gg"``, ``"ge"``, ``"eg"``, ``"ee"`` or an index 1..4."""
    names = {"gg": 0, "ge": 1, "eg": 2, "ee": 3}
    idx = names[label] if isinstance(label, str) else int(label) - 1
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[idx, idx] = 1.0
    return rho


def dicke_states():
    """State vectors |g>, |s>, |a>, |e> in the computational basis."""
    r = 1.0 / np.sqrt(2.0)
    return {
        "g": np.array([1, 0, 0, 0], dtype=complex),
        "s": np.array([0, r, r, 0], dtype=complex),
        "a": np.array([0, r, -r, 0], dtype=complex),
        "e": np.array([0, 0, 0, 1], dtype=complex),
    }


def hamiltonian(eff):
    """Effective Hamiltonian divided by hbar (rad/s) in the rotating frame."""
    s1, s2 = SIGMA
    h = eff.detuning1 * (s1.conj().T @ s1) + eff.detuning2 * (s2.conj().T @ s2)
    for s in SIGMA:
        h = h - (eff.rabi * s.conj().T + np.conj(eff.rabi) * s)
    h = h - eff.coupling * (s1.conj().T @ s2 + s2.conj().T @ s1)
    return h


def decay_matrix(eff):
    return np.array([[eff.gamma1, eff.cross_decay], [eff.cross_decay, eff.gamma2]])


def build_superoperator(eff):
    """16 x 16 Liouvillian acting on column-stacked density matrices.

    Encodes ``d rho/dt = -i [H, rho] + sum_ij gamma_ij / 2 (2 s_j rho s_i^+ - {s_i^+ s_j, rho})``.
    """
    h = hamiltonian(eff)
    gam = decay_matrix(eff)
    lv = -1j * (np.kron(_I4, h) - np.kron(h.T, _I4))
    for i in range(2):
        si_dag = SIGMA[i].conj().T
        for j in range(2):
            if gam[i, j] == 0:
                continue
            sj = SIGMA[j]
            prod = si_dag @ sj
            lv += 0.5 * gam[i, j] * (
                2.0 * np.kron(si_dag.T, sj) - np.kron(_I4, prod) - np.kron(prod.T, _I4)
            )
    return lv


def trace_row():
    """Row vector t with ``t @ vec(rho) = tr(rho)``."""
    return vec(_I4)


def rhs_superoperator(eff, rho):
    return unvec(build_superoperator(eff) @ vec(rho))


def rhs_explicit(eff, rho):
    """Element-wise equations of motion, written out for the ten independent elements.

    ``rho_11`` is eliminated through ``rho_11 = 1 - (rho_22 + rho_33 + rho_44)``.
    The two qubits share ``gamma~ = (gamma~_1 + gamma~_2) / 2``.
    """
    rho = np.asarray(rho, dtype=complex)

    def r(i, j):
        return rho[i - 1, j - 1]

    om = eff.rabi
    omc = np.conj(om)
    gt = 0.5 * (eff.gamma1 + eff.gamma2)
    g12 = eff.cross_decay
    g = eff.coupling
    d1, d2 = eff.detuning1, eff.detuning2
    dp, dm = d1 + d2, d1 - d2
    r11 = 1.0 - (r(2, 2) + r(3, 3) + r(4, 4)).real
    cj = np.conj

    d44 = -2 * gt * r(4, 4) + 2 * np.imag(omc * (r(4, 3) + r(4, 2)))
    d33 = (
        -gt * (r(3, 3) - r(4, 4)) - g12 * np.real(r(2, 3)) + 2 * g * np.imag(r(2, 3))
        - 2 * np.imag(r(4, 3) * omc + r(1, 3) * om)
    )
    d22 = (
        -gt * (r(2, 2) - r(4, 4)) - g12 * np.real(r(2, 3)) - 2 * g * np.imag(r(2, 3))
        - 2 * np.imag(r(4, 2) * omc + r(1, 2) * om)
    )
    d11 = -gt * (r(3, 3) + r(2, 2)) + 2 * g12 * np.real(r(2, 3)) + 2 * np.imag(om * (r(1, 2) + r(1, 3)))
    d41 = -(1j * dp + gt) * r(4, 1) + 1j * om * (cj(r(1, 2)) + cj(r(1, 3)) - r(4, 3) - r(4, 2))
    d42 = (
        -(1j * d1 + 1.5 * gt) * r(4, 2) + 1j * om * (r(2, 2) - r(4, 4))
        + 1j * (r(2, 3) * om - r(4, 1) * omc) - (1j * g + 0.5 * gt) * r(4, 3)
    )
    d43 = (
        -(1j * d2 + 1.5 * gt) * r(4, 3) + 1j * om * (r(3, 3) - r(4, 4))
        + 1j * (cj(r(2, 3)) * om - r(4, 1) * omc) - (1j * g + 0.5 * gt) * r(4, 2)
    )
    d12 = (
        (1j * d1 - 0.5 * gt) * r(1, 2) - (1j * g + 0.5 * g12) * r(1, 3)
        + 1j * omc * (r(2, 2) - r11 + cj(r(2, 3))) - 1j * om * cj(r(4, 1))
        + g12 * cj(r(4, 3)) + gt * cj(r(4, 2))
    )
    d13 = (
        (1j * d2 - 0.5 * gt) * r(1, 3) - (1j * g + 0.5 * g12) * r(1, 2)
        + 1j * omc * (r(3, 3) - r11 + r(2, 3)) - 1j * om * cj(r(4, 1))
        + gt * cj(r(4, 3)) + g12 * cj(r(4, 2))
    )
    d23 = (
        -(1j * dm + gt) * r(2, 3) - (1j * g + 0.5 * gt) * r(3, 3) + g12 * r(4, 4)
        + (1j * g - 0.5 * gt) * r(2, 2) - 1j * om * (cj(r(4, 3)) - r(1, 2))
        + 1j * omc * (r(4, 2) - cj(r(1, 3)))
    )

    out = np.zeros((DIM, DIM), dtype=complex)
    for (i, j), value in {
        (1, 1): d11, (2, 2): d22, (3, 3): d33, (4, 4): d44,
        (4, 1): d41, (4, 2): d42, (4, 3): d43,
        (1, 2): d12, (1, 3): d13, (2, 3): d23,
    }.items():
        out[i - 1, j - 1] = value
        if i != j:
            out[j - 1, i - 1] = np.conj(value)
    return out


#: independent elements compared by the cross-check, as (row, column) labels
ELEMENTS = (
    (4, 4), (3, 3), (2, 2), (1, 1), (4, 1), (4, 2), (4, 3), (1, 2), (1, 3), (2, 3),
)

#: each family switches on a single effective parameter at unit strength
FAMILIES = {
    "rabi_re": dict(rabi=1.0 + 0j),
    "rabi_im": dict(rabi=1j),
    "coupling": dict(coupling=1.0),
    "cross_decay": dict(cross_decay=1.0),
    "gamma": dict(gamma1=1.0, gamma2=1.0),
    "detuning1": dict(detuning1=1.0),
    "detuning2": dict(detuning2=1.0),
}


def random_density_matrix(rng, rank=None):
    """Random full- or reduced-rank density matrix (Ginibre ensemble)."""
    k = DIM if rank is None else rank
    a = rng.normal(size=(DIM, k)) + 1j * rng.normal(size=(DIM, k))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@dataclass
class CrossCheckReport:
    #: largest element discrepancy at the actual parameters, over all samples
    max_discrepancy: float
    #: largest superoperator derivative magnitude, for scale
    reference_scale: float
    #: {family: [(row, col, discrepancy), ...]} for elements that disagree
    discrepancies: dict
    tolerance: float

    @property
    def passed(self):
        return not any(self.discrepancies.values())

    def flagged(self, family):
        return [(i, j) for i, j, _ in self.discrepancies.get(family, [])]

    def as_dict(self):
        return {
            "passed": self.passed,
            "max_discrepancy": self.max_discrepancy,
            "reference_scale": self.reference_scale,
            "tolerance": self.tolerance,
            "discrepancies": {
                fam: [{"element": f"rho_{i}{j}", "discrepancy": d} for i, j, d in items]
                for fam, items in self.discrepancies.items()
            },
        }


def _zero_params(eff):
    return eff.with_changes(
        rabi=0j, coupling=0.0, cross_decay=0.0, detuning1=0.0, detuning2=0.0, gamma1=0.0, gamma2=0.0
    )


def cross_check_rhs(eff, candidate=rhs_explicit, reference=rhs_superoperator, n_samples=100, seed=0, tol=1e-12):
    """Compare two right-hand sides element by element and parameter family by family.

    The full parameter set is compared on ``n_samples`` random density
    matrices. Each family in :data:`FAMILIES` is then switched on alone at
    unit strength, so that every discrepant (element, family) pair can be
    named individually.
    """
    rng = np.random.default_rng(seed)
    states = [random_density_matrix(rng) for _ in range(n_samples)]
    max_disc = 0.0
    scale = 0.0
    for rho in states:
        ref = reference(eff, rho)
        max_disc = max(max_disc, float(np.max(np.abs(candidate(eff, rho) - ref))))
        scale = max(scale, float(np.max(np.abs(ref))))

    base = _zero_params(eff)
    table = {}
    for fam, changes in FAMILIES.items():
        p = base.with_changes(**changes)
        worst = np.zeros((DIM, DIM))
        for rho in states[:10]:
            worst = np.maximum(worst, np.abs(candidate(p, rho) - reference(p, rho)))
        table[fam] = [(i, j, float(worst[i - 1, j - 1])) for i, j in ELEMENTS if worst[i - 1, j - 1] > tol]
    return CrossCheckReport(max_discrepancy=max_disc, reference_scale=scale, discrepancies=table, tolerance=tol)


def fault_injection_check(eff, **kwargs):
    """Cross-check the Liouvillian against itself with the sign of gamma~_12 flipped.

    A working cross-check must flag the coherence rho_23 in the
    ``cross_decay`` family.
    """

    def corrupted(p, rho):
        return rhs_superoperator(p.with_changes(cross_decay=-p.cross_decay), rho)

    return cross_check_rhs(eff, candidate=corrupted, **kwargs)


@dataclass
class EvolutionResult:
    t: np.ndarray
    rho: np.ndarray  # (T, 4, 4)
    steady: bool
    #: max |d rho / dt| at the final sample (rad/s)
    convergence: float
    engine: str
    max_trace_drift: float = 0.0
    min_eigenvalue: float = 0.0
    max_purity: float = 1.0
    max_hermiticity: float = 0.0
    renormalisations: int = 0
    violations: list = field(default_factory=list)

    @property
    def final(self):
        return self.rho[-1]


def default_time_grid(eff, n=400, t_min=1e-4, t_max=50.0, gamma_ref=None):
    """``n`` log-spaced samples over ``[t_min, t_max] / gamma_a``."""
    if gamma_ref is None:
        gamma_ref = 0.5 * (eff.gamma1 + eff.gamma2 - 2.0 * eff.cross_decay)
    if not gamma_ref > 0:
        raise ValueError(f"reference rate must be positive, got {gamma_ref}")
    return np.logspace(np.log10(t_min), np.log10(t_max), n) / gamma_ref


def _propagate(lv, v0, t_samples):
    out = np.empty((t_samples.size, v0.size), dtype=complex)
    t_prev = 0.0
    v = v0
    for k, t in enumerate(t_samples):
        dt = t - t_prev
        if dt > 0:
            v = scipy.linalg.expm(lv * dt) @ v
        out[k] = v
        t_prev = t
    return out


def evolve(eff, rho0, t_samples, engine="propagator", rel_tol=1e-10, abs_tol=1e-13, context=None, steady_tol=1e-8):
    """Evolve ``rho0`` from ``t = 0`` and report it at ``t_samples``.

    Engines
    -------
    ``"propagator"``
        Exact piecewise matrix exponential of the Liouvillian.
    ``"superoperator"``
        Adaptive Dormand-Prince on the vectorised Liouvillian.
    ``"explicit"``
        Adaptive Dormand-Prince on :func:`rhs_explicit`.

    Each reported state is Hermitised and, if its trace drifted by more than
    1e-12, renormalised (the drift is logged). The raw trajectory is not
    touched. Invariant violations are collected in ``violations``.
    """
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
    t_samples = np.asarray(t_samples, dtype=float)
    if t_samples.ndim != 1 or t_samples.size == 0 or t_samples[0] < 0 or np.any(np.diff(t_samples) <= 0):
        raise ValueError("t_samples must be non-negative and strictly increasing")
    rho0 = np.asarray(rho0, dtype=complex)
    _check_state(rho0, "initial state")

    lv = build_superoperator(eff)
    v0 = vec(rho0)
    try:
        if engine == "propagator":
            traj = _propagate(lv, v0, t_samples)
        elif engine == "superoperator":
            sol = integrate_adaptive(lambda _t, v: lv @ v, v0, t_samples, rel_tol, abs_tol, t0=0.0)
            traj = sol.y
        else:
            sol = integrate_adaptive(
                lambda _t, v: vec(rhs_explicit(eff, unvec(v))), v0, t_samples, rel_tol, abs_tol, t0=0.0
            )
            traj = sol.y
    except StiffnessError as exc:
        where = f" ({context})" if context else ""
        raise StiffnessError(f"{exc}{where}", t=exc.t, step=exc.step) from exc

    rhos = np.empty((t_samples.size, DIM, DIM), dtype=complex)
    result = EvolutionResult(t=t_samples, rho=rhos, steady=False, convergence=np.inf, engine=engine)
    result.min_eigenvalue = np.inf
    result.max_purity = 0.0
    for k, v in enumerate(traj):
        rho = unvec(v)
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        rho = 0.5 * (rho + rho.conj().T)
        drift = abs(np.trace(rho).real - 1.0)
        result.max_trace_drift = max(result.max_trace_drift, drift)
        result.max_hermiticity = max(result.max_hermiticity, herm)
        if drift > RENORM_THRESHOLD:
            log.debug("trace drift %.3e at t=%.6e s, renormalising", drift, t_samples[k])
            rho = rho / np.trace(rho).real
            result.renormalisations += 1
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        purity = float(np.trace(rho @ rho).real)
        result.min_eigenvalue = min(result.min_eigenvalue, min_eig)
        result.max_purity = max(result.max_purity, purity)
        if drift > TRACE_TOL:
            result.violations.append((float(t_samples[k]), "trace", drift))
        if herm > HERMITIAN_TOL:
            result.violations.append((float(t_samples[k]), "hermiticity", herm))
        if min_eig < MIN_EIG_TOL:
            result.violations.append((float(t_samples[k]), "positivity", min_eig))
        if purity > 1.0 + PURITY_TOL:
            result.violations.append((float(t_samples[k]), "purity", purity))
        rhos[k] = rho

    if result.violations:
        log.info("%d invariant violations along trajectory (engine %s)", len(result.violations), engine)
    result.convergence = float(np.max(np.abs(lv @ vec(rhos[-1]))))
    result.steady = result.convergence <= steady_tol * float(np.max(np.abs(lv)))
    return result


def _check_state(rho, what):
    if rho.shape != (DIM, DIM):
        raise ValueError(f"{what} must be 4x4, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise ValueError(f"{what} is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise ValueError(f"{what} does not have unit trace")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < MIN_EIG_TOL:
        raise ValueError(f"{what} is not positive semi-definite")


def steady_state(eff, degeneracy_tol=1e-10, residual_tol=1e-10):
    """Stationary state from the null space of the Liouvillian.

    The first row of ``L vec(rho) = 0`` is replaced by the trace condition.
    The Liouvillian is first scaled by its largest entry so that the pivot
    threshold of the elimination is meaningful.
    """
    lv = build_superoperator(eff)
    scale = float(np.max(np.abs(lv)))
    if scale == 0.0:
        raise SingularMatrixError("Liouvillian vanishes identically; stationary state undefined")
    a = lv / scale
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-2] < degeneracy_tol * sv[0]:
        raise SingularMatrixError(
            f"Liouvillian null space is degenerate (second-smallest singular value {sv[-2]:.3e} "
            f"relative to {sv[0]:.3e}); use time evolution instead"
        )
    a = a.copy()
    a[0, :] = trace_row()
    b = np.zeros(DIM * DIM, dtype=complex)
    b[0] = 1.0
    rho = unvec(solve_linear(a, b))
    rho = 0.5 * (rho + rho.conj().T)
    residual = float(np.max(np.abs(lv @ vec(rho))))
    if residual > residual_tol * scale:
        raise ConvergenceError(
            f"stationary residual {residual:.3e} exceeds {residual_tol:.1e} * {scale:.3e}", residual=residual
        )
    return rho
