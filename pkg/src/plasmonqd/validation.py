"""Self-checks of the model and numerics, reported as machine-readable entries.

Each entry has a ``status`` of ``"pass"``, ``"fail"`` or ``"info"``; the
report passes when no entry fails. ``info`` entries carry measured
quantities that document a modelling choice rather than test it.
"""

import math

import numpy as np

from .constants import E_CHARGE
from .effective import last_increment_ratios
from .lindblad import (
    basis_state,
    build_superoperator,
    cross_check_rhs,
    evolve,
    fault_injection_check,
    random_density_matrix,
    steady_state,
    trace_row,
)
from .material import (
    LOCAL,
    SystemGeometry,
    corrected_mode,
    dipole_moment,
    excitation_rate,
    local_coupling,
    local_damping,
    local_dipole_moment,
    local_mode_frequency,
    radiative_decay,
    resonance_frequency,
)
from .metrics import concurrence, qfi, variance
from .sweeps import build_system, subradiant_rate


def _entry(name, status, **data):
    return {"name": name, "status": status, **data}


def _check(name, ok, **data):
    return _entry(name, "pass" if ok else "fail", **data)


def rhs_cross_check(cfg):
    """Element equations against the Liouvillian, itemised by parameter family.

    The Liouvillian is the reference, so disagreement is reported (status
    ``info``) rather than counted as a failure. The fault-injection run
    checks that the comparison itself is able to detect a wrong sign.
    """
    eff = build_system(cfg, cfg.r, cfg.s, cfg.n_modes).eff
    report = cross_check_rhs(eff)
    entries = [_entry("rhs_cross_check", "pass" if report.passed else "info", **report.as_dict())]
    fault = fault_injection_check(eff)
    flagged = fault.flagged("cross_decay")
    entries.append(
        _check(
            "rhs_fault_injection",
            (2, 3) in flagged,
            flagged=[f"rho_{i}{j}" for i, j in flagged],
            expected="rho_23",
        )
    )
    return entries


def superoperator_checks(cfg):
    eff = build_system(cfg, cfg.r, cfg.s, cfg.n_modes).eff
    lv = build_superoperator(eff)
    scale = float(np.max(np.abs(lv)))
    trace_defect = float(np.max(np.abs(trace_row() @ lv)))
    eig = np.linalg.eigvals(lv)
    growth = float(np.max(eig.real))
    smallest = float(np.min(np.abs(eig)))
    return [
        _check("superoperator_trace_preserving", trace_defect <= 1e-12 * scale, measured=trace_defect / scale),
        _check("superoperator_no_growing_modes", growth <= 1e-12 * scale, measured=growth / scale),
        _check("superoperator_zero_eigenvalue", smallest <= 1e-10 * scale, measured=smallest / scale),
    ]


def convergence_checks(cfg, r=30e-9, s=5e-9):
    """N = 10 against N = 12, and the size of the last multipole increment."""
    systems = {n: build_system(cfg, r, s, n).eff for n in (10, 12)}
    c10, c12 = (concurrence(steady_state(systems[n])) for n in (10, 12))
    ratios = last_increment_ratios(systems[10])
    local_ratios = last_increment_ratios(build_system(cfg.replace(response=LOCAL), r, s, 10).eff)
    return [
        _check("multipole_convergence_N10_vs_N12", abs(c10 - c12) < 1e-3, c10=c10, c12=c12, difference=abs(c10 - c12)),
        _check("multipole_last_increment", max(ratios.values()) < 1e-3, ratios=ratios),
        _entry("multipole_last_increment_local_response", "info", ratios=local_ratios),
    ]


def local_limit_checks(cfg):
    """With Delta_l = 0 and r -> infinity the nonlocal branch reduces to the local one."""
    mat = cfg.material()
    mu = E_CHARGE * cfg.r0
    geom = SystemGeometry(cfg.r, cfg.r0, cfg.s)
    omega = resonance_frequency(mat, cfg.r)
    worst = 0.0
    exact = True
    for l in range(1, cfg.n_modes + 1):
        loc = corrected_mode(mat, geom, l, omega, mu, response=LOCAL)
        exact &= loc.omega == local_mode_frequency(mat, l)
        exact &= loc.gamma == local_damping(mat, l)
        exact &= loc.coupling == local_coupling(mat, geom, l, mu)
        forced = corrected_mode(mat, geom, l, omega, mu, delta_override=0.0, additive_shifts=False)
        exact &= (forced.omega, forced.gamma, forced.coupling) == (loc.omega, loc.gamma, loc.coupling)
    for r in (1e-6, 1e-5):
        big = SystemGeometry(r, cfg.r0, r)
        w = resonance_frequency(mat, r)
        for l in (1, 2, 3):
            nl = corrected_mode(mat, big, l, w, mu)
            lo = corrected_mode(mat, big, l, w, mu, response=LOCAL)
            worst = max(worst, abs(nl.omega / lo.omega - 1), abs(nl.coupling / lo.coupling - 1))
    shift_1um = abs(resonance_frequency(mat, 1e-6) / local_mode_frequency(mat, 1) - 1)
    return [
        _check("local_limit_exact", bool(exact)),
        _check("local_limit_large_radius", worst < 1e-2 and shift_1um < 1e-3, worst_relative=worst,
               lspr_shift_1um=shift_1um),
    ]


def dual_engine_checks(cfg):
    """Null-space stationary state against long-time evolution, and engine agreement."""
    eff = build_system(cfg, cfg.r, cfg.s, cfg.n_modes).eff
    rho_ss = steady_state(eff)
    gamma_a = subradiant_rate(eff)
    t_long = np.array([50.0 / gamma_a])
    rho0 = basis_state(cfg.initial_state)
    long_prop = evolve(eff, rho0, t_long, "propagator").final
    long_rk = evolve(eff, rho0, t_long, "superoperator", rel_tol=1e-11, abs_tol=1e-14).final
    t = np.logspace(-4, 0, 40) / gamma_a
    a = evolve(eff, rho0, t, "propagator").rho
    b = evolve(eff, rho0, t, "superoperator", rel_tol=1e-11, abs_tol=1e-14).rho
    c = evolve(eff, rho0, t, "explicit", rel_tol=1e-11, abs_tol=1e-14).rho
    d_prop = float(np.max(np.abs(long_prop - rho_ss)))
    d_rk = float(np.max(np.abs(long_rk - rho_ss)))
    d_engines = float(np.max(np.abs(a - b)))
    d_explicit = float(np.max(np.abs(a - c)))
    return [
        _check("steady_state_vs_propagator", d_prop < 1e-6, measured=d_prop),
        _check("steady_state_vs_runge_kutta", d_rk < 1e-6, measured=d_rk),
        _check("propagator_vs_runge_kutta", d_engines < 1e-7, measured=d_engines),
        _entry("liouvillian_vs_element_equations_trajectory", "pass" if d_explicit < 1e-7 else "info",
               measured=d_explicit),
        _entry("stationary_metrics", "info", concurrence=concurrence(rho_ss), qfi=qfi(rho_ss)),
    ]


def metric_oracles():
    r = 1 / math.sqrt(2)
    bell = np.outer([0, r, r, 0], [0, r, r, 0]).astype(complex)
    phi = np.array([r, 0, 0, r], dtype=complex)
    phi_plus = np.outer(phi, phi.conj())
    worst_c = abs(concurrence(bell) - 1) + abs(concurrence(basis_state("gg")))
    for p in np.linspace(0, 1, 11):
        werner = p * phi_plus + (1 - p) * np.eye(4) / 4
        worst_c = max(worst_c, abs(concurrence(werner) - max(0.0, (3 * p - 1) / 2)))
    rng = np.random.default_rng(7)
    worst_q = 0.0
    for _ in range(20):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        worst_q = max(worst_q, abs(qfi(np.outer(psi, psi.conj())) - 4 * variance(psi)))
    mixed = qfi(np.eye(4) / 4)
    return [
        _check("concurrence_closed_forms", worst_c < 1e-8, measured=worst_c),
        _check("qfi_pure_state_variance", worst_q < 1e-8, measured=worst_q),
        _check("qfi_maximally_mixed", abs(mixed) < 1e-10, measured=mixed),
    ]


def random_evolution_checks(cfg, n=10, seed=3):
    """State validity along randomly parameterised evolutions."""
    rng = np.random.default_rng(seed)
    base = build_system(cfg, cfg.r, cfg.s, cfg.n_modes).eff
    worst = {"trace": 0.0, "min_eig": 0.0, "purity": 0.0}
    for _ in range(n):
        gam = base.gamma * 10 ** rng.uniform(0, 3)
        g12 = gam * rng.uniform(-0.99, 0.99)
        eff = base.with_changes(
            rabi=gam * rng.uniform(0.01, 3) * np.exp(1j * rng.uniform(0, 2 * np.pi)),
            coupling=gam * rng.normal(),
            cross_decay=g12,
            detuning1=gam * rng.normal(),
            detuning2=gam * rng.normal(),
            gamma1=gam,
            gamma2=gam,
        )
        res = evolve(eff, random_density_matrix(rng), np.logspace(-2, 1.5, 30) / gam)
        worst["trace"] = max(worst["trace"], res.max_trace_drift)
        worst["min_eig"] = min(worst["min_eig"], res.min_eigenvalue)
        worst["purity"] = max(worst["purity"], res.max_purity - 1)
    ok = worst["trace"] < 1e-9 and worst["min_eig"] > -1e-8 and worst["purity"] <= 1e-9
    return [_check("random_evolution_state_validity", ok, **worst)]


def sensitivity_info(cfg):
    """Quantities documenting modelling choices around the drive strength and damping."""
    mat = cfg.material()
    r = cfg.r
    omega = resonance_frequency(mat, r, cfg.response)
    system = build_system(cfg, r, cfg.s, 1)
    gamma1 = system.modes[0].gamma
    chi = dipole_moment(mat, r, omega, cfg.response).chi
    chi_sqrt = chi / mat.eps_b * math.sqrt(mat.eps_b)
    gamma_r = radiative_decay(local_dipole_moment(mat, r), omega, mat.eps_b)
    return [
        _entry(
            "excitation_ratio",
            "info",
            rabi_over_gamma1=system.rabi / gamma1,
            rabi_over_gamma1_sqrt_eps_b_prefactor=excitation_rate(cfg.intensity, chi_sqrt, mat.eps_b) / gamma1,
        ),
        _entry("radiative_over_nonradiative", "info", ratio=gamma_r / system.modes[0].gamma_nr),
    ]


def run_validation(cfg):
    """Run every check and return ``{"passed": bool, "entries": [...]}``."""
    entries = []
    for group in (
        lambda: rhs_cross_check(cfg),
        lambda: superoperator_checks(cfg),
        lambda: convergence_checks(cfg),
        lambda: local_limit_checks(cfg),
        lambda: dual_engine_checks(cfg),
        metric_oracles,
        lambda: random_evolution_checks(cfg),
        lambda: sensitivity_info(cfg),
    ):
        entries.extend(group())
    return {"passed": all(e["status"] != "fail" for e in entries), "entries": entries}
