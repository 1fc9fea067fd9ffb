"""Distance sweeps, size sweeps and QFI maps over a grid of geometries."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .constants import E_CHARGE
from .effective import effective_parameters, symmetric_qubits
from .lindblad import basis_state, default_time_grid, evolve, steady_state
from .material import SystemGeometry, dipole_moment, excitation_rate, plasmon_modes, resonance_frequency
from .metrics import concurrence, qfi

DISTANCE = "distance"
SIZE = "size"
QFI_MAP = "qfi"


@dataclass
class System:
    """Everything needed to evolve one grid cell."""

    eff: object
    modes: list
    rabi: float
    omega_drive: float
    omega_pl: float


def build_system(cfg, r, s, n_modes, material=None):
    """Effective parameters of the QD-MNP-QD system at radius ``r`` and gap ``s``."""
    mat = material or cfg.material()
    geom = SystemGeometry(r=r, r0=cfg.r0, s=s)
    omega_pl = resonance_frequency(mat, r, cfg.response)
    omega_drive = omega_pl if cfg.frequency is None else cfg.frequency
    mu = E_CHARGE * cfg.r0
    modes = plasmon_modes(
        mat, geom, n_modes, omega_drive, mu, cfg.response,
        radiative_damping=cfg.radiative_damping, negative_policy=cfg.negative_correction,
    )
    chi = dipole_moment(mat, r, omega_drive, cfg.response).chi
    rabi = excitation_rate(cfg.intensity, chi, mat.eps_b)
    qubits = symmetric_qubits(omega_pl, mu, cfg.gamma, cfg.delta)
    eff = effective_parameters(modes, qubits, rabi, omega_drive, cfg.cross_parity)
    return System(eff=eff, modes=modes, rabi=rabi, omega_drive=omega_drive, omega_pl=omega_pl)


def time_axis(cfg, gamma_ref):
    if cfg.t_absolute:
        return np.logspace(np.log10(cfg.t_min), np.log10(cfg.t_max), cfg.t_points)
    return default_time_grid(None, n=cfg.t_points, t_min=cfg.t_min, t_max=cfg.t_max, gamma_ref=gamma_ref)


def subradiant_rate(eff):
    return 0.5 * (eff.gamma1 + eff.gamma2 - 2.0 * eff.cross_decay)


@dataclass
class SweepGrid:
    """Results over analysis x position x time.

    ``concurrence`` and ``qfi`` have shape (analyses, positions, times);
    the ``stationary_*`` arrays have shape (analyses, positions). ``qfi``
    and ``stationary_qfi`` are None when the QFI was not computed.
    """

    kind: str
    axis: str
    positions: np.ndarray
    times: np.ndarray
    analyses: list
    concurrence: np.ndarray
    stationary_concurrence: np.ndarray
    qfi: np.ndarray = None
    stationary_qfi: np.ndarray = None
    effective: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def shape(self):
        return (len(self.analyses), len(self.positions), len(self.times))

    def analysis_index(self, label):
        return [name for name, _ in self.analyses].index(label)

    def stationary(self, label, metric="concurrence"):
        arr = self.stationary_concurrence if metric == "concurrence" else self.stationary_qfi
        return arr[self.analysis_index(label)]


def _cell(args):
    cfg, r, s, n_modes, times, want_c, want_q = args
    system = build_system(cfg, r, s, n_modes)
    eff = system.eff
    rho_ss = steady_state(eff)
    context = f"r={r * 1e9:.4g} nm, s={s * 1e9:.4g} nm, N={n_modes}"
    result = evolve(
        eff, basis_state(cfg.initial_state), times, cfg.engine, cfg.rel_tol, cfg.abs_tol, context=context
    )
    c_t = np.array([concurrence(rho) for rho in result.rho]) if want_c else None
    q_t = np.array([qfi(rho) for rho in result.rho]) if want_q else None
    return (
        c_t,
        q_t,
        concurrence(rho_ss) if want_c else None,
        qfi(rho_ss) if want_q else None,
        eff.summary(),
    )


def _map(func, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [func(job) for job in jobs]
    # map() returns results in submission order, so the merge is deterministic
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def resolve_workers(cfg, workers=None):
    """Worker count: an explicit argument wins over ``cfg.workers``."""
    return max(1, int(cfg.workers if workers is None else workers))


def _run(cfg, kind, positions, geometry_of, want_c, want_q, workers=None):
    positions = np.asarray(positions, dtype=float)
    analyses = cfg.analyses
    mat = cfg.material()
    cells = [(label, n, geometry_of(x)) for label, n in analyses for x in positions]

    # one shared time axis, scaled by the slowest subradiant rate of the sweep
    if cfg.t_absolute:
        times = time_axis(cfg, None)
    else:
        rates = [subradiant_rate(build_system(cfg, r, s, n, mat).eff) for _, n, (r, s) in cells]
        times = time_axis(cfg, min(rates, default=cfg.gamma))

    jobs = [(cfg, r, s, n, times, want_c, want_q) for _, n, (r, s) in cells]
    out = _map(_cell, jobs, resolve_workers(cfg, workers))

    shape = (len(analyses), positions.size)
    c = np.full(shape + (times.size,), np.nan) if want_c else None
    q = np.full(shape + (times.size,), np.nan) if want_q else None
    c_ss = np.full(shape, np.nan) if want_c else None
    q_ss = np.full(shape, np.nan) if want_q else None
    effective = [[None] * positions.size for _ in analyses]
    for k, (c_t, q_t, c_s, q_s, summary) in enumerate(out):
        a, p = divmod(k, positions.size)
        if want_c:
            c[a, p] = c_t
            c_ss[a, p] = c_s
        if want_q:
            q[a, p] = q_t
            q_ss[a, p] = q_s
        effective[a][p] = summary

    return SweepGrid(
        kind=kind,
        axis="s_m" if kind == DISTANCE else "r_m",
        positions=positions,
        times=times,
        analyses=analyses,
        concurrence=c,
        stationary_concurrence=c_ss,
        qfi=q,
        stationary_qfi=q_ss,
        effective=effective,
        metadata={"config": cfg.as_dict(), "config_sha256": cfg.digest(), "version": __version__, "kind": kind},
    )


def distance_axis(cfg):
    return np.linspace(cfg.s_min, cfg.s_max, cfg.s_points)


def size_axis(cfg):
    return np.linspace(cfg.r_min, cfg.r_max, cfg.r_points)


def run_distance_sweep(cfg, positions=None, workers=None):
    """Concurrence versus the surface gap ``s`` at fixed radius ``cfg.r``."""
    positions = distance_axis(cfg) if positions is None else positions
    return _run(cfg, DISTANCE, positions, lambda s: (cfg.r, s), True, False, workers)


def run_size_sweep(cfg, positions=None, workers=None):
    """Concurrence versus the radius with the gap tied to it, ``s = r``."""
    positions = size_axis(cfg) if positions is None else positions
    return _run(cfg, SIZE, positions, lambda r: (r, r), True, False, workers)


def run_qfi_map(cfg, positions=None, workers=None):
    """QFI of the relative-phase generator versus ``r = s``."""
    positions = size_axis(cfg) if positions is None else positions
    return _run(cfg, QFI_MAP, positions, lambda r: (r, r), False, True, workers)


def stationary_only(cfg, kind, positions):
    """Stationary metrics without transients, {label: (C array, F_Q array)}."""
    mat = cfg.material()
    out = {}
    for label, n in cfg.analyses:
        cs, qs = [], []
        for x in positions:
            r, s = (cfg.r, x) if kind == DISTANCE else (x, x)
            rho = steady_state(build_system(cfg, r, s, n, mat).eff)
            cs.append(concurrence(rho))
            qs.append(qfi(rho))
        out[label] = (np.array(cs), np.array(qs))
    return out
