"""Command-line interface.

Subcommands: ``params``, ``evolve``, ``sweep-distance``, ``sweep-size``,
``qfi-map`` and ``validate``. Every config key is also a flag
(``--r "20 nm"``, ``--N 1``); flags override ``--config``.

Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical
failure.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import KEYS, WORKERS_ENV, parse_config
from .constants import rad_s_to_ev, wavelength_nm
from .effective import dicke_parameters, partial_sums
from .errors import ConfigError, NumericalError
from .lindblad import basis_state, default_time_grid, evolve, steady_state
from .material import LOCAL, NONLOCAL, resonance_frequency
from .metrics import concurrence, qfi
from .output import OutputError, emit_csv, emit_plot_files, fmt
from .sweeps import build_system, run_distance_sweep, run_qfi_map, run_size_sweep
from .validation import run_validation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("plasmonqd")

SUBCOMMANDS = ("params", "evolve", "sweep-distance", "sweep-size", "qfi-map", "validate")
DEFAULT_OUTPUT = {
    "evolve": "evolution.csv",
    "sweep-distance": "distance_sweep.csv",
    "sweep-size": "size_sweep.csv",
    "qfi-map": "qfi_map.csv",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plasmonqd",
        description="Plasmon-mediated entanglement of two quantum dots near a metal nanosphere.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="configuration file")
        p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
        group = p.add_argument_group("configuration overrides (value with unit, e.g. '20 nm')")
        for key, (section, _, _) in KEYS.items():
            group.add_argument(f"--{key}", dest=f"key_{key}", metavar="VALUE", help=f"[{section}] {key}")
        if name != "params":
            p.add_argument("--no-plot", action="store_true", help="skip the gnuplot data and script")
    return parser


def load_config(args):
    text = ""
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror or exc}") from exc
    overrides = {key: getattr(args, f"key_{key}") for key in KEYS if getattr(args, f"key_{key}") is not None}
    if "workers" not in overrides and os.environ.get(WORKERS_ENV):
        overrides["workers"] = os.environ[WORKERS_ENV]
    if args.config is None and "preset" not in overrides:
        overrides.setdefault("preset", "silver-drude")
    return parse_config(text, overrides)


def _params(cfg, out):
    mat = cfg.material()
    n = cfg.n_modes if cfg.analysis != "dipole" else 1
    system = build_system(cfg, cfg.r, cfg.s, n, mat)
    eff = system.eff
    dicke = dicke_parameters(eff)
    report = {
        "lspr_wavelength_nm": {
            LOCAL: wavelength_nm(resonance_frequency(mat, cfg.r, LOCAL)),
            NONLOCAL: wavelength_nm(resonance_frequency(mat, cfg.r, NONLOCAL)),
        },
        "omega_drive_rad_s": system.omega_drive,
        "omega_drive_eV": rad_s_to_ev(system.omega_drive),
        "rabi_rad_s": system.rabi,
        "rabi_over_gamma1": system.rabi / system.modes[0].gamma,
        "modes": [
            {
                "l": m.l,
                "omega_rad_s": m.omega,
                "gamma_rad_s": m.gamma,
                "gamma_r_rad_s": m.gamma_r,
                "coupling_rad_s": m.coupling,
                "re_1_plus_delta": m.nonlocal_factor,
            }
            for m in system.modes
        ],
        "effective": eff.summary(),
        "partial_sums": {k: [float(np.real(x)) for x in v] for k, v in partial_sums(eff).items()},
        "dicke": {
            "gamma_s": dicke.gamma_s,
            "gamma_a": dicke.gamma_a,
            "delta_s": dicke.delta_s,
            "delta_a": dicke.delta_a,
            "delta_minus": dicke.delta_minus,
        },
    }
    rho = steady_state(eff)
    report["stationary"] = {"concurrence": concurrence(rho), "qfi": qfi(rho)}
    json.dump(report, out, indent=2)
    out.write("\n")
    return EXIT_OK


def _evolve(cfg, args, out):
    n = cfg.n_modes if cfg.analysis != "dipole" else 1
    eff = build_system(cfg, cfg.r, cfg.s, n).eff
    if cfg.t_absolute:
        times = np.logspace(np.log10(cfg.t_min), np.log10(cfg.t_max), cfg.t_points)
    else:
        times = default_time_grid(eff, cfg.t_points, cfg.t_min, cfg.t_max)
    res = evolve(eff, basis_state(cfg.initial_state), times, cfg.engine, cfg.rel_tol, cfg.abs_tol)
    path = Path(cfg.output or DEFAULT_OUTPUT["evolve"])
    lines = ["t_s,concurrence,qfi,rho_gg,rho_ge,rho_eg,rho_ee"]
    for t, rho in zip(res.t, res.rho):
        pops = [fmt(rho[k, k].real) for k in range(4)]
        lines.append(",".join([fmt(t), fmt(concurrence(rho)), fmt(qfi(rho))] + pops))
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    summary = {
        "output": str(path),
        "steady": res.steady,
        "convergence_rad_s": res.convergence,
        "final_concurrence": concurrence(res.final),
        "max_trace_drift": res.max_trace_drift,
        "violations": len(res.violations),
    }
    json.dump(summary, out, indent=2)
    out.write("\n")
    return EXIT_OK


def _sweep(cfg, args, out):
    runner = {"sweep-distance": run_distance_sweep, "sweep-size": run_size_sweep, "qfi-map": run_qfi_map}
    grid = runner[args.command](cfg)
    path = Path(cfg.output or DEFAULT_OUTPUT[args.command])
    emit_csv(grid, path)
    written = [str(path)]
    if not args.no_plot:
        written += [str(p) for p in emit_plot_files(grid, path.with_suffix(""))]
    metric = "qfi" if grid.qfi is not None else "concurrence"
    summary = {"written": written, "stationary_" + metric: {}}
    for label, _ in grid.analyses:
        values = grid.stationary(label, metric)
        summary["stationary_" + metric][label] = {
            fmt(x * 1e9) + " nm": float(v) for x, v in zip(grid.positions, values)
        }
    json.dump(summary, out, indent=2)
    out.write("\n")
    return EXIT_OK


def _validate(cfg, args, out):
    report = run_validation(cfg)
    text = json.dumps(report, indent=2, default=float)
    if cfg.output:
        Path(cfg.output).write_text(text + "\n", encoding="utf-8")
    out.write(text + "\n")
    for entry in report["entries"]:
        log.info("%-48s %s", entry["name"], entry["status"].upper())
    return EXIT_OK if report["passed"] else EXIT_VALIDATION


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "params":
            return _params(cfg, out)
        if args.command == "evolve":
            return _evolve(cfg, args, out)
        if args.command == "validate":
            return _validate(cfg, args, out)
        return _sweep(cfg, args, out)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OutputError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
