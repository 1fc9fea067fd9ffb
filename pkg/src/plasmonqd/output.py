"""CSV, metadata and gnuplot output for sweep grids."""

import json
import math
from pathlib import Path

from .errors import PlasmonQDError


class OutputError(PlasmonQDError, OSError):
    pass


def fmt(x):
    """17 significant digits: enough to round-trip any double."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def csv_header(grid):
    cols = ["analysis", "N", grid.axis, "t_s"]
    if grid.concurrence is not None:
        cols.append("concurrence")
    if grid.qfi is not None:
        cols.append("qfi")
    cols.append("stationary")
    return ",".join(cols)


def csv_rows(grid):
    """Rows in analysis-major, then position, then time order.

    Each position block ends with its stationary row (``t_s = inf``,
    ``stationary = 1``).
    """
    for a, (label, n) in enumerate(grid.analyses):
        for p, x in enumerate(grid.positions):
            for k, t in enumerate(grid.times):
                vals = [label, str(n), fmt(x), fmt(t)]
                if grid.concurrence is not None:
                    vals.append(fmt(grid.concurrence[a, p, k]))
                if grid.qfi is not None:
                    vals.append(fmt(grid.qfi[a, p, k]))
                vals.append("0")
                yield ",".join(vals)
            vals = [label, str(n), fmt(x), "inf"]
            if grid.concurrence is not None:
                vals.append(fmt(grid.stationary_concurrence[a, p]))
            if grid.qfi is not None:
                vals.append(fmt(grid.stationary_qfi[a, p]))
            vals.append("1")
            yield ",".join(vals)


def _write(path, text):
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def metadata_path(path):
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def emit_csv(grid, path):
    """Write ``grid`` as CSV plus a ``<path>.meta.json`` with the resolved configuration."""
    lines = [csv_header(grid)]
    lines.extend(csv_rows(grid))
    out = _write(path, "\n".join(lines) + "\n")
    meta = dict(grid.metadata)
    meta["axes"] = {
        "analysis": [{"label": label, "N": n} for label, n in grid.analyses],
        grid.axis: [float(x) for x in grid.positions],
        "t_s": [float(t) for t in grid.times],
    }
    meta["effective_parameters"] = grid.effective
    _write(metadata_path(path), json.dumps(meta, indent=2, sort_keys=True, allow_nan=True) + "\n")
    return out


def emit_plot_files(grid, stem):
    """Write gnuplot heat-map data and a matching ``.gp`` script.

    Produces ``<stem>.dat`` (one block per analysis, positions in nm, time
    in ns), ``<stem>_stationary.dat`` and ``<stem>.gp``. For the QFI the
    script draws the F_Q = 2 contour (standard quantum limit).
    """
    stem = Path(stem)
    use_qfi = grid.qfi is not None
    values = grid.qfi if use_qfi else grid.concurrence
    stat = grid.stationary_qfi if use_qfi else grid.stationary_concurrence
    label = "F_Q" if use_qfi else "C"
    axis_label = "s (nm)" if grid.axis == "s_m" else "r = s (nm)"

    blocks = []
    for a, (name, n) in enumerate(grid.analyses):
        lines = [f"# {name} N={n}: {grid.axis[0]}_nm t_ns {label}"]
        for p, x in enumerate(grid.positions):
            for k, t in enumerate(grid.times):
                lines.append(f"{fmt(x * 1e9)} {fmt(t * 1e9)} {fmt(values[a, p, k])}")
            lines.append("")
        blocks.append("\n".join(lines))
    dat = stem.with_name(stem.name + ".dat")
    _write(dat, "\n\n".join(blocks) + "\n")

    stat_lines = [f"# {grid.axis[0]}_nm " + " ".join(f"{name}_N{n}" for name, n in grid.analyses)]
    for p, x in enumerate(grid.positions):
        stat_lines.append(" ".join([fmt(x * 1e9)] + [fmt(stat[a, p]) for a in range(len(grid.analyses))]))
    stat_dat = stem.with_name(stem.name + "_stationary.dat")
    _write(stat_dat, "\n".join(stat_lines) + "\n")

    script = [
        "set terminal pngcairo size 900,700",
        "set logscale y",
        f"set xlabel '{axis_label}'",
        "set ylabel 't (ns)'",
        f"set cblabel '{label}'",
        "set view map",
        "set pm3d map interpolate 0,0",
    ]
    if use_qfi:
        script += [
            "set contour base",
            "set cntrparam levels discrete 2",
            "set cntrlabel onecolor",
        ]
    for a, (name, n) in enumerate(grid.analyses):
        script += [
            f"set output '{stem.name}_{name}.png'",
            f"set title '{label} ({name}, N={n})'",
            f"splot '{dat.name}' index {a} using 1:2:3 with pm3d notitle"
            + (", '' index {0} using 1:2:3 with lines lc rgb 'white' title 'F_Q = 2'".format(a) if use_qfi else ""),
        ]
    script += [
        "unset logscale y",
        "unset view",
        "unset pm3d",
        "unset contour",
        "set terminal pngcairo size 800,500",
        f"set output '{stem.name}_stationary.png'",
        f"set ylabel '{label} (t -> inf)'",
        "set title 'stationary'",
        "plot " + ", ".join(
            f"'{stat_dat.name}' using 1:{a + 2} with linespoints title '{name}'"
            for a, (name, _) in enumerate(grid.analyses)
        )
        + (", 2 with lines dt 2 title 'SQL'" if use_qfi else ""),
    ]
    gp = stem.with_name(stem.name + ".gp")
    _write(gp, "\n".join(script) + "\n")
    return dat, stat_dat, gp
