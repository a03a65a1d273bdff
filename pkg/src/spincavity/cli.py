"""Command-line front end: config-driven sweeps exported as CSV + metadata.

One subcommand per figure family: spectrum, power-sweep, saturation, dressed,
window.  Outputs are deterministic: fixed row ordering, 17-significant-digit
scientific floats, worker count never affects bytes.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import spectra as sx
from .config import ConfigError, RunConfig, parse_config
from .params import Topology

CSV_COLUMNS = [
    "omega_detuning",
    "power_norm",
    "method",
    "cavity",
    "re_r",
    "im_r",
    "abs_r",
    "phase_r",
    "re_t",
    "im_t",
    "abs_t",
    "phase_t",
    "sigma_z",
    "n_cavity",
    "branch_id",
    "cutoff",
    "residual",
    "error",
]

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_SOLVER_ERROR = 2


def _with_ext(prefix: Path, ext: str) -> Path:
    return prefix.parent / (prefix.name + ext)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.16e}"


def _row_record(row: sx.SpectrumRow) -> dict:
    rec = {col: "" for col in CSV_COLUMNS}
    rec["omega_detuning"] = _fmt(row.omega_detuning)
    rec["power_norm"] = _fmt(row.power_norm)
    rec["method"] = row.method
    rec["cavity"] = row.cavity
    if row.r is not None:
        rec["re_r"] = _fmt(row.r.real)
        rec["im_r"] = _fmt(row.r.imag)
        rec["abs_r"] = _fmt(abs(row.r))
        rec["phase_r"] = _fmt(cmath.phase(row.r))
    if row.t is not None:
        rec["re_t"] = _fmt(row.t.real)
        rec["im_t"] = _fmt(row.t.imag)
        rec["abs_t"] = _fmt(abs(row.t))
        rec["phase_t"] = _fmt(cmath.phase(row.t))
    rec["sigma_z"] = _fmt(row.sigma_z)
    rec["n_cavity"] = _fmt(row.n_cavity)
    rec["branch_id"] = _fmt(row.branch_id)
    rec["cutoff"] = _fmt(row.cutoff)
    rec["residual"] = _fmt(row.residual)
    rec["error"] = row.error or ""
    return rec


def _write_table(path: Path, table: sx.SpectrumTable):
    rows = sorted(
        table.rows,
        key=lambda r: (r.method, r.cavity, r.power_norm, r.omega_detuning),
    )
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(_row_record(row))


def _write_meta(path: Path, config: RunConfig, extra: dict):
    params = config.params
    entries = {
        "version": __version__,
        "topology": params.topology.value,
        "omega_c": _fmt(params.omega_c),
        "omega_x": _fmt(params.omega_x),
        "g": _fmt(params.g),
        "kappa": _fmt(params.kappa),
        "kappa_s": _fmt(params.kappa_s),
        "gamma_par": _fmt(params.gamma_par),
        "gamma_star": _fmt(params.gamma_star),
        "gamma": _fmt(params.gamma),
        "kappa_tot": _fmt(params.kappa_tot),
        "powers": ",".join(_fmt(p) for p in config.powers),
        "omega_min": _fmt(config.omega_min),
        "omega_max": _fmt(config.omega_max),
        "omega_points": str(config.omega_points),
        "methods": ",".join(config.methods),
        "cavities": ",".join(config.cavities),
        "cutoff_cap": str(config.cutoff_cap),
        "workers": str(config.workers),
        "strict": "1" if config.strict else "0",
        "window_threshold": _fmt(config.window_threshold),
    }
    entries.update(extra)
    with path.open("w") as fh:
        for key in sorted(entries):
            fh.write(f"{key}={entries[key]}\n")


def _error_count(table: sx.SpectrumTable) -> int:
    return sum(1 for row in table.rows if row.error is not None)


def cmd_spectrum(config: RunConfig, out_prefix: Path) -> int:
    table = sx.sweep_spectrum(
        config.params,
        config.powers,
        config.omega_grid(),
        methods=config.methods,
        cavities=config.cavities,
        cutoff_cap=config.cutoff_cap,
        workers=config.workers,
    )
    _write_table(_with_ext(out_prefix, ".csv"), table)
    errors = _error_count(table)
    _write_meta(
        _with_ext(out_prefix, ".meta"),
        config,
        {"subcommand": "spectrum", "rows": str(len(table)), "point_errors": str(errors)},
    )
    return EXIT_SOLVER_ERROR if config.strict and errors else EXIT_OK


def cmd_saturation(config: RunConfig, out_prefix: Path) -> int:
    table = sx.saturation_spectrum(
        config.params,
        config.powers,
        config.omega_grid(),
        methods=config.methods,
        cutoff_cap=config.cutoff_cap,
        workers=config.workers,
    )
    _write_table(_with_ext(out_prefix, ".csv"), table)
    errors = _error_count(table)
    _write_meta(
        _with_ext(out_prefix, ".meta"),
        config,
        {"subcommand": "saturation", "rows": str(len(table)), "point_errors": str(errors)},
    )
    return EXIT_SOLVER_ERROR if config.strict and errors else EXIT_OK


def _fixed_detuning(config: RunConfig) -> float:
    if config.omega_fixed is not None:
        return config.omega_fixed
    if config.params.topology is Topology.DOUBLE_SIDED:
        return 0.0
    # single-sided default: the pi/2 phase-shift frequency at the lowest power
    return sx.phase_shift_detuning(config.params, min(p for p in config.powers if p > 0))


def cmd_power_sweep(config: RunConfig, out_prefix: Path) -> int:
    delta = _fixed_detuning(config)
    table = sx.power_sweep(
        config.params,
        delta,
        config.powers,
        methods=config.methods,
        cavities=config.cavities,
        cutoff_cap=config.cutoff_cap,
    )
    _write_table(_with_ext(out_prefix, ".csv"), table)
    errors = _error_count(table)
    _write_meta(
        _with_ext(out_prefix, ".meta"),
        config,
        {
            "subcommand": "power-sweep",
            "omega_fixed": _fmt(delta),
            "rows": str(len(table)),
            "point_errors": str(errors),
        },
    )
    return EXIT_SOLVER_ERROR if config.strict and errors else EXIT_OK


def cmd_dressed(config: RunConfig, out_prefix: Path) -> int:
    levels = sx.dressed_eigenvalues(config.params, config.nmax)
    columns = [
        "order",
        "sign",
        "re_closed_form",
        "im_closed_form",
        "re_diagonalized",
        "im_diagonalized",
        "probe_resonance",
        "weak_coupling",
    ]
    with _with_ext(out_prefix, ".csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for lv_ in levels:
            writer.writerow(
                [
                    str(lv_.order),
                    "+" if lv_.sign > 0 else "-",
                    _fmt(lv_.eigenvalue.real),
                    _fmt(lv_.eigenvalue.imag),
                    _fmt(lv_.eigenvalue_diag.real),
                    _fmt(lv_.eigenvalue_diag.imag),
                    _fmt(lv_.probe_resonance),
                    "1" if lv_.weak_coupling else "0",
                ]
            )
    _write_meta(
        _with_ext(out_prefix, ".meta"),
        config,
        {"subcommand": "dressed", "nmax": str(config.nmax), "rows": str(2 * config.nmax)},
    )
    return EXIT_OK


def cmd_window(config: RunConfig, out_prefix: Path) -> int:
    grid = config.omega_grid()
    table = sx.saturation_spectrum(
        config.params,
        config.powers,
        grid,
        methods=config.methods,
        cutoff_cap=config.cutoff_cap,
        workers=config.workers,
    )
    errors = _error_count(table)
    with _with_ext(out_prefix, ".csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["power_norm", "method", "delta_low", "delta_high", "closed"])
        for method in config.methods:
            for power in config.powers:
                sub = table.select(method=method, power_norm=power, cavity=sx.CAVITY_HOT)
                good = [(r.omega_detuning, r.sigma_z) for r in sub.rows if r.sigma_z is not None]
                if not good:
                    writer.writerow([_fmt(power), method, "", "", "1"])
                    continue
                deltas, sigmas = zip(*good)
                window = sx.nonsaturation_window(deltas, sigmas, config.window_threshold)
                if window is None:
                    writer.writerow([_fmt(power), method, "", "", "1"])
                else:
                    writer.writerow([_fmt(power), method, _fmt(window[0]), _fmt(window[1]), "0"])
    _write_meta(
        _with_ext(out_prefix, ".meta"),
        config,
        {"subcommand": "window", "point_errors": str(errors)},
    )
    return EXIT_SOLVER_ERROR if config.strict and errors else EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "power-sweep": cmd_power_sweep,
    "saturation": cmd_saturation,
    "dressed": cmd_dressed,
    "window": cmd_window,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincavity",
        description="Spin-cavity reflection/transmission spectra engine",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} sweep")
        p.add_argument("--config", type=Path, help="TOML config file")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override a config key (repeatable); flags win over the file",
        )
        p.add_argument("--output-prefix", help="output path prefix (overrides run.output_prefix)")
        p.add_argument("--workers", type=int, help="worker processes for independent points")
        p.add_argument("--strict", action="store_true", help="exit 2 on any point failure")
        p.add_argument("--nmax", type=int, help="dressed-state manifolds (dressed subcommand)")
        p.add_argument("--omega-fixed", type=float, help="fixed detuning for power-sweep")
    return parser


def _parse_override(item: str) -> tuple[str, str]:
    if "=" not in item:
        raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
    key, value = item.split("=", 1)
    return key.strip(), _coerce(value.strip())


def _coerce(value: str):
    lowered = value.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        pass
    if "," in value:
        return [_coerce(v) for v in value.split(",")]
    return value


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.config.read_text() if args.config else ""
        overrides = dict(_parse_override(item) for item in args.set)
        if args.output_prefix is not None:
            overrides["run.output_prefix"] = args.output_prefix
        if args.workers is not None:
            overrides["run.workers"] = args.workers
        if args.strict:
            overrides["run.strict"] = True
        if args.nmax is not None:
            overrides["run.nmax"] = args.nmax
        if args.omega_fixed is not None:
            overrides["run.omega_fixed"] = args.omega_fixed
        config = parse_config(text, overrides)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    out_prefix = Path(f"{config.output_prefix}-{args.command}")
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    return COMMANDS[args.command](config, out_prefix)


if __name__ == "__main__":
    raise SystemExit(main())
