"""Command-line entry point: one subcommand per figure family."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import FigureDataError
from .figures import power_spec, render, rotation_spec, spectrum_spec, transmission_spec

BUILDERS = {
    "spectrum": spectrum_spec,
    "rotation": rotation_spec,
    "transmission": transmission_spec,
    "power": power_spec,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincavity-figures",
        description="Render figures from spincavity sweep CSVs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in BUILDERS:
        p = sub.add_parser(name, help=f"render a {name} figure")
        p.add_argument("--csv", action="append", required=True, help="input CSV (repeatable)")
        p.add_argument("--out", required=True, help="output path stem (no extension)")
        if name == "rotation":
            p.add_argument(
                "--threshold",
                type=float,
                default=-0.95,
                help="saturation threshold for window annotations",
            )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    builder = BUILDERS[args.command]
    kwargs = {}
    if args.command == "rotation":
        kwargs["threshold"] = args.threshold
    try:
        spec = builder(args.csv, Path(args.out), **kwargs)
        written = render(spec)
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
