"""CSV loading and validation for figure rendering.

The renderer consumes the sweep CSVs written by the spincavity CLI and never
recomputes physics; the only derived quantity is the rotation angle, which is
plain arithmetic on phase columns already present in the file.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path


class FigureDataError(Exception):
    """Base class for figure input problems."""


class MissingFileError(FigureDataError):
    """An input CSV path does not exist."""


class MissingColumnError(FigureDataError):
    """A required column is absent from the input CSV."""


NUMERIC_COLUMNS = {
    "omega_detuning",
    "power_norm",
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
    "residual",
}


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: tuple[dict, ...]

    def require(self, *names: str) -> None:
        missing = [name for name in names if name not in self.columns]
        if missing:
            raise MissingColumnError(
                f"missing column(s) {', '.join(missing)}; have {', '.join(self.columns)}"
            )

    def select(self, **criteria) -> list[dict]:
        return [
            row
            for row in self.rows
            if all(row.get(key) == val for key, val in criteria.items())
        ]


def _parse(column: str, value: str):
    if value == "":
        return None
    if column in NUMERIC_COLUMNS:
        return float(value)
    return value


def load_csv(path: Path | str) -> Table:
    path = Path(path)
    if not path.exists():
        raise MissingFileError(f"input CSV not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise MissingColumnError(f"{path} has no header row")
        columns = tuple(reader.fieldnames)
        rows = tuple(
            {key: _parse(key, value) for key, value in row.items()} for row in reader
        )
    return Table(columns=columns, rows=rows)


def load_many(paths) -> Table:
    """Concatenate several CSVs; they must share the column set."""
    tables = [load_csv(p) for p in paths]
    if not tables:
        raise MissingFileError("no input CSV paths given")
    first = tables[0].columns
    for path, table in zip(paths, tables):
        if table.columns != first:
            raise MissingColumnError(
                f"{path} columns differ from the first input file"
            )
    rows = tuple(row for table in tables for row in table.rows)
    return Table(columns=first, rows=rows)


def wrap_angle(phi: float) -> float:
    wrapped = math.remainder(phi, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def attach_rotation(table: Table) -> Table:
    """Add a 'gfr' value to hot rows: half the cold-hot phase difference.

    Requires phase_r for both cavities at matching (method, power, detuning).
    Hot rows without a cold counterpart get gfr = None.
    """
    table.require("phase_r", "cavity", "method", "power_norm", "omega_detuning")
    cold = {
        (row["method"], row["power_norm"], row["omega_detuning"]): row["phase_r"]
        for row in table.rows
        if row["cavity"] == "cold" and row["phase_r"] is not None
    }
    rows = []
    for row in table.rows:
        out = dict(row)
        out["gfr"] = None
        if row["cavity"] == "hot" and row["phase_r"] is not None:
            key = (row["method"], row["power_norm"], row["omega_detuning"])
            if key in cold:
                out["gfr"] = wrap_angle(cold[key] - row["phase_r"]) / 2.0
        rows.append(out)
    return Table(columns=table.columns + ("gfr",), rows=tuple(rows))
