"""Figure specifications and rendering.

Overlay convention: semiclassical curves dotted, master-equation curves
solid, one color per input power, legends sorted by power ascending.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# deterministic SVG element ids, independent of process state
plt.rcParams["svg.hashsalt"] = "spincavity-figures"

from .data import MissingColumnError, Table, attach_rotation, load_many

METHOD_STYLES = {"semiclassical": ":", "master-equation": "-"}
METHOD_ORDER = ("semiclassical", "master-equation")
POWER_COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]

DETUNING_LABEL = r"$(\omega-\omega_c)/\kappa_\mathrm{tot}$"
POWER_LABEL = r"input power $\bar P$"


@dataclass(frozen=True)
class PanelSpec:
    """One axes: a CSV column (or the derived 'gfr') against the x column."""

    y: str
    cavity: str | None = None
    ylabel: str = ""
    title: str = ""
    threshold: float | None = None  # horizontal guide + window arrows


@dataclass(frozen=True)
class FigureSpec:
    csv_paths: tuple[str, ...]
    panels: tuple[PanelSpec, ...]
    output: Path
    x: str = "omega_detuning"
    xlabel: str = DETUNING_LABEL
    ncols: int = 2
    logx: bool = False
    formats: tuple[str, ...] = ("png", "svg")
    legend_methods: bool = True
    extra: dict = field(default_factory=dict, compare=False)


def _load(spec: FigureSpec) -> Table:
    table = load_many(spec.csv_paths)
    table.require(spec.x, "method", "power_norm", "cavity")
    if any(panel.y == "gfr" for panel in spec.panels):
        table = attach_rotation(table)
    for panel in spec.panels:
        if panel.y not in table.columns:
            raise MissingColumnError(
                f"missing column(s) {panel.y}; have {', '.join(table.columns)}"
            )
    return table


def _curves(table: Table, spec: FigureSpec, panel: PanelSpec):
    """(power, method, x array, y array) tuples, powers ascending.

    When power itself is the x axis, curves are grouped by method only and
    the power slot is None.
    """
    rows = table.rows
    if panel.cavity is not None:
        rows = [row for row in rows if row["cavity"] == panel.cavity]
    methods = [m for m in METHOD_ORDER if any(r["method"] == m for r in rows)]
    if spec.x == "power_norm":
        powers = [None]
    else:
        powers = sorted(
            {row["power_norm"] for row in rows if row["power_norm"] is not None}
        )
    out = []
    for power in powers:
        for method in methods:
            pts = [
                (row[spec.x], row[panel.y])
                for row in rows
                if (power is None or row["power_norm"] == power)
                and row["method"] == method
                and row[spec.x] is not None
                and row[panel.y] is not None
            ]
            if not pts:
                continue
            pts.sort()
            x, y = zip(*pts)
            out.append((power, method, np.array(x), np.array(y)))
    return out


def _annotate_window(ax, x, y, threshold: float, color: str):
    """Green double arrow spanning the below-threshold interval around x=0."""
    center = int(np.argmin(np.abs(x)))
    if y[center] >= threshold:
        return
    lo = center
    while lo > 0 and y[lo - 1] < threshold:
        lo -= 1
    hi = center
    while hi < len(x) - 1 and y[hi + 1] < threshold:
        hi += 1
    ax.annotate(
        "",
        xy=(x[lo], threshold),
        xytext=(x[hi], threshold),
        arrowprops=dict(arrowstyle="<->", color="green", lw=1.2),
    )


def build_figure(spec: FigureSpec):
    """Assemble the matplotlib Figure for a spec; None when there is no data."""
    table = _load(spec)
    if not table.rows:
        warnings.warn(f"no data rows in {', '.join(map(str, spec.csv_paths))}; nothing to render")
        return None

    n = len(spec.panels)
    ncols = min(spec.ncols, n)
    nrows = -(-n // ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(5.0 * ncols, 3.4 * nrows), squeeze=False
    )
    flat = axes.ravel()
    for ax in flat[n:]:
        ax.set_visible(False)

    for ax, panel in zip(flat, spec.panels):
        curves = _curves(table, spec, panel)
        power_index = {
            p: i
            for i, p in enumerate(sorted({c[0] for c in curves if c[0] is not None}))
        }
        for power, method, x, y in curves:
            if power is None:
                label = method
                color = POWER_COLORS[METHOD_ORDER.index(method) % len(POWER_COLORS)]
            else:
                label = rf"$\bar P$ = {power:g}"
                if spec.legend_methods:
                    label += f", {method}"
                color = POWER_COLORS[power_index[power] % len(POWER_COLORS)]
            ax.plot(
                x,
                y,
                linestyle=METHOD_STYLES.get(method, "-"),
                color=color,
                label=label,
            )
            if panel.threshold is not None:
                _annotate_window(ax, x, y, panel.threshold, "green")
        if panel.threshold is not None:
            ax.axhline(panel.threshold, color="0.6", lw=0.8, ls="--")
        if spec.logx:
            ax.set_xscale("log")
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(panel.ylabel or panel.y)
        if panel.title:
            ax.set_title(panel.title)
        if curves:
            ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> list[Path]:
    """Write one image per requested format; returns the written paths."""
    fig = build_figure(spec)
    if fig is None:
        return []
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for ext in spec.formats:
            path = out.parent / f"{out.name}.{ext}"
            # strip volatile metadata so identical inputs give identical bytes
            metadata = {"Date": None} if ext == "svg" else {"Software": ""}
            fig.savefig(path, format=ext, metadata=metadata)
            written.append(path)
    finally:
        plt.close(fig)
    return written


def spectrum_spec(csv_paths, output) -> FigureSpec:
    """Reflectance amplitude and phase, hot and cold, vs detuning (2x2)."""
    return FigureSpec(
        csv_paths=tuple(map(str, csv_paths)),
        output=Path(output),
        panels=(
            PanelSpec("abs_r", "hot", "$|r|$", "hot cavity"),
            PanelSpec("phase_r", "hot", r"$\arg r$ (rad)", "hot cavity"),
            PanelSpec("abs_r", "cold", "$|r|$", "cold cavity"),
            PanelSpec("phase_r", "cold", r"$\arg r$ (rad)", "cold cavity"),
        ),
    )


def rotation_spec(csv_paths, output, threshold: float = -0.95) -> FigureSpec:
    """Rotation angle and saturation vs detuning, window arrows on sigma_z."""
    return FigureSpec(
        csv_paths=tuple(map(str, csv_paths)),
        output=Path(output),
        ncols=1,
        panels=(
            PanelSpec("gfr", "hot", "rotation angle (rad)"),
            PanelSpec(
                "sigma_z",
                "hot",
                r"$\langle\sigma_z\rangle$",
                threshold=threshold,
            ),
        ),
    )


def transmission_spec(csv_paths, output) -> FigureSpec:
    """Double-sided |r| and |t|, hot and cold, vs detuning (2x2)."""
    return FigureSpec(
        csv_paths=tuple(map(str, csv_paths)),
        output=Path(output),
        panels=(
            PanelSpec("abs_r", "hot", "$|r|$", "hot cavity"),
            PanelSpec("abs_t", "hot", "$|t|$", "hot cavity"),
            PanelSpec("abs_r", "cold", "$|r|$", "cold cavity"),
            PanelSpec("abs_t", "cold", "$|t|$", "cold cavity"),
        ),
    )


def power_spec(csv_paths, output) -> FigureSpec:
    """Fixed-detuning response vs input power (log axis)."""
    table = load_many(tuple(map(str, csv_paths)))
    panels = [PanelSpec("abs_r", "hot", "$|r|$")]
    if "abs_t" in table.columns and any(r.get("abs_t") is not None for r in table.rows):
        panels.append(PanelSpec("abs_t", "hot", "$|t|$"))
    panels.append(PanelSpec("sigma_z", "hot", r"$\langle\sigma_z\rangle$"))
    return FigureSpec(
        csv_paths=tuple(map(str, csv_paths)),
        output=Path(output),
        x="power_norm",
        xlabel=POWER_LABEL,
        logx=True,
        ncols=1,
        panels=tuple(panels),
    )
