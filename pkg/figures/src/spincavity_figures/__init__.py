"""Figure rendering for spincavity sweep CSVs (consumes CSVs only)."""

__version__ = "0.1.0"

from .data import (
    FigureDataError,
    MissingColumnError,
    MissingFileError,
    Table,
    attach_rotation,
    load_csv,
    load_many,
)
from .figures import (
    FigureSpec,
    PanelSpec,
    build_figure,
    power_spec,
    render,
    rotation_spec,
    spectrum_spec,
    transmission_spec,
)

__all__ = [
    "FigureDataError",
    "MissingColumnError",
    "MissingFileError",
    "Table",
    "attach_rotation",
    "load_csv",
    "load_many",
    "FigureSpec",
    "PanelSpec",
    "build_figure",
    "power_spec",
    "render",
    "rotation_spec",
    "spectrum_spec",
    "transmission_spec",
    "__version__",
]
