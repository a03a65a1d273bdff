"""Run configuration: TOML-syntax config files with strict key validation.

Three sections: [system] (physical rates), [drive] (powers and frequency
grid) and [run] (methods, outputs, solver knobs).  Unknown keys are rejected
so a typo cannot silently fall back to a default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .params import SystemParams, Topology, default_params


class ConfigError(ValueError):
    """Invalid configuration file or overrides."""


SYSTEM_KEYS = {
    "normalization",
    "topology",
    "g",
    "kappa",
    "kappa_s",
    "kappa_s_ratio",
    "gamma_par",
    "gamma_star",
    "omega_c",
    "omega_x",
    "detuning_x",
}
DRIVE_KEYS = {"powers", "omega_min", "omega_max", "omega_points"}
RUN_KEYS = {
    "methods",
    "cavities",
    "cutoff_cap",
    "output_prefix",
    "workers",
    "strict",
    "window_threshold",
    "nmax",
    "omega_fixed",
}

VALID_METHODS = ("semiclassical", "master-equation")
VALID_CAVITIES = ("hot", "cold")


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    powers: tuple[float, ...]
    omega_min: float
    omega_max: float
    omega_points: int
    methods: tuple[str, ...]
    cavities: tuple[str, ...]
    cutoff_cap: int = 512
    output_prefix: str = "run"
    workers: int = 1
    strict: bool = False
    window_threshold: float = -0.95
    nmax: int = 3
    omega_fixed: float | None = None
    raw: dict = field(default_factory=dict, compare=False)

    def omega_grid(self):
        import numpy as np

        return np.linspace(self.omega_min, self.omega_max, self.omega_points)


def _check_keys(section: str, data: dict, allowed: set):
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")


def _build_params(system: dict) -> SystemParams:
    _check_keys("system", system, SYSTEM_KEYS)
    normalization = system.get("normalization", "kappa_tot")
    topology_name = system.get("topology", "single-sided")
    try:
        topology = Topology(topology_name)
    except ValueError:
        raise ConfigError(f"topology must be one of "
                          f"{[t.value for t in Topology]}, got {topology_name!r}") from None

    if normalization == "kappa_tot":
        for key in ("kappa", "kappa_s", "omega_c", "omega_x"):
            if key in system:
                raise ConfigError(
                    f"key {key!r} is only valid with normalization = 'absolute'"
                )
        return default_params(
            topology=topology,
            g=float(system.get("g", 2.4)),
            gamma_par=float(system.get("gamma_par", 0.1)),
            gamma_star=float(system.get("gamma_star", 0.0)),
            kappa_s_ratio=float(system.get("kappa_s_ratio", 0.5)),
            detuning_x=float(system.get("detuning_x", 0.0)),
        )
    if normalization == "absolute":
        if "kappa_s_ratio" in system or "detuning_x" in system:
            raise ConfigError(
                "kappa_s_ratio / detuning_x are only valid with normalization = 'kappa_tot'"
            )
        missing = {"g", "kappa"} - set(system)
        if missing:
            raise ConfigError(f"absolute normalization requires {sorted(missing)}")
        return SystemParams(
            omega_c=float(system.get("omega_c", 0.0)),
            omega_x=float(system.get("omega_x", system.get("omega_c", 0.0))),
            g=float(system["g"]),
            kappa=float(system["kappa"]),
            kappa_s=float(system.get("kappa_s", 0.0)),
            gamma_par=float(system.get("gamma_par", 0.0)),
            gamma_star=float(system.get("gamma_star", 0.0)),
            topology=topology,
        )
    raise ConfigError(f"normalization must be 'kappa_tot' or 'absolute', got {normalization!r}")


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Parse and validate a config document; overrides win over file keys.

    overrides maps dotted keys ('run.workers') to raw string or typed values.
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc

    _check_keys("<root>", data, {"system", "drive", "run"})
    system = dict(data.get("system", {}))
    drive = dict(data.get("drive", {}))
    run = dict(data.get("run", {}))

    for dotted, value in (overrides or {}).items():
        if "." not in dotted:
            raise ConfigError(f"override key must be 'section.key', got {dotted!r}")
        section, key = dotted.split(".", 1)
        target = {"system": system, "drive": drive, "run": run}.get(section)
        if target is None:
            raise ConfigError(f"unknown override section {section!r}")
        target[key] = value

    params = _build_params(system)

    _check_keys("drive", drive, DRIVE_KEYS)
    powers = tuple(float(p) for p in _as_list(drive.get("powers", [1e-3])))
    if not powers:
        raise ConfigError("powers must be a nonempty list")
    for p in powers:
        if not math.isfinite(p) or p < 0:
            raise ConfigError(f"powers entries must be finite and >= 0, got {p}")
    omega_min = float(drive.get("omega_min", -4.0))
    omega_max = float(drive.get("omega_max", 4.0))
    omega_points = int(drive.get("omega_points", 201))
    if not (math.isfinite(omega_min) and math.isfinite(omega_max)) or omega_min >= omega_max:
        raise ConfigError("omega grid bounds must be finite with omega_min < omega_max")
    if omega_points < 2:
        raise ConfigError("omega_points must be >= 2")

    _check_keys("run", run, RUN_KEYS)
    methods = tuple(str(m) for m in _as_list(run.get("methods", list(VALID_METHODS))))
    for m in methods:
        if m not in VALID_METHODS:
            raise ConfigError(f"methods entries must be in {VALID_METHODS}, got {m!r}")
    cavities = tuple(str(c) for c in _as_list(run.get("cavities", list(VALID_CAVITIES))))
    for c in cavities:
        if c not in VALID_CAVITIES:
            raise ConfigError(f"cavities entries must be in {VALID_CAVITIES}, got {c!r}")
    cutoff_cap = int(run.get("cutoff_cap", 512))
    if cutoff_cap < 1:
        raise ConfigError("cutoff_cap must be >= 1")
    workers = int(run.get("workers", 1))
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    strict = _as_bool(run.get("strict", False))
    nmax = int(run.get("nmax", 3))
    if nmax < 1:
        raise ConfigError("nmax must be >= 1")
    omega_fixed = run.get("omega_fixed")

    return RunConfig(
        params=params,
        powers=powers,
        omega_min=omega_min,
        omega_max=omega_max,
        omega_points=omega_points,
        methods=methods,
        cavities=cavities,
        cutoff_cap=cutoff_cap,
        output_prefix=str(run.get("output_prefix", "run")),
        workers=workers,
        strict=strict,
        window_threshold=float(run.get("window_threshold", -0.95)),
        nmax=nmax,
        omega_fixed=None if omega_fixed is None else float(omega_fixed),
        raw={"system": system, "drive": drive, "run": run},
    )


def _as_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _as_bool(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        if value.lower() in ("true", "1", "yes"):
            return True
        if value.lower() in ("false", "0", "no"):
            return False
    raise ConfigError(f"expected a boolean, got {value!r}")
