"""Sweep orchestration and derived spectra.

Detunings are reported as (omega - omega_c) / kappa_tot throughout, matching
the normalized axes used for all figures.  Semiclassical curves select, at
each point, the branch continued from zero power (the single-valued branch
the figures show); power sweeps additionally thread the previous root as a
hint along the power axis.  Master-equation points are solved independently
at an adaptively converged cutoff.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import liouvillian as lv
from . import semiclassical as sc
from .params import Drive, SystemParams, Topology

METHOD_SEMICLASSICAL = "semiclassical"
METHOD_MASTER_EQUATION = "master-equation"
CAVITY_HOT = "hot"
CAVITY_COLD = "cold"


@dataclass(frozen=True)
class SpectrumRow:
    """One solved operating point."""

    omega_detuning: float
    power_norm: float
    method: str
    cavity: str
    r: complex | None = None
    t: complex | None = None
    sigma_z: float | None = None
    n_cavity: float | None = None
    branch_id: int | None = None
    branch_count: int | None = None
    cutoff: int | None = None
    residual: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SpectrumTable:
    rows: tuple[SpectrumRow, ...]

    def select(self, **criteria) -> "SpectrumTable":
        rows = [
            row
            for row in self.rows
            if all(getattr(row, key) == val for key, val in criteria.items())
        ]
        return SpectrumTable(tuple(rows))

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows])

    def __len__(self) -> int:
        return len(self.rows)


def wrap_phase(phi: float) -> float:
    """Wrap an angle to the principal interval (-pi, pi]."""
    wrapped = math.remainder(phi, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def _sc_point(
    params: SystemParams,
    drive: Drive,
    delta: float,
    hint: float | None = None,
    branch: str = "continued",
) -> SpectrumRow:
    cavity = CAVITY_HOT if params.g > 0 else CAVITY_COLD
    try:
        sols = sc.solve_self_consistent(drive, params, hint=hint)
        if branch == "continued":
            best = sols[0] if len(sols) == 1 else sc.continued_solution(drive, params)
        elif branch == "hint":
            best = sols[0]
        else:
            raise ValueError(f"unknown branch selection {branch!r}")
    except (ValueError, RuntimeError) as exc:
        return SpectrumRow(
            omega_detuning=delta,
            power_norm=drive.power_norm,
            method=METHOD_SEMICLASSICAL,
            cavity=cavity,
            error=str(exc),
        )
    branch_count = len(sols)
    return SpectrumRow(
        omega_detuning=delta,
        power_norm=drive.power_norm,
        method=METHOD_SEMICLASSICAL,
        cavity=cavity,
        r=best.r,
        t=best.t,
        sigma_z=best.sigma_z,
        n_cavity=best.n_cavity,
        branch_id=best.branch_id,
        branch_count=branch_count,
        residual=best.residual,
    )


def _qo_point(params: SystemParams, drive: Drive, delta: float, cutoff_cap: int) -> SpectrumRow:
    cavity = CAVITY_HOT if params.g > 0 else CAVITY_COLD
    try:
        result = lv.solve_converged(params, drive, cutoff_cap)
        if params.topology is Topology.DOUBLE_SIDED:
            r, t = lv.transmission_qo(params, drive, result=result)
        else:
            r, t = lv.reflection_qo(params, drive, result=result), None
    except (lv.SteadyStateError, ValueError) as exc:
        return SpectrumRow(
            omega_detuning=delta,
            power_norm=drive.power_norm,
            method=METHOD_MASTER_EQUATION,
            cavity=cavity,
            error=str(exc),
        )
    return SpectrumRow(
        omega_detuning=delta,
        power_norm=drive.power_norm,
        method=METHOD_MASTER_EQUATION,
        cavity=cavity,
        r=r,
        t=t,
        sigma_z=result.sigma_z_expect,
        n_cavity=result.n_expect,
        cutoff=result.cutoff,
        residual=result.residual,
    )


def _drive_at(params: SystemParams, delta: float, power: float) -> Drive:
    return Drive(omega=params.omega_c + delta * params.kappa_tot, power_norm=power)


def _sc_curve(params: SystemParams, power: float, omega_grid, branch: str = "continued") -> list[SpectrumRow]:
    rows = []
    hint = None
    for delta in omega_grid:
        row = _sc_point(params, _drive_at(params, delta, power), delta, hint, branch)
        hint = row.sigma_z
        rows.append(row)
    return rows


def _qo_curve(params, power, omega_grid, cutoff_cap, workers=1) -> list[SpectrumRow]:
    points = [(params, _drive_at(params, d, power), d, cutoff_cap) for d in omega_grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_qo_point_star, points))
    return [_qo_point(*args) for args in points]


def _qo_point_star(args):
    return _qo_point(*args)


def sweep_spectrum(
    params: SystemParams,
    power_list,
    omega_grid,
    methods=(METHOD_SEMICLASSICAL, METHOD_MASTER_EQUATION),
    cavities=(CAVITY_HOT, CAVITY_COLD),
    cutoff_cap: int = lv.DEFAULT_CUTOFF_CAP,
    workers: int = 1,
) -> SpectrumTable:
    """Spectra over the Cartesian product of powers, methods and cavities.

    Cold-cavity physics is linear, so each cold curve is computed once at the
    first requested power and replicated: r, t and sigma_z are identical for
    every power and the photon number scales exactly linearly with it.
    """
    omega_grid = np.asarray(list(omega_grid), dtype=float)
    if omega_grid.size == 0 or len(list(power_list)) == 0:
        raise ValueError("omega grid and power list must be nonempty")
    if np.any(np.diff(omega_grid) <= 0):
        raise ValueError("omega grid must be strictly increasing")
    powers = list(power_list)

    rows: list[SpectrumRow] = []
    for method in methods:
        for cavity in cavities:
            point_params = params if cavity == CAVITY_HOT else params.cold()
            if cavity == CAVITY_COLD:
                base_power = next((p for p in powers if p > 0), powers[0])
                if method == METHOD_SEMICLASSICAL:
                    base = _sc_curve(point_params, base_power, omega_grid)
                else:
                    base = _qo_curve(point_params, base_power, omega_grid, cutoff_cap, workers)
                for power in powers:
                    scale = power / base_power if base_power > 0 else 0.0
                    for row in base:
                        rows.append(
                            replace(
                                row,
                                power_norm=power,
                                n_cavity=None if row.n_cavity is None else row.n_cavity * scale,
                            )
                        )
            else:
                for power in powers:
                    if method == METHOD_SEMICLASSICAL:
                        rows.extend(_sc_curve(point_params, power, omega_grid))
                    else:
                        rows.extend(_qo_curve(point_params, power, omega_grid, cutoff_cap, workers))
    return SpectrumTable(tuple(rows))


def faraday_rotation(table: SpectrumTable) -> list[tuple[float, float, str, float]]:
    """GFR angle per (detuning, power, method): half the cold-hot phase shift.

    Returns rows (omega_detuning, power_norm, method, gfr_angle); the phase
    difference is wrapped to (-pi, pi] before halving.
    """
    cold_index = {}
    for row in table.rows:
        if row.cavity == CAVITY_COLD and row.r is not None:
            cold_index[(row.omega_detuning, row.power_norm, row.method)] = row
    out = []
    for row in table.rows:
        if row.cavity != CAVITY_HOT or row.r is None:
            continue
        key = (row.omega_detuning, row.power_norm, row.method)
        if key not in cold_index:
            raise KeyError(f"no cold-cavity counterpart for {key}")
        shift = wrap_phase(cmath.phase(cold_index[key].r) - cmath.phase(row.r))
        out.append((row.omega_detuning, row.power_norm, row.method, shift / 2.0))
    return out


def saturation_spectrum(
    params: SystemParams,
    power_list,
    omega_grid,
    methods=(METHOD_SEMICLASSICAL, METHOD_MASTER_EQUATION),
    cutoff_cap: int = lv.DEFAULT_CUTOFF_CAP,
    workers: int = 1,
) -> SpectrumTable:
    """Hot-cavity sigma_z(omega) curves per power and method."""
    return sweep_spectrum(
        params,
        power_list,
        omega_grid,
        methods=methods,
        cavities=(CAVITY_HOT,),
        cutoff_cap=cutoff_cap,
        workers=workers,
    )


def nonsaturation_window(
    omega_grid,
    sigma_z_values,
    threshold: float = -0.95,
) -> tuple[float, float] | None:
    """Maximal contiguous detuning interval around zero with sigma_z < threshold.

    Returns None when the QD is saturated past the threshold at zero detuning
    (the window is closed).
    """
    deltas = np.asarray(omega_grid, dtype=float)
    values = np.asarray(sigma_z_values, dtype=float)
    if deltas.shape != values.shape:
        raise ValueError("grid and sigma_z arrays must have the same shape")
    center = int(np.argmin(np.abs(deltas)))
    if values[center] >= threshold:
        return None
    lo = center
    while lo > 0 and values[lo - 1] < threshold:
        lo -= 1
    hi = center
    while hi < len(deltas) - 1 and values[hi + 1] < threshold:
        hi += 1
    return float(deltas[lo]), float(deltas[hi])


def power_sweep(
    params: SystemParams,
    omega_fixed: float,
    power_grid,
    methods=(METHOD_SEMICLASSICAL, METHOD_MASTER_EQUATION),
    cavities=(CAVITY_HOT, CAVITY_COLD),
    cutoff_cap: int = lv.DEFAULT_CUTOFF_CAP,
) -> SpectrumTable:
    """Response at a fixed detuning as a function of input power.

    omega_fixed is a detuning in kappa_tot units.  Semiclassical curves are
    branch-continued along increasing power.
    """
    powers = np.asarray(list(power_grid), dtype=float)
    if powers.size == 0:
        raise ValueError("power grid must be nonempty")
    rows: list[SpectrumRow] = []
    for method in methods:
        for cavity in cavities:
            point_params = params if cavity == CAVITY_HOT else params.cold()
            hint = None
            for power in powers:
                drive = _drive_at(point_params, omega_fixed, power)
                if method == METHOD_SEMICLASSICAL:
                    branch = "continued" if hint is None else "hint"
                    row = _sc_point(point_params, drive, omega_fixed, hint, branch)
                    hint = row.sigma_z
                else:
                    row = _qo_point(point_params, drive, omega_fixed, cutoff_cap)
                rows.append(row)
    return SpectrumTable(tuple(rows))


@dataclass(frozen=True)
class DressedLevel:
    """One Jaynes-Cummings dressed level at zero detuning.

    eigenvalue is the closed-form complex level, eigenvalue_diag the same
    level from direct diagonalization of the non-Hermitian effective
    Hamiltonian restricted to the n-excitation manifold.  probe_resonance is
    the n-photon probe frequency Re(eigenvalue)/n.
    """

    order: int
    sign: int
    eigenvalue: complex
    eigenvalue_diag: complex
    probe_resonance: float
    weak_coupling: bool


def dressed_eigenvalues(params: SystemParams, n_max: int) -> list[DressedLevel]:
    """Complex dressed-level frequencies for manifolds n = 1..n_max.

    Requires the QD tuned to the cavity (omega_x = omega_c).  If the splitting
    term n g^2 - ((kappa_tot - gamma)/4)^2 is negative the pair is overdamped
    and flagged as weak coupling.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if params.omega_x != params.omega_c:
        raise ValueError("dressed-level formula assumes omega_x = omega_c")
    omega0 = params.omega_c
    kt, gamma, g = params.kappa_tot, params.gamma, params.g

    levels = []
    for n in range(1, n_max + 1):
        center = n * omega0 - 1j * ((2 * n - 1) * kt + gamma) / 4.0
        split_sq = n * g**2 - ((kt - gamma) / 4.0) ** 2
        split = cmath.sqrt(split_sq)
        weak = split_sq < 0

        # independent check: 2x2 manifold {|n, G>, |n-1, E>} of
        # H_JC - i (kappa_tot/2) a+a - i (gamma/2) sigma+sigma-
        h = np.array(
            [
                [n * omega0 - 1j * kt * n / 2.0, -1j * g * math.sqrt(n)],
                [1j * g * math.sqrt(n), n * omega0 - 1j * (kt * (n - 1) + gamma) / 2.0],
            ],
            dtype=complex,
        )
        eig = np.linalg.eigvals(h)
        eig = eig[np.argsort(eig.real + 1e-12 * eig.imag)]

        for sign in (-1, +1):
            closed = center + sign * split
            diag = min(eig, key=lambda z: abs(z - closed))
            levels.append(
                DressedLevel(
                    order=n,
                    sign=sign,
                    eigenvalue=closed,
                    eigenvalue_diag=complex(diag),
                    probe_resonance=closed.real / n,
                    weak_coupling=weak,
                )
            )
    return levels


def phase_shift_detuning(
    params: SystemParams,
    power_norm: float,
    target: float = math.pi / 2.0,
    search: tuple[float, float] = (1e-3, 2.0),
    points: int = 400,
) -> float:
    """Detuning (kappa_tot units) where the cold-hot phase shift equals target.

    Scans the semiclassical phase-shift magnitude on delta > 0 and bisects the
    first crossing; by detuning antisymmetry the mirrored detuning gives the
    opposite shift.
    """
    cold = params.cold()

    def shift(delta: float) -> float:
        drive = _drive_at(params, delta, power_norm)
        s = sc.solve_self_consistent(drive, params)[0].sigma_z
        r_hot = sc.reflection_sc(params, drive, s)
        r_cold = sc.reflection_sc(cold, drive, -1.0)
        return abs(wrap_phase(cmath.phase(r_cold) - cmath.phase(r_hot)))

    deltas = np.linspace(search[0], search[1], points)
    values = np.array([shift(d) - target for d in deltas])
    crossings = np.nonzero(values[:-1] * values[1:] < 0)[0]
    if crossings.size == 0:
        raise ValueError(f"no phase shift of {target} found in {search}")
    i = crossings[0]
    lo, hi = deltas[i], deltas[i + 1]
    flo = values[i]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fmid = shift(mid) - target
        if flo * fmid <= 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)
