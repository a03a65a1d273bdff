"""Self-consistent semiclassical saturation solver.

Factorizing the field-dipole correlations gives a closed-form reflection
(transmission) coefficient that depends on the QD population difference
<sigma_z>, which in turn depends on the cavity photon number <n>; the pair
(s, n) is fixed by two coupled algebraic equations solved here by a grid
scan plus bisection, so every branch of a multivalued (bistable) solution
is found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .params import Drive, SystemParams, Topology

GRID_POINTS = 2001
S_EDGE = 1e-12  # keep the scan inside the open interval (-1, 0)


def critical_photon_number(params: SystemParams) -> float:
    """n_c = gamma_par * gamma / (8 g^2), the QD saturation photon scale."""
    if params.g == 0:
        raise ValueError("critical photon number undefined at g = 0")
    return params.gamma_par * params.gamma / (8.0 * params.g**2)


def sigma_z_of_n(n: float, delta_x: float, params: SystemParams) -> float:
    """Population difference for a given cavity photon number.

    delta_x = omega_x - omega is the QD detuning from the probe.  The g = 0
    limit is defined as -1: with no coupling the QD decouples from the field
    and stays in its ground state.
    """
    if n < 0:
        raise ValueError("photon number must be >= 0")
    if params.g == 0:
        return -1.0
    n_c = critical_photon_number(params)
    sat = n / (n_c * (1.0 + 4.0 * delta_x**2 / params.gamma**2))
    return -1.0 / (1.0 + sat)


def photon_number(s: float, drive: Drive, params: SystemParams) -> float:
    """Average cavity photon number at population difference s."""
    if not -1.0 <= s <= 0.0:
        raise ValueError(f"sigma_z must lie in [-1, 0], got {s}")
    delta_x = params.omega_x - drive.omega
    delta_c = params.omega_c - drive.omega
    gamma = params.gamma
    kt = params.kappa_tot
    flux = drive.flux(params)
    dipole = delta_x**2 + gamma**2 / 4.0
    cavity = delta_c**2 + kt**2 / 4.0
    cross = delta_x * delta_c - kt * gamma / 4.0
    denom = dipole * cavity + 2.0 * params.g**2 * s * cross + params.g**4 * s**2
    if denom <= 0:
        raise ValueError("non-positive denominator in photon-number formula")
    return params.kappa * dipole * flux / denom


@dataclass(frozen=True)
class SemiclassicalSolution:
    """One self-consistent branch of the saturation equations."""

    sigma_z: float
    n_cavity: float
    branch_id: int
    residual: float
    r: complex
    t: complex | None = None


def _solution_residual(s: float, n: float, delta_x: float, drive: Drive, params: SystemParams) -> float:
    r1 = abs(s - sigma_z_of_n(n, delta_x, params))
    r2 = abs(n - photon_number(s, drive, params)) / max(1.0, n)
    return max(r1, r2)


def solve_self_consistent(
    drive: Drive,
    params: SystemParams,
    hint: float | None = None,
) -> list[SemiclassicalSolution]:
    """All roots of the coupled saturation equations on s in [-1, 0].

    Roots of f(s) = photon_number(s) - n_required(s), where n_required inverts
    the population-difference formula.  f(-1) >= 0 and f(0-) -> -inf, so at
    least one root exists for any drive; a sign-change scan on a fixed grid
    catches every branch when the system is bistable.  If a hint is given the
    returned list is ordered by |s - hint| (for branch continuation), else by
    s ascending.
    """
    delta_x = params.omega_x - drive.omega

    def make_solution(s: float, branch: int) -> SemiclassicalSolution:
        n = photon_number(s, drive, params)
        res = _solution_residual(s, n, delta_x, drive, params)
        if params.topology is Topology.DOUBLE_SIDED:
            r, t = transmission_sc(params, drive, s)
        else:
            r, t = reflection_sc(params, drive, s), None
        return SemiclassicalSolution(s, n, branch, res, r, t)

    if drive.power_norm == 0.0 or params.g == 0.0:
        return [make_solution(-1.0, 0)]

    n_c = critical_photon_number(params)
    n_scale = n_c * (1.0 + 4.0 * delta_x**2 / params.gamma**2)

    delta_c = params.omega_c - drive.omega
    gamma, kt, g = params.gamma, params.kappa_tot, params.g
    dipole = delta_x**2 + gamma**2 / 4.0
    cavity = delta_c**2 + kt**2 / 4.0
    cross = delta_x * delta_c - kt * gamma / 4.0
    numer = params.kappa * dipole * drive.flux(params)

    def f(s):
        denom = dipole * cavity + 2.0 * g**2 * s * cross + g**4 * s**2
        return numer / denom - n_scale * (-(1.0 + s) / s)

    grid = np.linspace(-1.0, -S_EDGE, GRID_POINTS)
    values = f(grid)

    roots: list[float] = []
    if values[0] == 0.0:
        roots.append(grid[0])
    for i in range(GRID_POINTS - 1):
        lo, hi = values[i], values[i + 1]
        if hi == 0.0:
            roots.append(grid[i + 1])
        elif lo * hi < 0.0:
            roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-15, rtol=8.9e-16))

    if not roots:
        raise RuntimeError(
            "no self-consistent root found; f must change sign on (-1, 0) "
            f"for power_norm={drive.power_norm}"
        )

    solutions = [make_solution(s, i) for i, s in enumerate(sorted(roots))]
    if hint is not None:
        solutions = sorted(solutions, key=lambda sol: abs(sol.sigma_z - hint))
    return solutions


def continued_solution(
    drive: Drive,
    params: SystemParams,
    steps: int = 30,
) -> SemiclassicalSolution:
    """The solution branch continued from the unsaturated P = 0 state.

    At a multivalued (bistable) operating point the root reached by ramping
    the power up from zero is the physically prepared one for a probe turned
    on adiabatically, and the one single-valued response curves report.
    The ramp threads the previous root as a hint; where the lower branch has
    folded away the nearest surviving root is taken, reproducing the upward
    power-sweep jump.
    """
    target = drive.power_norm
    if target == 0.0 or params.g == 0.0:
        return solve_self_consistent(drive, params)[0]
    sols = solve_self_consistent(drive, params)
    if len(sols) == 1:
        return sols[0]
    start = min(1e-4, target / 10.0)
    powers = np.geomspace(start, target, steps)
    hint = -1.0
    sol = None
    for p in powers:
        sol = solve_self_consistent(Drive(drive.omega, p), params, hint=hint)[0]
        hint = sol.sigma_z
    return sol


def reflection_sc(params: SystemParams, drive: Drive, s: float) -> complex:
    """Single-sided reflection coefficient at population difference s."""
    if params.topology is not Topology.SINGLE_SIDED:
        raise ValueError("reflection_sc requires a single-sided cavity")
    delta_x = params.omega_x - drive.omega
    delta_c = params.omega_c - drive.omega
    dipole = 1j * delta_x + params.gamma / 2.0
    cavity = 1j * delta_c + params.kappa_tot / 2.0
    return 1.0 - params.kappa * dipole / (dipole * cavity - params.g**2 * s)


def transmission_sc(params: SystemParams, drive: Drive, s: float) -> tuple[complex, complex]:
    """Double-sided (r, t) at population difference s; r = 1 + t identically."""
    if params.topology is not Topology.DOUBLE_SIDED:
        raise ValueError("transmission_sc requires a double-sided cavity")
    delta_x = params.omega_x - drive.omega
    delta_c = params.omega_c - drive.omega
    dipole = 1j * delta_x + params.gamma / 2.0
    cavity = 1j * delta_c + params.kappa_tot / 2.0
    t = -params.kappa * dipole / (dipole * cavity - params.g**2 * s)
    return 1.0 + t, t


def effective_coupling(g: float, s: float) -> float:
    """Saturation-reduced coupling g_eff = g sqrt(|s|)."""
    if not -1.0 <= s <= 0.0:
        raise ValueError(f"sigma_z must lie in [-1, 0], got {s}")
    return g * math.sqrt(abs(s))
