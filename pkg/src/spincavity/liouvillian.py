"""Driven Jaynes-Cummings Liouvillian and its steady state.

The Hamiltonian is written in the frame rotating at the probe frequency and
the coherent drive enters through the input/output port with a fixed real
positive amplitude; the steady state is extracted from the rank-deficient
linear system L vec(rho) = 0 with one row traded for the trace constraint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .operators import (
    HilbertLayout,
    adjoint,
    composite_operators,
    dissipator,
    identity,
    spre,
    spost,
    unvectorize,
    vectorize,
)
from .params import Drive, SystemParams, Topology

DIRECT_SOLVER_MAX_DIM = 40_000  # on vec(rho); above this use preconditioned GMRES
SOLVER_TOL = 1e-10
DEFAULT_CUTOFF_CAP = 512


class SteadyStateError(RuntimeError):
    """Steady-state solve failed (non-convergence or ill-posed system)."""


class CutoffCapError(SteadyStateError):
    """Adaptive Fock truncation exceeded the configured hard cap."""


@dataclass(frozen=True)
class SteadyStateResult:
    """Steady-state density matrix with derived expectations."""

    rho: np.ndarray
    cutoff: int
    residual: float
    a_expect: complex
    n_expect: float
    sigma_z_expect: float

    @property
    def fock_populations(self) -> np.ndarray:
        """Photon-number distribution, traced over the QD."""
        diag = np.real(np.diag(self.rho))
        return diag.reshape(2, -1).sum(axis=0)


def build_hamiltonian(params: SystemParams, drive: Drive, cutoff: int):
    """Rotating-frame Hamiltonian with coherent drive through one port."""
    layout = HilbertLayout(cutoff)
    a, sm, _ = composite_operators(layout, sparse=True)
    ad, sp_ = adjoint(a), adjoint(sm)
    delta_c = params.omega_c - drive.omega
    delta_x = params.omega_x - drive.omega
    alpha = drive.amplitude(params)
    H = (
        delta_c * (ad @ a)
        + delta_x * (sp_ @ sm)
        + 1j * params.g * (sp_ @ a - ad @ sm)
        + 1j * np.sqrt(params.kappa) * alpha * (a - ad)
    )
    return H.tocsr()


def build_liouvillian(params: SystemParams, drive: Drive, cutoff: int):
    """Lindblad generator on vectorized rho (column stacking)."""
    layout = HilbertLayout(cutoff)
    a, sm, sz = composite_operators(layout, sparse=True)
    H = build_hamiltonian(params, drive, cutoff)
    L = -1j * (spre(H) - spost(H))
    L = L + dissipator(np.sqrt(params.kappa_tot) * a)
    if params.gamma_par > 0:
        L = L + dissipator(np.sqrt(params.gamma_par) * sm)
    if params.gamma_star > 0:
        d = layout.total_dim
        L = L + 0.5 * params.gamma_star * (
            spre(sz) @ spost(sz) - identity(d * d, sparse=True)
        )
    return L.tocsr()


def steady_state(L, cutoff: int) -> SteadyStateResult:
    """Solve L vec(rho) = 0 with Tr rho = 1.

    The first row of L is replaced by the trace functional; the system is then
    square and nonsingular whenever the Liouvillian has a unique steady state
    (true here whenever the QD sector is connected, i.e. gamma_par > 0 or
    g > 0 with kappa_tot > 0).
    """
    d2 = L.shape[0]
    d = int(round(np.sqrt(d2)))
    if d * d != d2:
        raise ValueError(f"Liouvillian dimension {d2} is not a perfect square")

    A = L.tolil(copy=True)
    trace_row = np.zeros(d2, dtype=complex)
    trace_row[:: d + 1] = 1.0
    A[0, :] = trace_row
    A = A.tocsr()
    b = np.zeros(d2, dtype=complex)
    b[0] = 1.0

    if d2 <= DIRECT_SOLVER_MAX_DIM:
        x = spla.spsolve(A.tocsc(), b)
    else:
        x = _iterative_solve(A, b)

    rho = unvectorize(x, d)
    trace = np.real(np.trace(rho))
    if abs(trace - 1.0) > 1e-6:
        raise SteadyStateError(f"trace constraint violated: Tr rho = {trace}")
    residual = float(np.linalg.norm(L @ x))
    if residual > max(SOLVER_TOL, 1e-8 * float(np.linalg.norm(x))):
        raise SteadyStateError(f"steady-state residual too large: {residual:.3e}")

    layout = HilbertLayout(cutoff)
    a, _, sz = composite_operators(layout, sparse=True)
    a_expect = complex(np.trace(a @ rho))
    ad = adjoint(a)
    n_expect = float(np.real(np.trace((ad @ a) @ rho)))
    sigma_z_expect = float(np.real(np.trace(sz @ rho)))
    return SteadyStateResult(rho, cutoff, residual, a_expect, n_expect, sigma_z_expect)


def _iterative_solve(A, b):
    try:
        ilu = spla.spilu(A.tocsc(), drop_tol=1e-6, fill_factor=20)
        M = spla.LinearOperator(A.shape, ilu.solve)
    except RuntimeError as exc:
        raise SteadyStateError(f"ILU preconditioner failed: {exc}") from exc
    x, info = spla.gmres(A, b, rtol=SOLVER_TOL, atol=0.0, restart=200, maxiter=50, M=M)
    if info != 0:
        raise SteadyStateError(
            f"GMRES did not reach tolerance {SOLVER_TOL} (info={info})"
        )
    return x


def _cold_photon_number(params: SystemParams, drive: Drive) -> float:
    """Cold-cavity resonant photon number 4 kappa P / kappa_tot^2."""
    return 4.0 * params.kappa * drive.flux(params) / params.kappa_tot**2


def solve_converged(
    params: SystemParams,
    drive: Drive,
    cutoff_cap: int = DEFAULT_CUTOFF_CAP,
) -> SteadyStateResult:
    """Steady state at an adaptively chosen Fock cutoff.

    Starts at N0 = max(10, ceil(4 n_cold)) and doubles the cutoff until <a>
    and <n> are stable to 1e-6 relative and the top two Fock levels hold less
    than 1e-8 combined population.
    """
    n0 = max(10, int(np.ceil(4.0 * _cold_photon_number(params, drive))))
    if n0 > cutoff_cap:
        raise CutoffCapError(
            f"initial cutoff {n0} exceeds cap {cutoff_cap} at "
            f"omega={drive.omega}, power_norm={drive.power_norm}"
        )
    prev = steady_state(build_liouvillian(params, drive, n0), n0)
    cutoff = n0
    while True:
        next_cutoff = 2 * cutoff
        if next_cutoff > cutoff_cap:
            raise CutoffCapError(
                f"cutoff {next_cutoff} exceeds cap {cutoff_cap} at "
                f"omega={drive.omega}, power_norm={drive.power_norm}"
            )
        cur = steady_state(build_liouvillian(params, drive, next_cutoff), next_cutoff)
        scale_a = max(abs(cur.a_expect), 1e-30)
        scale_n = max(abs(cur.n_expect), 1e-30)
        da = abs(cur.a_expect - prev.a_expect) / scale_a
        dn = abs(cur.n_expect - prev.n_expect) / scale_n
        tail = float(cur.fock_populations[-2:].sum())
        if da < 1e-6 and dn < 1e-6 and tail < 1e-8:
            # the smaller cutoff already suffices if its own tail is clean
            if float(prev.fock_populations[-2:].sum()) < 1e-8:
                return prev
            return cur
        prev, cutoff = cur, next_cutoff


def choose_cutoff(
    params: SystemParams,
    drive: Drive,
    cutoff_cap: int = DEFAULT_CUTOFF_CAP,
) -> int:
    """Converged Fock cutoff for the given operating point."""
    return solve_converged(params, drive, cutoff_cap).cutoff


def reflection_qo(
    params: SystemParams,
    drive: Drive,
    cutoff_cap: int = DEFAULT_CUTOFF_CAP,
    result: SteadyStateResult | None = None,
) -> complex:
    """Single-sided reflection r = 1 + sqrt(kappa) <a> / alpha_in."""
    if params.topology is not Topology.SINGLE_SIDED:
        raise ValueError("reflection_qo requires a single-sided cavity")
    alpha = drive.amplitude(params)
    if alpha == 0:
        raise ValueError("reflection coefficient undefined at zero drive")
    if result is None:
        result = solve_converged(params, drive, cutoff_cap)
    return 1.0 + np.sqrt(params.kappa) * result.a_expect / alpha


def transmission_qo(
    params: SystemParams,
    drive: Drive,
    cutoff_cap: int = DEFAULT_CUTOFF_CAP,
    result: SteadyStateResult | None = None,
) -> tuple[complex, complex]:
    """Double-sided (r, t): t = sqrt(kappa) <a> / alpha_in, r = 1 + t."""
    if params.topology is not Topology.DOUBLE_SIDED:
        raise ValueError("transmission_qo requires a double-sided cavity")
    alpha = drive.amplitude(params)
    if alpha == 0:
        raise ValueError("transmission coefficient undefined at zero drive")
    if result is None:
        result = solve_converged(params, drive, cutoff_cap)
    t = np.sqrt(params.kappa) * result.a_expect / alpha
    return 1.0 + t, t
