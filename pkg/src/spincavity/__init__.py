"""Spin-cavity QED spectra: semiclassical saturation and Lindblad steady state.

Two independent solvers for the reflection/transmission response of a
quantum-dot spin coupled to an optical microcavity, with sweep utilities for
Faraday-rotation and circular-birefringence spectra, saturation windows,
power sweeps and dressed-state resonances.
"""

__version__ = "0.1.0"

from .params import Drive, SystemParams, Topology, default_params
from .semiclassical import (
    SemiclassicalSolution,
    continued_solution,
    critical_photon_number,
    effective_coupling,
    photon_number,
    reflection_sc,
    sigma_z_of_n,
    solve_self_consistent,
    transmission_sc,
)
from .liouvillian import (
    CutoffCapError,
    SteadyStateError,
    SteadyStateResult,
    build_hamiltonian,
    build_liouvillian,
    choose_cutoff,
    reflection_qo,
    solve_converged,
    steady_state,
    transmission_qo,
)
from .spectra import (
    DressedLevel,
    SpectrumRow,
    SpectrumTable,
    dressed_eigenvalues,
    faraday_rotation,
    nonsaturation_window,
    phase_shift_detuning,
    power_sweep,
    saturation_spectrum,
    sweep_spectrum,
)

__all__ = [
    "Drive",
    "SystemParams",
    "Topology",
    "default_params",
    "SemiclassicalSolution",
    "continued_solution",
    "critical_photon_number",
    "effective_coupling",
    "photon_number",
    "reflection_sc",
    "sigma_z_of_n",
    "solve_self_consistent",
    "transmission_sc",
    "CutoffCapError",
    "SteadyStateError",
    "SteadyStateResult",
    "build_hamiltonian",
    "build_liouvillian",
    "choose_cutoff",
    "reflection_qo",
    "solve_converged",
    "steady_state",
    "transmission_qo",
    "DressedLevel",
    "SpectrumRow",
    "SpectrumTable",
    "dressed_eigenvalues",
    "faraday_rotation",
    "nonsaturation_window",
    "phase_shift_detuning",
    "power_sweep",
    "saturation_spectrum",
    "sweep_spectrum",
    "__version__",
]
