"""Physical parameters of the spin-cavity unit and the probe drive.

All quantities are angular rates in a common (arbitrary) unit; the
conventional choice throughout this package is kappa_tot = 1, so that
detunings and powers match the normalized axes used in the rest of the
library.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class Topology(enum.Enum):
    """Cavity geometry: one or two partially reflective end mirrors."""

    SINGLE_SIDED = "single-sided"
    DOUBLE_SIDED = "double-sided"


@dataclass(frozen=True)
class SystemParams:
    """Rates and frequencies of the coupled QD-cavity system.

    kappa is the decay rate through one input/output port, kappa_s the side
    leakage.  gamma_par is the spontaneous-emission rate, gamma_star the pure
    dephasing rate; the total dipole decay rate gamma = gamma_par + 2*gamma_star
    is always derived, never set independently.
    """

    omega_c: float = 0.0
    omega_x: float = 0.0
    g: float = 2.4
    kappa: float = 2.0 / 3.0
    kappa_s: float = 1.0 / 3.0
    gamma_par: float = 0.1
    gamma_star: float = 0.0
    topology: Topology = Topology.SINGLE_SIDED

    def __post_init__(self):
        for name in ("g", "kappa", "kappa_s", "gamma_par", "gamma_star"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if self.kappa_tot <= 0:
            raise ValueError("total cavity decay rate must be positive")

    @property
    def gamma(self) -> float:
        return self.gamma_par + 2.0 * self.gamma_star

    @property
    def kappa_tot(self) -> float:
        if self.topology is Topology.DOUBLE_SIDED:
            return 2.0 * self.kappa + self.kappa_s
        return self.kappa + self.kappa_s

    def cold(self) -> "SystemParams":
        """Same cavity with the QD decoupled (g = 0)."""
        return SystemParams(
            omega_c=self.omega_c,
            omega_x=self.omega_x,
            g=0.0,
            kappa=self.kappa,
            kappa_s=self.kappa_s,
            gamma_par=self.gamma_par,
            gamma_star=self.gamma_star,
            topology=self.topology,
        )


def default_params(
    topology: Topology = Topology.SINGLE_SIDED,
    g: float = 2.4,
    gamma_par: float = 0.1,
    gamma_star: float = 0.0,
    kappa_s_ratio: float = 0.5,
    kappa_tot: float = 1.0,
    detuning_x: float = 0.0,
) -> SystemParams:
    """Build parameters in kappa_tot units with kappa_s = ratio * kappa.

    g, gamma_par, gamma_star and detuning_x are given in units of kappa_tot;
    kappa and kappa_s are derived from the side-leakage ratio and the topology.
    """
    if kappa_tot <= 0:
        raise ValueError("kappa_tot must be positive")
    if kappa_s_ratio < 0:
        raise ValueError("kappa_s_ratio must be >= 0")
    ports = 2.0 if topology is Topology.DOUBLE_SIDED else 1.0
    kappa = kappa_tot / (ports + kappa_s_ratio)
    return SystemParams(
        omega_c=0.0,
        omega_x=detuning_x * kappa_tot,
        g=g * kappa_tot,
        kappa=kappa,
        kappa_s=kappa_s_ratio * kappa,
        gamma_par=gamma_par * kappa_tot,
        gamma_star=gamma_star * kappa_tot,
        topology=topology,
    )


@dataclass(frozen=True)
class Drive:
    """Probe field: frequency and input power in photons per cavity lifetime."""

    omega: float
    power_norm: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.omega):
            raise ValueError("omega must be finite")
        if not math.isfinite(self.power_norm) or self.power_norm < 0:
            raise ValueError("power_norm must be finite and >= 0")

    def flux(self, params: SystemParams) -> float:
        """Input photon flux P = power_norm * kappa_tot (photons per unit time)."""
        return self.power_norm * params.kappa_tot

    def amplitude(self, params: SystemParams) -> float:
        """Input field amplitude alpha_in = sqrt(P), fixed real positive."""
        return math.sqrt(self.flux(params))
