"""Electron-nuclear spin system toolkit.

Simulation and numerical optimization for hyperfine-coupled electron-nuclear
spin systems: spin Hamiltonians, ESR/ENDOR spectra, tensor extraction from
orientation sweeps, field-orientation optimization for quantum control,
Lindblad open-system dynamics, GRAPE pulse design, and heat-bath algorithmic
cooling protocols.
"""

from .constants import B0_DEFAULT, GAMMA_13C, GAMMA_1H
from .hamiltonian import (SecularParams, build_full_hamiltonian,
                          build_secular_hamiltonian, secular_params,
                          thermal_polarization)
from .system import FieldConfig, Nucleus, SpinSystem, load_system
from .tensors import RankTwoTensor

__all__ = [
    "B0_DEFAULT", "GAMMA_13C", "GAMMA_1H",
    "FieldConfig", "Nucleus", "RankTwoTensor", "SecularParams", "SpinSystem",
    "build_full_hamiltonian", "build_secular_hamiltonian", "load_system",
    "secular_params", "thermal_polarization",
]

__version__ = "0.1.0"
