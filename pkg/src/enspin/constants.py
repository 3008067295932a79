"""Physical constants and default experiment parameters.

Internal unit conventions used throughout the package:

- Hamiltonians are in angular frequency units (rad/s), i.e. energies divided
  by the reduced Planck constant.
- Hyperfine couplings are input/output in MHz (ordinary frequency).
- Magnetic fields are tesla internally; the CLI accepts gauss.
- Gyromagnetic ratios are rad s^-1 T^-1.
"""

import math

# CODATA 2018
MU_B = 9.2740100783e-24        # Bohr magneton, J/T
H_PLANCK = 6.62607015e-34      # Planck constant, J s
HBAR = H_PLANCK / (2 * math.pi)
K_B = 1.380649e-23             # Boltzmann constant, J/K

# Nuclear gyromagnetic ratios (rad s^-1 T^-1)
GAMMA_1H = 2 * math.pi * 42.577e6
GAMMA_13C = 2 * math.pi * 10.708e6

GAMMAS_BY_ISOTOPE = {"1H": GAMMA_1H, "13C": GAMMA_13C}

G_FREE = 2.0023                # free-electron g used for the resonance field

# Default static field: resonance of a free-electron spin at 10 GHz (~3568 G)
MW_FREQ_DEFAULT = 10.0e9       # Hz
B0_DEFAULT = H_PLANCK * MW_FREQ_DEFAULT / (G_FREE * MU_B)   # tesla

GAUSS = 1e-4                   # tesla per gauss

# Electron relaxation presets (temperature: T1); T2/T2* are temperature
# independent in the measured range.
T1_PRESETS = {"295K": 27e-6, "43K": 2.6e-3, "22K": 11e-3}
T2_DEFAULT = 5e-6
T2_STAR_DEFAULT = 28e-9


def nu_larmor_mhz(gamma: float, b0: float) -> float:
    """Nuclear Larmor frequency gamma*B0/2pi in MHz."""
    return gamma * b0 / (2e6 * math.pi)
