"""Physical constants (SI) and fixed material conventions.

All frequencies inside the package are angular (rad/s). Configuration
layers are responsible for applying the 2*pi normalization exactly once;
nothing in here ever multiplies user data by 2*pi implicitly.
"""

import math

TWO_PI = 2.0 * math.pi

# 2018 CODATA / SI exact defining constants.
PLANCK = 6.62607015e-34  # J s
HBAR = PLANCK / TWO_PI  # J s
BOLTZMANN = 1.380649e-23  # J / K
SPEED_OF_LIGHT = 299792458.0  # m / s

# Electron-spin gyromagnetic ratio used for the microwave Rabi frequency,
# fixed at 28 GHz/T (angular).
GYROMAGNETIC_RATIO = TWO_PI * 28e9  # rad / (s T)

# Ferrimagnetic garnet defaults: net spin density of the Fe(3+) lattice and
# the single-ion ground-state spin number.
YIG_SPIN_DENSITY = 4.22e27  # 1 / m^3
YIG_SPIN_NUMBER = 2.5
