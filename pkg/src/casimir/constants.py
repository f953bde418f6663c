"""Physical constants (CODATA 2018) and unit conversion factors.

Single source of truth for every conversion in the package.  All internal
computations are SI: rad/s for frequencies, metres, kelvin, pascal, J/m^2.
"""

import math

HBAR = 1.054571817e-34      # J s
C_LIGHT = 2.99792458e8      # m/s
K_BOLTZMANN = 1.380649e-23  # J/K
E_CHARGE = 1.602176634e-19  # C

HBAR_C = HBAR * C_LIGHT     # J m

# zeta[rad/s] = E[eV] * e / hbar
EV_TO_RAD_PER_S = E_CHARGE / HBAR

# Apery's constant zeta(3)
ZETA3 = 1.2020569031595943

PI = math.pi

CONSTANTS_VERSION = "CODATA2018"


def ev_to_rad_per_s(energy_ev: float) -> float:
    """Photon energy in eV to angular frequency in rad/s."""
    return energy_ev * EV_TO_RAD_PER_S


def thermal_wavenumber(temperature: float) -> float:
    """k_B T / (hbar c) in 1/m; the inverse thermal length."""
    return K_BOLTZMANN * temperature / HBAR_C


def matsubara_frequency(temperature: float, m: int) -> float:
    """m-th Matsubara angular frequency 2 pi m k_B T / hbar in rad/s."""
    return 2.0 * PI * m * K_BOLTZMANN * temperature / HBAR


def ideal_casimir_pressure(gap: float) -> float:
    """Zero-temperature pressure between perfect conductors, -pi^2 hbar c / (240 a^4).

    Negative: the force is attractive.
    """
    if gap <= 0.0:
        raise ValueError("gap must be positive")
    return -PI**2 * HBAR_C / (240.0 * gap**4)
