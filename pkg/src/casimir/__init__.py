"""Thermal Casimir pressures, free energies and entropies (Lifshitz formalism).

Library surface:

- casimir.dielectric: permittivity models on the imaginary frequency axis
- casimir.lifshitz: three-layer pressure / free energy / entropy engines
- casimir.multilayer: slab-in-cavity (five-layer) pressure
- casimir.numerics: quadrature, Matsubara summation, Euler-Maclaurin
- casimir.cli: the `casimir` command-line front end
"""

__version__ = "0.1.0"

from .constants import ideal_casimir_pressure
from .dielectric import (Drude, Ideal, PermittivityTable, Plasma, Tabulated,
                         Vacuum, eps_imag, load_table, serialize_table,
                         surface_impedance, zero_mode_limit)
from .lifshitz import (PlateConfig, PressureResult, ThermoResult,
                       ZeroModePolicy, entropy, free_energy, ideal_pressure,
                       matsubara_summand, mim_corrections, pressure,
                       reflection_coefficients, sphere_plate_force, thermo)
from .multilayer import (FiveLayerConfig, five_layer_integrand,
                         five_layer_pressure, ideal_reference)
from .numerics import (ConvergenceError, QuadratureSettings, SumDiagnostics,
                       adaptive_quad, euler_maclaurin, guarded_derivative,
                       matsubara_sum)

__all__ = [
    "__version__",
    "ideal_casimir_pressure",
    "Drude", "Ideal", "PermittivityTable", "Plasma", "Tabulated", "Vacuum",
    "eps_imag", "load_table", "serialize_table", "surface_impedance",
    "zero_mode_limit",
    "PlateConfig", "PressureResult", "ThermoResult", "ZeroModePolicy",
    "entropy", "free_energy", "ideal_pressure", "matsubara_summand",
    "mim_corrections", "pressure", "reflection_coefficients",
    "sphere_plate_force", "thermo",
    "FiveLayerConfig", "five_layer_integrand", "five_layer_pressure",
    "ideal_reference",
    "ConvergenceError", "QuadratureSettings", "SumDiagnostics",
    "adaptive_quad", "euler_maclaurin", "guarded_derivative", "matsubara_sum",
]
