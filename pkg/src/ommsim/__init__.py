"""Gaussian-state toolkit for an atom-ensemble-coupled opto-magnomechanical system.

Pipeline: a validated parameter set (:mod:`ommsim.params`) feeds the classical
steady state (:mod:`ommsim.steady`), which parameterizes the linearized drift
and diffusion matrices and the steady covariance matrix
(:mod:`ommsim.linmodel`); bipartite entanglement is then read off as the
logarithmic negativity (:mod:`ommsim.entanglement`). :mod:`ommsim.sweeps`
wraps the pipeline into deterministic parameter grids, and :mod:`ommsim.cli`
exposes everything as a command line tool.
"""

__version__ = "0.1.0"

from .constants import (
    BOLTZMANN,
    GYROMAGNETIC_RATIO,
    HBAR,
    SPEED_OF_LIGHT,
    TWO_PI,
)
from .entanglement import (
    MODES,
    PairEntanglement,
    UnphysicalStateError,
    entanglement_report,
    log_negativity,
    pair_entanglement,
    reduced_cm,
    symplectic_eigenvalues,
    symplectic_form,
)
from .linmodel import (
    QUADRATURES,
    NumericalError,
    UnstableSystemError,
    build_diffusion,
    build_drift,
    drift_matrix,
    dump_matrix,
    evolve_cm,
    is_stable,
    load_matrix,
    solve_lyapunov,
)
from .params import (
    Model,
    ParameterError,
    PhysicalParams,
    drive_amplitude_from_power,
    rabi_from_field,
    thermal_occupation,
)
from .presets import default_params, drive_power_params
from .steady import (
    BistabilityError,
    ConvergenceError,
    OccupancyReport,
    SteadyState,
    excitation_numbers,
    solve_steady_state,
)
from .sweeps import (
    DetuningOptimum,
    GridPoint,
    OptimizationError,
    SweepAxis,
    SweepResult,
    ValidityReport,
    evaluate_point,
    optimal_cavity_detuning,
    sweep1d,
    sweep2d,
    temperature_sweep,
    validity_report,
)

__all__ = [
    "__version__",
    "TWO_PI", "HBAR", "BOLTZMANN", "SPEED_OF_LIGHT", "GYROMAGNETIC_RATIO",
    "PhysicalParams", "Model", "ParameterError",
    "thermal_occupation", "drive_amplitude_from_power", "rabi_from_field",
    "SteadyState", "OccupancyReport", "ConvergenceError", "BistabilityError",
    "solve_steady_state", "excitation_numbers",
    "QUADRATURES", "drift_matrix", "build_drift", "build_diffusion",
    "is_stable", "solve_lyapunov", "evolve_cm", "dump_matrix", "load_matrix",
    "UnstableSystemError", "NumericalError",
    "MODES", "reduced_cm", "log_negativity", "pair_entanglement",
    "entanglement_report", "symplectic_eigenvalues", "symplectic_form",
    "PairEntanglement", "UnphysicalStateError",
    "SweepAxis", "SweepResult", "GridPoint", "DetuningOptimum",
    "ValidityReport", "OptimizationError",
    "evaluate_point", "sweep1d", "sweep2d", "temperature_sweep",
    "optimal_cavity_detuning", "validity_report",
    "default_params", "drive_power_params",
]
