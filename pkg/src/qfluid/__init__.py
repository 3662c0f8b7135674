"""qfluid: a numerical laboratory that turns a classical 1D fluid into a
quantum-like system by feeding a generalized quantum force, computed from the
fluid's own density, back into its Euler/continuity evolution.

The flagship experiment is the non-spreading oscillating wave packet in a
harmonic trap, including its robustness to density noise, the effect of an
isentropic pressure term, and cross-validation against a direct solver of
the equivalent generalized Schrodinger equation.
"""

from .core import (
    FluidState,
    PhysicalParams,
    RunConfig,
    SpatialGrid,
    init_coherent_state,
    make_grid,
    mass,
)
from .diagnostics import (
    RunRecord,
    center_energy_estimate,
    center_error,
    dispersion_error,
    l2_density_distance,
    smoothness,
)
from .forces import (
    DegenerateDensityError,
    ForceField,
    Moments,
    external_force,
    fd_log_gradient,
    fd_quantum_force,
    fd_quantum_potential,
    gaussian_fit_force,
    moments,
    pressure_force,
)
from .integrator import StepOutcome, build_force_field, lax_step, perturb_density, run
from .oracle import OracleWave
from .presets import default_config, default_grid, default_params, preset, preset_names
from .reference import WaveState, cn_step, fluid_to_wave, run_reference, wave_to_fluid

__version__ = "0.1.0"

__all__ = [
    "FluidState",
    "PhysicalParams",
    "RunConfig",
    "SpatialGrid",
    "init_coherent_state",
    "make_grid",
    "mass",
    "RunRecord",
    "center_energy_estimate",
    "center_error",
    "dispersion_error",
    "l2_density_distance",
    "smoothness",
    "DegenerateDensityError",
    "ForceField",
    "Moments",
    "external_force",
    "fd_log_gradient",
    "fd_quantum_force",
    "fd_quantum_potential",
    "gaussian_fit_force",
    "moments",
    "pressure_force",
    "StepOutcome",
    "build_force_field",
    "lax_step",
    "perturb_density",
    "run",
    "OracleWave",
    "default_config",
    "default_grid",
    "default_params",
    "preset",
    "preset_names",
    "WaveState",
    "cn_step",
    "fluid_to_wave",
    "run_reference",
    "wave_to_fluid",
]
