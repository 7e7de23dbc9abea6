"""Monte Carlo random-vortex simulator for 3D incompressible viscous flow.

The flow is represented by stochastic particle trajectories carrying the
initial vorticity, each paired with a 3x3 gauge matrix that transports
vorticity along the path (vortex stretching). Velocity and strain are
recovered by mollified singular-kernel sums over the ensemble, and the
coupled system is closed by Picard iteration.

Public surface: kernels (pair sums), ensemble containers, the solver,
analytic benchmark fields, and validation tooling. ``vortexmc.cli`` is the
command-line front end.
"""

__version__ = "0.1.0"

from .config import ConfigError, RunConfig, parse_config
from .ensemble import (NoiseStore, ParticleSet, TimeGrid, build_particles,
                       sample_noise)
from .fields import (isotropic_initial, isotropic_particles, lamb_oseen_exact,
                     lamb_oseen_particles, reconstruct_strain,
                     reconstruct_velocity, taylor_green_initial,
                     taylor_green_particles, trace_streamlines)
from .kernels import (biot_savart_kernel, levi_civita, strain_kernel,
                      strain_pair_sum, velocity_pair_sum)
from .solver import (BlowUpError, SolverConfig, Solution, interaction_strain,
                     interaction_velocity, solve)
from .validation import (ComparisonReport, EmptyBinError, LatticeSpec,
                         duality_check, fk_error_slope, fk_oracle_check,
                         l1_error, load_lamb_oseen_table,
                         load_taylor_green_table)

__all__ = [
    "__version__",
    "BlowUpError", "ComparisonReport", "ConfigError", "EmptyBinError",
    "LatticeSpec", "NoiseStore", "ParticleSet", "RunConfig", "Solution",
    "SolverConfig", "TimeGrid",
    "biot_savart_kernel", "build_particles", "duality_check",
    "fk_error_slope", "fk_oracle_check", "interaction_strain",
    "interaction_velocity", "isotropic_initial", "isotropic_particles",
    "l1_error", "lamb_oseen_exact", "lamb_oseen_particles", "levi_civita",
    "load_lamb_oseen_table", "load_taylor_green_table", "parse_config",
    "reconstruct_strain", "reconstruct_velocity", "sample_noise", "solve",
    "strain_kernel", "strain_pair_sum", "taylor_green_initial",
    "taylor_green_particles", "trace_streamlines", "velocity_pair_sum",
]
