"""Convergence rates of Dirichlet-Neumann coupling for FVM-FEM heat transfer."""

from .discretization import (AssemblyError, CoupledSystem, GridSpec1D, SubdomainBlocks, assemble,
                             build_fem_blocks, build_fvm_blocks)
from .dn1d import (DNConfig, IterationTrace, RateEstimationError, StateVector, dn_iterate,
                   dn_time_step, monolithic_step, observed_rate, reference_rate)
from .experiments import (SpecError, SweepSpec, asymptotics_table, emit_plots, fsi_estimate,
                          run_sweep, sweep_csv)
from .materials import Material, load_materials, material_from, preset, steel_at
from .model2d import (GridSpec2D, State2D, build_fem_2d, build_fvm_2d, dn_time_step_2d,
                      mode_rates, monolithic_step_2d)
from .theory import (DegenerateParameterError, RateInputs, RateReport, rate_report,
                     semidiscrete_beta, sigma_exact, sigma_schur, spatial_limit, temporal_limit)
from .tridiag import SingularMatrixError, TridiagonalMatrix, solve_tridiagonal, thomas

__version__ = "0.1.0"

__all__ = [
    "AssemblyError", "CoupledSystem", "DNConfig", "DegenerateParameterError", "GridSpec1D",
    "GridSpec2D", "IterationTrace", "Material", "RateEstimationError", "RateInputs", "RateReport",
    "SingularMatrixError", "SpecError", "State2D", "StateVector", "SubdomainBlocks", "SweepSpec",
    "TridiagonalMatrix", "assemble", "asymptotics_table", "build_fem_2d", "build_fem_blocks",
    "build_fvm_2d", "build_fvm_blocks", "dn_iterate", "dn_time_step", "dn_time_step_2d",
    "emit_plots", "fsi_estimate", "load_materials", "material_from", "mode_rates",
    "monolithic_step", "monolithic_step_2d", "observed_rate", "preset", "rate_report",
    "reference_rate", "run_sweep", "semidiscrete_beta", "sigma_exact", "sigma_schur",
    "solve_tridiagonal", "spatial_limit", "steel_at", "sweep_csv", "temporal_limit", "thomas",
]
