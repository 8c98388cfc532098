"""Pseudospectral solver for the 2D Kuramoto-Sivashinsky equation."""

__version__ = "0.1.0"

from .spectral import (
    ConfigError,
    DealiasMask,
    GridSpec,
    LinearSymbol,
    NonlinearTerm,
    WavenumberGrid,
    build_dealias_mask,
    build_linear_symbol,
    build_physical_grid,
    build_wavenumber_grid,
    forward_transform,
    inverse_transform,
    nonlinear_term,
)
from .imex import ImexCoefficients, ImexStepper, StepState, imex_step, tabulated_coefficients
from .solver import DivergenceError, SolverConfig, Trajectory, initial_condition, run
from .analysis import (
    ErrorPair,
    ConvergenceReport,
    estimate_order,
    length_scale_sweep,
    linear_exact_solution,
    relative_errors,
    spatial_convergence_study,
    spectral_resample,
    temporal_convergence_study,
    time_window_study,
)
