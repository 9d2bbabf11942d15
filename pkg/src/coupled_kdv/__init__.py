"""Darboux-transform solutions and an explicit finite-difference solver for
coupled KdV-MKdV systems."""

from .darboux import (
    AnalyticFamily,
    Classification,
    SingularPointError,
    SpectralParams,
    WaveConstants,
    classify,
    compound_dt,
    reduced_solution,
    singular_loci,
    two_component,
)
from .scheme import (
    BlowUpError,
    Boundary,
    ConfigError,
    FieldState,
    GridSpec,
    RealityError,
    TimeSpec,
    Trajectory,
    run,
    sample_initial,
    step,
)
from .stability import BlowupMonitor, StabilityReport, advise_tau, exact_step_norm, growth_exponent
from .system_model import PRESETS, SystemSpec, SystemSpecError, make_system, preset, validate
from .verify import (
    ConvergenceReport,
    conservation_series,
    continuum_residual,
    convergence_study,
    grid_norm,
    percentage_error,
    residual_slope,
)

__version__ = "0.1.0"
