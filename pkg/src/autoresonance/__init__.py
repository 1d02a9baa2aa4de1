"""Simulation and verification toolkit for autoresonant soliton growth.

The package integrates the family of driven, non-autonomous nonlinear
Schrodinger models that govern envelope autoresonance under a chirped drive:
the original-frame equation, its rescaled (sigma, z) form, the unperturbed
cubic limit, the scalar primary-resonance ODE, and the perturbed sine-Gordon
equation the envelope model reduces from.  On top of the solvers it provides
the soliton-ansatz asymptotics (locked-parameter algebra, conservation-law
functionals, dissipation balance) and the diagnostics used to test growth
and phase-locking claims numerically.
"""

from .numerics import (
    ComplexField,
    GridSpec,
    TailTruncationWarning,
    integrate_line,
    make_grid,
    sech_cos_integral,
    sech_tanh_sin_integral,
    second_derivative,
)
from .models import (
    ForcingSpec,
    FrameMap,
    ModelSpec,
    SolitonParams,
    h_field,
    map_field_original_to_scaled,
    map_field_scaled_to_original,
    map_sigma_to_tau,
    map_tau_to_sigma,
    residual_original,
    residual_scaled,
    sine_gordon_scaling,
    soliton_field,
)
from .solvers import StepperConfig, TrajectoryRecord, rk4_step, run_trajectory, strang_step
from .diagnostics import (
    FitResult,
    extract_soliton_params,
    fit_power_law,
    lock_angle,
    mass,
    momentum,
)
from .asymptotics import (
    LockedSolution,
    branch_reference_angle,
    dissipation_balance,
    dissipation_equilibrium_eta,
    dressed_locked_profile,
    h0_quadrature,
    h1_quadrature,
    locked_run_forcing,
    locked_soliton_init,
    predict_parameter_laws,
    quasi_static_lock_angle,
    solve_locked,
)

__all__ = [
    "ComplexField",
    "GridSpec",
    "TailTruncationWarning",
    "integrate_line",
    "make_grid",
    "sech_cos_integral",
    "sech_tanh_sin_integral",
    "second_derivative",
    "ForcingSpec",
    "FrameMap",
    "ModelSpec",
    "SolitonParams",
    "h_field",
    "map_field_original_to_scaled",
    "map_field_scaled_to_original",
    "map_sigma_to_tau",
    "map_tau_to_sigma",
    "residual_original",
    "residual_scaled",
    "sine_gordon_scaling",
    "soliton_field",
    "StepperConfig",
    "TrajectoryRecord",
    "rk4_step",
    "run_trajectory",
    "strang_step",
    "FitResult",
    "extract_soliton_params",
    "fit_power_law",
    "lock_angle",
    "mass",
    "momentum",
    "LockedSolution",
    "branch_reference_angle",
    "dissipation_balance",
    "dissipation_equilibrium_eta",
    "dressed_locked_profile",
    "h0_quadrature",
    "h1_quadrature",
    "locked_run_forcing",
    "locked_soliton_init",
    "predict_parameter_laws",
    "quasi_static_lock_angle",
    "solve_locked",
]

__version__ = "0.1.0"
