"""Error and entanglement bounds for a particle reflecting off a dynamical wall."""

from ._core import (
    CollisionParams,
    NumericError,
    Regime,
    collision_params,
    collision_params_from_fraction,
    entanglement_report,
    error_asymptotic,
    initial_state,
    kernel_params,
    largest_eigenvalue,
    mismatch_penalty,
    optimal_lambda,
    optimal_spreads,
    overlap_amplitude,
    overlap_defect,
    post_collision_state,
    run_cli,
    schmidt_weights,
    spectral_params,
    spectrum,
    thermal,
    verify,
)

__version__ = "0.1.0"
