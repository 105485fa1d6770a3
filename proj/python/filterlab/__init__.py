from ._filterlab import (
    AlgorithmSpec,
    ConfigError,
    DivergenceError,
    FilterParams,
    IoError,
    MsdPrediction,
    NoiseSpec,
    ParameterError,
    StabilityBoundaryError,
    StabilityBounds,
    SystemSpec,
    TrajectoryResult,
    UsageError,
    combined_step_bound,
    default_true_weights,
    gdtls_update,
    gg_scale_from_variance,
    gradient_noise_covariance,
    hessian_at_optimum,
    instantaneous_cost,
    instantaneous_gradient,
    lms_update,
    matched_gdtls_step,
    mean_step_bound,
    msq_step_bound,
    nmsd,
    psi,
    run_command,
    run_monte_carlo,
    shape_factor,
    steady_state_msd,
    synthetic_echo_path,
    tacldm_update,
)

__version__ = "0.1.0"
