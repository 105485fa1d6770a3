#ifndef FILTERLAB_THEORY_HPP
#define FILTERLAB_THEORY_HPP

#include "filterlab/core_filter.hpp"

namespace filterlab {

/// Ground truth for the closed-form predictors: true weights, clean-input covariance R,
/// input and output noise variances.
struct SystemSpec {
    Vector true_weights;
    Matrix input_covariance;
    double input_noise_var = 0.1;
    double output_noise_var = 0.1;

    /// R = input_var * I.
    static SystemSpec white(const Vector& true_weights, double input_var, double input_noise_var,
                            double output_noise_var);

    /// Throws ParameterError unless R is symmetric positive definite and both variances are positive.
    void validate() const;
    Eigen::Index length() const { return true_weights.size(); }
    double epsilon() const { return output_noise_var / input_noise_var; }
    double aug_norm_sq() const { return true_weights.squaredNorm() + epsilon(); }
    /// tr(R) / L, the per-tap input power.
    double input_power() const;
};

struct StabilityBounds {
    double mean_bound = 0.0;
    double msq_bound = 0.0;
    double combined = 0.0;
};

struct MsdPrediction {
    Matrix hessian;
    Matrix grad_noise_cov;
    Matrix transition;
    double msd = 0.0;
    /// Spectral radius of I + mu H; below one when the mean recursion is stable.
    double mean_spectral_radius = 0.0;
    /// ||(I - F) q - vec(I)|| after the solve.
    double residual = 0.0;
};

/// R + sigma_i^2 (I - w_o w_o^T / |w_bar_o|^2), shared by the Hessian and the noise covariance.
Matrix bracket_matrix(const SystemSpec& spec);

/// Hessian of the expected cost at the true weights; negative definite.
Matrix hessian_at_optimum(const SystemSpec& spec, double gamma);

/// Largest step keeping every mode of the mean-weight recursion contracting, i.e. 2 / |lambda_min(H)|.
double mean_step_bound(const SystemSpec& spec, double gamma);

/// Mean-square step bound 16 gamma^3 |w_bar|^4 / (L sx^2 |w_bar|^2 + so^2 + |w_o|^2 (L-1) si^2).
double msq_step_bound(const SystemSpec& spec, double gamma, double input_var, Eigen::Index length);
double msq_step_bound(const SystemSpec& spec, double gamma);

StabilityBounds combined_step_bound(const SystemSpec& spec, double gamma, double input_var, Eigen::Index length);
StabilityBounds combined_step_bound(const SystemSpec& spec, double gamma);

/// Covariance M of the gradient noise at the optimum.
Matrix gradient_noise_covariance(const SystemSpec& spec, double gamma);

/// Steady-state E|w - w_o|^2 = mu^2 vec(M)^T (I - F)^{-1} vec(I), F = (I + mu H) kron (I + mu H).
///
/// mu = 0 yields msd = 0 without a solve. Throws StabilityBoundaryError when (I - F) is
/// singular and UsageError when L^2 > 4096.
MsdPrediction steady_state_msd(const SystemSpec& spec, double gamma, double mu);

}  // namespace filterlab

#endif  // FILTERLAB_THEORY_HPP
