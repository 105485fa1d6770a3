#ifndef FILTERLAB_CORE_FILTER_HPP
#define FILTERLAB_CORE_FILTER_HPP

#include <cstdint>

#include <Eigen/Core>

namespace filterlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Step size, logistic kernel width and noise-variance ratio sigma_o^2 / sigma_i^2.
struct FilterParams {
    double mu = 0.1;
    double gamma = 1.0;
    double epsilon = 1.0;

    /// Throws ParameterError unless mu >= 0 and gamma, epsilon > 0.
    void validate() const;
};

struct FilterState {
    Vector weights;
    std::uint64_t iteration = 0;

    static FilterState zeros(Eigen::Index length);
    Eigen::Index length() const { return weights.size(); }
};

/// One noisy observation pair (input regressor and desired sample).
struct Sample {
    Vector noisy_input;
    double noisy_desired = 0.0;
};

/// The augmented weight [sqrt(eps), -w^T]^T with its squared norm cached.
class AugmentedWeight {
public:
    AugmentedWeight(const Vector& weights, double epsilon);

    const Vector& vector() const { return vector_; }
    double norm_sq() const { return norm_sq_; }
    double norm() const { return norm_; }

private:
    Vector vector_;
    double norm_sq_;
    double norm_;
};

AugmentedWeight augmented_weight(const Vector& weights, double epsilon);

/// e = d - w^T x on the noisy pair.
double prediction_error(const Sample& sample, const FilterState& state);

/// Logistic kernel psi = 1 / (2 gamma (cosh(eta) + 1)), eta = e / (gamma |w_bar|).
/// Lies in (0, 1/(4 gamma)] and is evaluated without forming cosh, so huge |eta| is safe.
double psi(double error, const AugmentedWeight& aug, double gamma);

/// arctan(psi): the per-sample objective maximised by the filter.
double instantaneous_cost(double error, const AugmentedWeight& aug, double gamma);

/// Scalar sinh(eta) / (2 gamma^2 |w_bar|^2 (cosh(eta) + 1)^2 (1 + psi^2)).
///
/// Uses a = exp(-|eta|), for which
///   sinh(eta) / (cosh(eta) + 1)^2 = sign(eta) * 2 a (1 - a) / (1 + a)^3
///   psi                           = a / (gamma (1 + a)^2)
/// so nothing overflows and the value decays to exactly 0 for very large |eta|.
double shape_factor(double error, const AugmentedWeight& aug, double gamma);

/// Instantaneous gradient of instantaneous_cost with respect to the weights:
/// shape_factor * (|w_bar| x + e w / |w_bar|).
Vector instantaneous_gradient(const Sample& sample, const FilterState& state, const FilterParams& params);

/// One gradient-ascent step w + mu * gradient. Throws DivergenceError on non-finite weights.
FilterState tacldm_update(const Sample& sample, const FilterState& state, const FilterParams& params);

namespace detail {
void check_length(const Sample& sample, const FilterState& state);
void check_finite(const FilterState& state);
}  // namespace detail

}  // namespace filterlab

#endif  // FILTERLAB_CORE_FILTER_HPP
