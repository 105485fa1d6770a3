#include "filterlab/core_filter.hpp"

#include <cmath>
#include <string>

#include "filterlab/error.hpp"

namespace filterlab {

namespace {

struct KernelTerms {
    double ratio;  // sinh(eta) / (cosh(eta) + 1)^2
    double psi;
};

KernelTerms kernel_terms(double error, const AugmentedWeight& aug, double gamma) {
    const double eta = error / (gamma * aug.norm());
    const double abs_eta = std::fabs(eta);
    const double a = std::exp(-abs_eta);
    const double one_minus_a = -std::expm1(-abs_eta);
    const double one_plus_a = 1.0 + a;
    const double magnitude = 2.0 * a * one_minus_a / (one_plus_a * one_plus_a * one_plus_a);
    return {std::copysign(magnitude, eta), a / (gamma * one_plus_a * one_plus_a)};
}

}  // namespace

void FilterParams::validate() const {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ParameterError("step size mu must be finite and non-negative, got " + std::to_string(mu));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ParameterError("kernel gamma must be positive, got " + std::to_string(gamma));
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ParameterError("noise-variance ratio epsilon must be positive, got " + std::to_string(epsilon));
    }
}

FilterState FilterState::zeros(Eigen::Index length) {
    return FilterState{Vector::Zero(length), 0};
}

AugmentedWeight::AugmentedWeight(const Vector& weights, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ParameterError("noise-variance ratio epsilon must be positive, got " + std::to_string(epsilon));
    }
    if (!weights.allFinite()) {
        throw ParameterError("augmented_weight: weights must be finite");
    }
    vector_.resize(weights.size() + 1);
    vector_(0) = std::sqrt(epsilon);
    vector_.tail(weights.size()) = -weights;
    norm_sq_ = epsilon + weights.squaredNorm();
    norm_ = std::sqrt(norm_sq_);
}

AugmentedWeight augmented_weight(const Vector& weights, double epsilon) {
    return AugmentedWeight(weights, epsilon);
}

namespace detail {

void check_length(const Sample& sample, const FilterState& state) {
    if (sample.noisy_input.size() != state.weights.size()) {
        throw UsageError("input length " + std::to_string(sample.noisy_input.size()) +
                         " does not match filter length " + std::to_string(state.weights.size()));
    }
}

void check_finite(const FilterState& state) {
    if (!state.weights.allFinite()) {
        throw DivergenceError(state.iteration);
    }
}

}  // namespace detail

double prediction_error(const Sample& sample, const FilterState& state) {
    detail::check_length(sample, state);
    return sample.noisy_desired - state.weights.dot(sample.noisy_input);
}

double psi(double error, const AugmentedWeight& aug, double gamma) {
    return kernel_terms(error, aug, gamma).psi;
}

double instantaneous_cost(double error, const AugmentedWeight& aug, double gamma) {
    return std::atan(psi(error, aug, gamma));
}

double shape_factor(double error, const AugmentedWeight& aug, double gamma) {
    const auto k = kernel_terms(error, aug, gamma);
    return k.ratio / (2.0 * gamma * gamma * aug.norm_sq() * (1.0 + k.psi * k.psi));
}

Vector instantaneous_gradient(const Sample& sample, const FilterState& state, const FilterParams& params) {
    const double e = prediction_error(sample, state);
    const AugmentedWeight aug(state.weights, params.epsilon);
    const double s = shape_factor(e, aug, params.gamma);
    if (s == 0.0) {
        return Vector::Zero(state.weights.size());
    }
    return s * (aug.norm() * sample.noisy_input + (e / aug.norm()) * state.weights);
}

FilterState tacldm_update(const Sample& sample, const FilterState& state, const FilterParams& params) {
    params.validate();
    FilterState next{state.weights + params.mu * instantaneous_gradient(sample, state, params),
                     state.iteration + 1};
    detail::check_finite(next);
    return next;
}

}  // namespace filterlab
