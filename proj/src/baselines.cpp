#include "filterlab/baselines.hpp"

#include <cmath>

#include "filterlab/error.hpp"

namespace filterlab {

FilterState lms_update(const Sample& sample, const FilterState& state, double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ParameterError("step size mu must be finite and non-negative");
    }
    const double e = prediction_error(sample, state);
    FilterState next{state.weights + (mu * e) * sample.noisy_input, state.iteration + 1};
    detail::check_finite(next);
    return next;
}

FilterState gdtls_update(const Sample& sample, const FilterState& state, const FilterParams& params) {
    params.validate();
    const double e = prediction_error(sample, state);
    const double n2 = params.epsilon + state.weights.squaredNorm();
    FilterState next{state.weights + (params.mu / n2) * (e * sample.noisy_input + (e * e / n2) * state.weights),
                     state.iteration + 1};
    detail::check_finite(next);
    return next;
}

double matched_gdtls_step(double tacldm_mu, double gamma) {
    if (!(gamma > 0.0)) {
        throw ParameterError("kernel gamma must be positive");
    }
    return tacldm_mu / (8.0 * gamma * gamma * gamma + 0.5 * gamma);
}

}  // namespace filterlab
