#ifndef FILTERLAB_BASELINES_HPP
#define FILTERLAB_BASELINES_HPP

#include "filterlab/core_filter.hpp"

namespace filterlab {

/// w <- w + mu e x.
FilterState lms_update(const Sample& sample, const FilterState& state, double mu);

/// Gradient-descent total least squares: w <- w + mu (e x + e^2 w / |w_bar|^2) / |w_bar|^2,
/// the negative gradient of e^2 / (2 |w_bar|^2). Only params.mu and params.epsilon are used.
FilterState gdtls_update(const Sample& sample, const FilterState& state, const FilterParams& params);

/// GDTLS step with the same small-error behaviour as a TACLDM filter with (mu, gamma).
///
/// Near the optimum the TACLDM gradient is the GDTLS gradient scaled by
/// 1 / (8 gamma^3 (1 + 1/(16 gamma^2))), so this step gives both filters the same initial
/// convergence rate.
double matched_gdtls_step(double tacldm_mu, double gamma);

}  // namespace filterlab

#endif  // FILTERLAB_BASELINES_HPP
