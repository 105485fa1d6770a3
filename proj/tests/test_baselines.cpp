#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "filterlab/baselines.hpp"
#include "filterlab/error.hpp"
#include "oracles.hpp"

using namespace filterlab;

TEST_CASE("lms examples") {
    Vector x(2);
    x << 1.0, 0.0;
    const auto next = lms_update(Sample{x, 1.0}, FilterState::zeros(2), 0.5);
    CHECK(next.weights(0) == 0.5);
    CHECK(next.weights(1) == 0.0);
    CHECK(next.iteration == 1);

    const FilterState s{Vector::Constant(2, 0.3), 0};
    CHECK(lms_update(Sample{x, 0.3}, s, 0.5).weights == s.weights);
    CHECK(lms_update(Sample{x, 9.0}, s, 0.0).weights == s.weights);
}

TEST_CASE("lms reports divergence") {
    Vector x = Vector::Constant(2, 1e200);
    CHECK_THROWS_AS(lms_update(Sample{x, 1e200}, FilterState::zeros(2), 1.0), DivergenceError);
    CHECK_THROWS_AS(lms_update(Sample{x, 0.0}, FilterState::zeros(2), -1.0), ParameterError);
}

TEST_CASE("gdtls fixed point and large epsilon") {
    const FilterParams params{0.2, 1.0, 1.0};
    Vector x(3);
    x << 0.1, -0.4, 1.2;
    const FilterState s{Vector::Constant(3, 0.25), 0};
    CHECK(gdtls_update(Sample{x, s.weights.dot(x)}, s, params).weights == s.weights);

    const Sample sample{x, 2.0};
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1.0, 1e2, 1e4, 1e6}) {
        const double step = (gdtls_update(sample, s, FilterParams{0.2, 1.0, eps}).weights - s.weights).norm();
        CHECK(step < prev);
        prev = step;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("gdtls step equals the negative gradient of the tls objective") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> eps_dist(0.1, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int L = 1 + trial % 7;
        Vector x(L), w(L);
        for (int i = 0; i < L; ++i) {
            x(i) = n01(rng);
            w(i) = n01(rng);
        }
        const double d = n01(rng);
        const double eps = eps_dist(rng);
        const double mu = 0.1;
        const FilterState s{w, 0};
        const Vector step = (gdtls_update(Sample{x, d}, s, FilterParams{mu, 1.0, eps}).weights - w) / mu;
        const auto f = [&](const Vector& ww) { return oracle::tls_objective(ww, x, d, eps); };
        const Vector fd = -oracle::central_gradient(f, w, 1e-6);
        CHECK((step - fd).norm() <= 1e-5 * std::max(fd.norm(), 1e-12));
    }
}

TEST_CASE("matched gdtls step") {
    CHECK(matched_gdtls_step(0.3, 1.0) == doctest::Approx(0.3 / 8.5));
    CHECK(matched_gdtls_step(0.1, 0.5) == doctest::Approx(0.1 / 1.25));
    CHECK_THROWS_AS(matched_gdtls_step(0.1, 0.0), ParameterError);
}
