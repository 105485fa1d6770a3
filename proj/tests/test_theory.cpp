#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "filterlab/error.hpp"
#include "filterlab/theory.hpp"
#include "oracles.hpp"

using namespace filterlab;

namespace {

double rel_err(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

SystemSpec random_spec(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(1, 8);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> var(0.01, 1.0);
    const int L = len(rng);
    Matrix A(L, L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) A(i, j) = n01(rng);
    SystemSpec s;
    s.true_weights = Vector(L);
    for (int i = 0; i < L; ++i) s.true_weights(i) = n01(rng);
    s.input_covariance = A * A.transpose() / L + 0.1 * Matrix::Identity(L, L);
    s.input_noise_var = var(rng);
    s.output_noise_var = var(rng);
    return s;
}

}  // namespace

TEST_CASE("hessian examples") {
    const auto zero = SystemSpec::white(Vector::Zero(2), 1.0, 0.1, 0.1);
    const Matrix H = hessian_at_optimum(zero, 1.0);
    const double expected = -(17.1 / 144.5) * 1.1;
    CHECK(H.isApprox(expected * Matrix::Identity(2, 2), 1e-12));
    CHECK(expected == doctest::Approx(-0.130173).epsilon(1e-5));

    const auto spec = SystemSpec::white(vec2(-0.6, 0.8), 1.0, 0.1, 0.1);
    const Matrix oracle_h = oracle::hessian_elementwise(spec.true_weights, spec.input_covariance, 0.1, 0.1, 1.4);
    CHECK(rel_err(hessian_at_optimum(spec, 1.4), oracle_h) < 1e-12);
}

TEST_CASE("mean step bound") {
    const auto zero = SystemSpec::white(Vector::Zero(2), 1.0, 0.1, 0.1);
    CHECK(mean_step_bound(zero, 1.0) == doctest::Approx(289.0 / 18.81).epsilon(1e-12));
    CHECK(mean_step_bound(zero, 1.0) == doctest::Approx(15.364).epsilon(1e-4));

    auto doubled = zero;
    doubled.input_covariance *= 2.0;
    const double lam = 2.0 + 0.1;
    const double c = (16.0 + 1.0 + 0.1) / (128.0 * std::pow(1.0 + 1.0 / 16.0, 2));
    CHECK(mean_step_bound(doubled, 1.0) == doctest::Approx(2.0 / (c * lam)).epsilon(1e-12));

    auto noiseless_input = SystemSpec::white(Vector::Zero(2), 1.0, 1e-12, 1e-12);
    auto noiseless_doubled = noiseless_input;
    noiseless_doubled.input_covariance *= 2.0;
    CHECK(mean_step_bound(noiseless_doubled, 1.0) ==
          doctest::Approx(mean_step_bound(noiseless_input, 1.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("mean-square step bound") {
    const auto zero9 = SystemSpec::white(Vector::Zero(9), 1.0, 0.1, 0.1);
    CHECK(msq_step_bound(zero9, 1.0) == doctest::Approx(16.0 / 9.1).epsilon(1e-12));
    CHECK(msq_step_bound(zero9, 2.0) == doctest::Approx(8.0 * 16.0 / 9.1).epsilon(1e-12));

    const auto spec = SystemSpec::white(vec2(-0.6, 0.8), 1.0, 0.1, 0.1);
    CHECK(msq_step_bound(spec, 1.0) == doctest::Approx(64.0 / 4.2).epsilon(1e-12));
    CHECK(msq_step_bound(spec, 1.0, 1.0, 2) == doctest::Approx(64.0 / 4.2).epsilon(1e-12));
}

TEST_CASE("combined step bound") {
    const auto zero9 = SystemSpec::white(Vector::Zero(9), 1.0, 0.1, 0.1);
    const auto b = combined_step_bound(zero9, 1.0);
    CHECK(b.combined == doctest::Approx(16.0 / 9.1).epsilon(1e-12));
    CHECK(b.combined == b.msq_bound);
    CHECK(b.combined <= b.mean_bound);
}

TEST_CASE("gradient noise covariance") {
    const auto spec = SystemSpec::white(vec2(-0.6, 0.8), 1.0, 0.1, 0.1);
    const Matrix M = gradient_noise_covariance(spec, 1.4);
    const Matrix H = hessian_at_optimum(spec, 1.4);
    const Matrix ratio = M * H.inverse();
    CHECK((ratio - ratio(0, 0) * Matrix::Identity(2, 2)).norm() <= 1e-10 * std::fabs(ratio(0, 0)));
    CHECK(ratio(0, 0) < 0.0);

    const auto zero = SystemSpec::white(Vector::Zero(3), 1.0, 0.1, 0.1);
    const Matrix M0 = gradient_noise_covariance(zero, 1.0);
    CHECK(M0.isApprox(M0(0, 0) * Matrix::Identity(3, 3), 1e-14));
    CHECK(M0(0, 0) > 0.0);

    const Vector wo = Vector::Constant(9, 1.0 / std::sqrt(18.0));
    const auto desk = SystemSpec::white(wo, 1.0, 0.1, 0.1);
    const Matrix oracle_m = oracle::noise_cov_elementwise(wo, desk.input_covariance, 0.1, 0.1, 1.4);
    CHECK(rel_err(gradient_noise_covariance(desk, 1.4), oracle_m) < 1e-12);
}

TEST_CASE("random specs: definiteness and bound identities") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> gam(0.3, 3.0);
    for (int i = 0; i < 100; ++i) {
        const auto spec = random_spec(rng);
        const double gamma = gam(rng);
        const Matrix H = hessian_at_optimum(spec, gamma);
        const Matrix M = gradient_noise_covariance(spec, gamma);
        const Matrix B = bracket_matrix(spec);
        const Eigen::SelfAdjointEigenSolver<Matrix> eh(H);
        const Eigen::SelfAdjointEigenSolver<Matrix> em(M);
        const Eigen::SelfAdjointEigenSolver<Matrix> eb(B);
        CHECK(eh.eigenvalues().maxCoeff() < 0.0);
        CHECK(em.eigenvalues().minCoeff() > 0.0);
        CHECK(eb.eigenvalues().minCoeff() > 0.0);

        const double lmin = eh.eigenvalues().minCoeff();
        CHECK(std::fabs(mean_step_bound(spec, gamma) * std::fabs(lmin) - 2.0) < 1e-10);

        const auto b = combined_step_bound(spec, gamma);
        CHECK(b.combined <= b.mean_bound);
        CHECK(b.combined <= b.msq_bound);

        const double mu = 0.9 * b.combined;
        const auto p = steady_state_msd(spec, gamma, mu);
        CHECK(p.mean_spectral_radius < 1.0);
        CHECK(p.residual < 1e-8);
        CHECK(p.msd > 0.0);
    }
}

TEST_CASE("steady-state msd") {
    SUBCASE("scalar closed form") {
        Vector wo(1);
        wo << 0.7;
        const auto spec = SystemSpec::white(wo, 1.0, 0.1, 0.2);
        for (double mu : {0.05, 0.5, 2.0}) {
            const auto p = steady_state_msd(spec, 1.3, mu);
            const double expected = oracle::scalar_msd(mu, p.hessian(0, 0), p.grad_noise_cov(0, 0));
            CHECK(p.msd == doctest::Approx(expected).epsilon(1e-10));
        }
    }

    SUBCASE("small step limit") {
        const auto spec = SystemSpec::white(Vector::Constant(3, 0.4), 1.0, 0.1, 0.1);
        CHECK(steady_state_msd(spec, 1.0, 0.0).msd == 0.0);
        const double r1 = steady_state_msd(spec, 1.0, 1e-3).msd / 1e-3;
        const double r2 = steady_state_msd(spec, 1.0, 1e-5).msd / 1e-5;
        const double r3 = steady_state_msd(spec, 1.0, 1e-7).msd / 1e-7;
        CHECK(std::fabs(r2 - r3) < std::fabs(r1 - r2));
        CHECK(r3 == doctest::Approx(r2).epsilon(1e-3));
        // Leading order is mu tr(M (-2H)^{-1}) for commuting M and H.
        const Matrix H = hessian_at_optimum(spec, 1.0);
        const Matrix M = gradient_noise_covariance(spec, 1.0);
        CHECK(r3 == doctest::Approx((M * (-2.0 * H).inverse()).trace()).epsilon(1e-5));
    }

    SUBCASE("grows with mu and stays well solved") {
        const Vector wo = Vector::Constant(9, 1.0 / std::sqrt(18.0));
        const auto spec = SystemSpec::white(wo, 1.0, 0.1, 0.1);
        double prev = 0.0;
        for (double mu : {0.1, 0.3, 1.0, 3.0}) {
            const auto p = steady_state_msd(spec, 1.4, mu);
            CHECK(p.msd > prev);
            CHECK(p.residual < 1e-8);
            prev = p.msd;
        }
    }

    SUBCASE("errors") {
        const auto spec = SystemSpec::white(Vector::Zero(1), 1.0, 0.1, 0.1);
        const double h = hessian_at_optimum(spec, 1.0)(0, 0);
        CHECK_THROWS_AS(steady_state_msd(spec, 1.0, -2.0 / h), StabilityBoundaryError);
        CHECK_THROWS_AS(steady_state_msd(spec, 1.0, -1.0), ParameterError);
        const auto big = SystemSpec::white(Vector::Zero(65), 1.0, 0.1, 0.1);
        CHECK_THROWS_AS(steady_state_msd(big, 1.0, 0.1), UsageError);
    }
}

TEST_CASE("spec validation") {
    auto spec = SystemSpec::white(vec2(0.1, 0.2), 1.0, 0.1, 0.1);
    spec.input_covariance(0, 1) = 2.0;
    spec.input_covariance(1, 0) = 2.0;
    CHECK_THROWS_AS(hessian_at_optimum(spec, 1.0), ParameterError);
    spec.input_covariance(1, 0) = 0.0;
    CHECK_THROWS_AS(hessian_at_optimum(spec, 1.0), ParameterError);
    CHECK_THROWS_AS(SystemSpec::white(vec2(0, 0), 1.0, 0.0, 0.1).validate(), ParameterError);
    CHECK_THROWS_AS(hessian_at_optimum(SystemSpec::white(vec2(0, 0), 1.0, 0.1, 0.1), 0.0), ParameterError);
}
