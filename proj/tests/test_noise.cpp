#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "filterlab/error.hpp"
#include "filterlab/noise.hpp"
#include "noise_checks.hpp"
#include "oracles.hpp"

using namespace filterlab;

namespace {

std::vector<double> draws(const NoiseSpec& spec, std::uint64_t seed, std::size_t n = 1000000) {
    Rng rng(mix_seed(seed));
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_noise(spec, rng);
    return xs;
}

}  // namespace

TEST_CASE("gg scale from variance") {
    CHECK(gg_scale_from_variance(2.0, 1.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(gg_scale_from_variance(1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(gg_scale_from_variance(2.0, 0.1) == doctest::Approx(std::sqrt(0.2)));
    CHECK_THROWS_AS(gg_scale_from_variance(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(gg_scale_from_variance(2.0, -1.0), ParameterError);

    const auto p = GGParams::from_variance(6.0, 2.0 / 3.0);
    const auto m = oracle::moments(draws(NoiseSpec::generalized_gaussian(6.0, 2.0 / 3.0), 3));
    CHECK(p.beta == doctest::Approx(gg_scale_from_variance(6.0, 2.0 / 3.0)));
    CHECK(std::fabs(m.variance - 2.0 / 3.0) <= 0.02 * 2.0 / 3.0);
}

TEST_CASE("sample_gg moments") {
    const auto g01 = oracle::moments(draws(NoiseSpec::gaussian(0.1), 1));
    CHECK(std::fabs(g01.mean) <= 3.0 * std::sqrt(0.1) / 1e3);
    CHECK(g01.variance >= 0.098);
    CHECK(g01.variance <= 0.102);

    const auto lap = oracle::moments(draws(NoiseSpec::laplacian(1.0), 2));
    CHECK(lap.excess_kurtosis >= 2.7);
    CHECK(lap.excess_kurtosis <= 3.3);

    const auto g1 = oracle::moments(draws(NoiseSpec::gaussian(1.0), 4));
    CHECK(g1.excess_kurtosis >= -0.1);
    CHECK(g1.excess_kurtosis <= 0.1);
}

TEST_CASE("gg shape sweep matches the analytic excess kurtosis") {
    for (double alpha : {1.0, 1.56, 2.0, 2.34, 6.0}) {
        CAPTURE(alpha);
        const double expected =
            std::tgamma(5.0 / alpha) * std::tgamma(1.0 / alpha) / std::pow(std::tgamma(3.0 / alpha), 2) - 3.0;
        CHECK(GGParams::from_variance(alpha, 1.0).excess_kurtosis() == doctest::Approx(expected).epsilon(1e-12));
        const auto m = oracle::moments(draws(NoiseSpec::generalized_gaussian(alpha, 1.0), 100 + alpha * 10));
        CHECK(std::fabs(m.excess_kurtosis - expected) <= std::max(0.1, 0.1 * std::fabs(expected)));
    }
}

TEST_CASE("uniform, binary and mixture samplers") {
    const auto bin = draws(NoiseSpec::binary(0.1), 5);
    CHECK(std::all_of(bin.begin(), bin.end(), [](double x) { return x == 0.1 || x == -0.1; }));
    CHECK(std::fabs(oracle::moments(bin).mean) <= 0.001);

    const auto uni = draws(NoiseSpec::uniform(std::sqrt(2.0)), 6);
    const auto um = oracle::moments(uni);
    CHECK(um.variance >= 0.653);
    CHECK(um.variance <= 0.680);
    CHECK(*std::max_element(uni.begin(), uni.end()) <= std::sqrt(2.0));
    CHECK(*std::min_element(uni.begin(), uni.end()) >= -std::sqrt(2.0));

    const auto mix = NoiseSpec::impulsive_mixture(NoiseSpec::gaussian(0.1), 0.01, 100.0);
    Rng rng(mix_seed(7));
    std::size_t impulses = 0;
    const std::size_t n = 1000000;
    for (std::size_t i = 0; i < n; ++i) impulses += draw_noise(mix, rng).impulse ? 1 : 0;
    const double freq = static_cast<double>(impulses) / static_cast<double>(n);
    CHECK(freq >= 0.009);
    CHECK(freq <= 0.011);
}

TEST_CASE("noise spec analytic moments") {
    CHECK(NoiseSpec::gaussian(0.3).variance() == doctest::Approx(0.3));
    CHECK(NoiseSpec::uniform(std::sqrt(2.0)).variance() == doctest::Approx(2.0 / 3.0));
    CHECK(NoiseSpec::binary(0.1).variance() == doctest::Approx(0.01));
    CHECK(NoiseSpec::uniform(1.0).excess_kurtosis() == doctest::Approx(-1.2));
    CHECK(NoiseSpec::binary(1.0).excess_kurtosis() == doctest::Approx(-2.0));
    CHECK(NoiseSpec::none().variance() == 0.0);

    const auto mix = NoiseSpec::impulsive_mixture(NoiseSpec::gaussian(0.1), 0.01, 100.0);
    CHECK(mix.nominal_variance() == doctest::Approx(0.1));
    CHECK(mix.variance() == doctest::Approx(0.1 + 0.01 * 1e4 * 0.1));
    CHECK(mix.is_mixture());
    CHECK_FALSE(NoiseSpec::gaussian(0.1).is_mixture());
}

TEST_CASE("noise spec validation") {
    CHECK_THROWS_AS(NoiseSpec::gaussian(0.0), ParameterError);
    CHECK_THROWS_AS(NoiseSpec::uniform(-1.0), ParameterError);
    CHECK_THROWS_AS(NoiseSpec::binary(0.0), ParameterError);
    const auto base = NoiseSpec::gaussian(0.1);
    CHECK_THROWS_AS(NoiseSpec::impulsive_mixture(base, 0.0), ParameterError);
    CHECK_THROWS_AS(NoiseSpec::impulsive_mixture(base, 1.0), ParameterError);
    CHECK_THROWS_AS(NoiseSpec::impulsive_mixture(base, 0.01, 0.0), ParameterError);
    CHECK_THROWS_AS(NoiseSpec::impulsive_mixture(NoiseSpec::impulsive_mixture(base, 0.01), 0.01), ParameterError);
}

TEST_CASE("sample_noise_vector shape, support and determinism") {
    Rng a(mix_seed(9));
    Rng b(mix_seed(9));
    const Vector va = sample_noise_vector(NoiseSpec::gaussian(0.1), 9, a);
    const Vector vb = sample_noise_vector(NoiseSpec::gaussian(0.1), 9, b);
    CHECK(va.size() == 9);
    CHECK(va.allFinite());
    CHECK(va == vb);

    Rng c(mix_seed(10));
    const Vector bin = sample_noise_vector(NoiseSpec::binary(0.1), 100000, c);
    CHECK((bin.array().abs() == 0.1).all());

    Rng d(mix_seed(11));
    CHECK(sample_noise_vector(NoiseSpec::none(), 4, d).isZero(0.0));
}

TEST_CASE("every standard spec is calibrated") {
    std::uint64_t seed = 1000;
    for (const auto& c : noise_checks::standard_specs()) {
        CAPTURE(c.name);
        const auto r = noise_checks::check(c, seed++);
        CAPTURE(r.got.mean);
        CAPTURE(r.got.variance);
        CAPTURE(r.got.excess_kurtosis);
        CAPTURE(r.target_kurtosis);
        CHECK(r.mean_ok);
        CHECK(r.variance_ok);
        CHECK(r.kurtosis_ok);
    }
}
