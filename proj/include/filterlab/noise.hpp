#ifndef FILTERLAB_NOISE_HPP
#define FILTERLAB_NOISE_HPP

#include <string>
#include <variant>

#include "filterlab/core_filter.hpp"
#include "filterlab/rng.hpp"

namespace filterlab {

/// Generalized Gaussian density alpha / (2 beta Gamma(1/alpha)) exp(-(|v|/beta)^alpha).
/// alpha = 2 is Gaussian, alpha = 1 Laplacian.
struct GGParams {
    double alpha = 2.0;
    double variance = 1.0;
    double beta = 1.0;

    /// Builds parameters with beta chosen so the density has the requested variance.
    static GGParams from_variance(double alpha, double variance);
    double excess_kurtosis() const;
};

/// beta = sqrt(variance * Gamma(1/alpha) / Gamma(3/alpha)).
double gg_scale_from_variance(double alpha, double variance);

namespace noise {

struct None {};

struct GeneralizedGaussian {
    GGParams params;
};

/// Uniform on [-half_width, half_width].
struct Uniform {
    double half_width = 1.0;
};

/// +level or -level with probability 1/2 each.
struct Binary {
    double level = 1.0;
};

using Base = std::variant<None, GeneralizedGaussian, Uniform, Binary>;

/// Draw from `base`, then with probability `prob` add a zero-mean Gaussian impulse whose
/// standard deviation is impulse_std_ratio times the base standard deviation.
struct ImpulsiveMixture {
    Base base;
    double prob = 0.01;
    double impulse_std_ratio = 100.0;
};

}  // namespace noise

/// Zero-mean noise process. A mixture's base is never itself a mixture (enforced by type).
class NoiseSpec {
public:
    using Variant = std::variant<noise::None, noise::GeneralizedGaussian, noise::Uniform, noise::Binary,
                                 noise::ImpulsiveMixture>;

    NoiseSpec() = default;
    explicit NoiseSpec(Variant v);

    static NoiseSpec none();
    static NoiseSpec gaussian(double variance);
    static NoiseSpec laplacian(double variance);
    static NoiseSpec generalized_gaussian(double alpha, double variance);
    static NoiseSpec uniform(double half_width);
    static NoiseSpec binary(double level);
    static NoiseSpec impulsive_mixture(const NoiseSpec& base, double prob, double impulse_std_ratio = 100.0);

    const Variant& variant() const { return v_; }
    bool is_mixture() const { return std::holds_alternative<noise::ImpulsiveMixture>(v_); }

    /// Variance of the full process, impulses included.
    double variance() const;
    /// Variance of the background process (the base of a mixture); this is what sigma_i^2 /
    /// sigma_o^2 refer to when computing the noise-variance ratio.
    double nominal_variance() const;
    /// Analytic excess kurtosis of the full process.
    double excess_kurtosis() const;
    std::string describe() const;

private:
    Variant v_{noise::None{}};
};

struct NoiseDraw {
    double value = 0.0;
    bool impulse = false;
};

/// Gamma-power transform: beta * sign * G^(1/alpha), G ~ Gamma(1/alpha, 1).
double sample_gg(const GGParams& params, Rng& rng);
NoiseDraw draw_noise(const NoiseSpec& spec, Rng& rng);
double sample_noise(const NoiseSpec& spec, Rng& rng);
Vector sample_noise_vector(const NoiseSpec& spec, Eigen::Index length, Rng& rng);

}  // namespace filterlab

#endif  // FILTERLAB_NOISE_HPP
