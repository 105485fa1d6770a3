#include "filterlab/noise.hpp"

#include <cmath>
#include <sstream>

#include "filterlab/error.hpp"

namespace filterlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ParameterError(std::string(what) + " must be positive and finite");
    }
}

double base_variance(const noise::Base& b) {
    return std::visit(overloaded{
                          [](const noise::None&) { return 0.0; },
                          [](const noise::GeneralizedGaussian& g) { return g.params.variance; },
                          [](const noise::Uniform& u) { return u.half_width * u.half_width / 3.0; },
                          [](const noise::Binary& b) { return b.level * b.level; },
                      },
                      b);
}

// Fourth central moment of the base process.
double base_fourth_moment(const noise::Base& b) {
    return std::visit(overloaded{
                          [](const noise::None&) { return 0.0; },
                          [](const noise::GeneralizedGaussian& g) {
                              const double v = g.params.variance;
                              return (g.params.excess_kurtosis() + 3.0) * v * v;
                          },
                          [](const noise::Uniform& u) { return std::pow(u.half_width, 4) / 5.0; },
                          [](const noise::Binary& b) { return std::pow(b.level, 4); },
                      },
                      b);
}

double draw_base(const noise::Base& b, Rng& rng) {
    return std::visit(overloaded{
                          [](const noise::None&) { return 0.0; },
                          [&rng](const noise::GeneralizedGaussian& g) { return sample_gg(g.params, rng); },
                          [&rng](const noise::Uniform& u) {
                              std::uniform_real_distribution<double> dist(-u.half_width, u.half_width);
                              return dist(rng);
                          },
                          [&rng](const noise::Binary& b) {
                              std::bernoulli_distribution coin(0.5);
                              return coin(rng) ? b.level : -b.level;
                          },
                      },
                      b);
}

noise::Base to_base(const NoiseSpec& spec) {
    return std::visit(overloaded{
                          [](const noise::ImpulsiveMixture&) -> noise::Base {
                              throw ParameterError("impulsive mixture base must not itself be a mixture");
                          },
                          [](const auto& v) -> noise::Base { return v; },
                      },
                      spec.variant());
}

NoiseSpec from_base(const noise::Base& b) {
    return std::visit([](const auto& v) { return NoiseSpec(NoiseSpec::Variant{v}); }, b);
}

}  // namespace

double gg_scale_from_variance(double alpha, double variance) {
    require_positive(alpha, "generalized Gaussian shape alpha");
    require_positive(variance, "noise variance");
    return std::sqrt(variance) * std::exp(0.5 * (std::lgamma(1.0 / alpha) - std::lgamma(3.0 / alpha)));
}

GGParams GGParams::from_variance(double alpha, double variance) {
    return GGParams{alpha, variance, gg_scale_from_variance(alpha, variance)};
}

double GGParams::excess_kurtosis() const {
    return std::exp(std::lgamma(5.0 / alpha) + std::lgamma(1.0 / alpha) - 2.0 * std::lgamma(3.0 / alpha)) - 3.0;
}

NoiseSpec::NoiseSpec(Variant v) : v_(std::move(v)) {}

NoiseSpec NoiseSpec::none() { return NoiseSpec(noise::None{}); }

NoiseSpec NoiseSpec::gaussian(double variance) { return generalized_gaussian(2.0, variance); }

NoiseSpec NoiseSpec::laplacian(double variance) { return generalized_gaussian(1.0, variance); }

NoiseSpec NoiseSpec::generalized_gaussian(double alpha, double variance) {
    return NoiseSpec(noise::GeneralizedGaussian{GGParams::from_variance(alpha, variance)});
}

NoiseSpec NoiseSpec::uniform(double half_width) {
    require_positive(half_width, "uniform half_width");
    return NoiseSpec(noise::Uniform{half_width});
}

NoiseSpec NoiseSpec::binary(double level) {
    require_positive(level, "binary level");
    return NoiseSpec(noise::Binary{level});
}

NoiseSpec NoiseSpec::impulsive_mixture(const NoiseSpec& base, double prob, double impulse_std_ratio) {
    if (!(prob > 0.0 && prob < 1.0)) {
        throw ParameterError("impulse probability must lie in (0, 1)");
    }
    require_positive(impulse_std_ratio, "impulse_std_ratio");
    return NoiseSpec(noise::ImpulsiveMixture{to_base(base), prob, impulse_std_ratio});
}

double NoiseSpec::nominal_variance() const {
    return std::visit(overloaded{
                          [](const noise::ImpulsiveMixture& m) { return base_variance(m.base); },
                          [](const auto& v) { return base_variance(noise::Base{v}); },
                      },
                      v_);
}

double NoiseSpec::variance() const {
    return std::visit(overloaded{
                          [](const noise::ImpulsiveMixture& m) {
                              const double vb = base_variance(m.base);
                              return vb + m.prob * m.impulse_std_ratio * m.impulse_std_ratio * vb;
                          },
                          [](const auto& v) { return base_variance(noise::Base{v}); },
                      },
                      v_);
}

double NoiseSpec::excess_kurtosis() const {
    return std::visit(
        overloaded{
            [](const noise::None&) { return 0.0; },
            [](const noise::ImpulsiveMixture& m) {
                // X = B + I * Z, I ~ Bernoulli(p), Z ~ N(0, s^2), all independent.
                const double vb = base_variance(m.base);
                const double s2 = m.impulse_std_ratio * m.impulse_std_ratio * vb;
                const double p = m.prob;
                const double var = vb + p * s2;
                const double m4 = base_fourth_moment(m.base) + 6.0 * vb * p * s2 + 3.0 * p * s2 * s2;
                return m4 / (var * var) - 3.0;
            },
            [](const auto& v) {
                const noise::Base b{v};
                const double var = base_variance(b);
                return base_fourth_moment(b) / (var * var) - 3.0;
            },
        },
        v_);
}

std::string NoiseSpec::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&os](const noise::None&) { os << "none"; },
                   [&os](const noise::GeneralizedGaussian& g) {
                       os << "generalized_gaussian(alpha=" << g.params.alpha << ", variance=" << g.params.variance
                          << ")";
                   },
                   [&os](const noise::Uniform& u) { os << "uniform(half_width=" << u.half_width << ")"; },
                   [&os](const noise::Binary& b) { os << "binary(level=" << b.level << ")"; },
                   [&os](const noise::ImpulsiveMixture& m) {
                       os << "impulsive_mixture(base=" << from_base(m.base).describe()
                          << ", prob=" << m.prob << ", impulse_std_ratio=" << m.impulse_std_ratio << ")";
                   },
               },
               v_);
    return os.str();
}

double sample_gg(const GGParams& params, Rng& rng) {
    std::gamma_distribution<double> gamma(1.0 / params.alpha, 1.0);
    std::bernoulli_distribution coin(0.5);
    const double magnitude = params.beta * std::pow(gamma(rng), 1.0 / params.alpha);
    return coin(rng) ? magnitude : -magnitude;
}

NoiseDraw draw_noise(const NoiseSpec& spec, Rng& rng) {
    return std::visit(overloaded{
                          [&rng](const noise::ImpulsiveMixture& m) {
                              NoiseDraw d{draw_base(m.base, rng), false};
                              std::bernoulli_distribution hit(m.prob);
                              if (hit(rng)) {
                                  std::normal_distribution<double> impulse(
                                      0.0, m.impulse_std_ratio * std::sqrt(base_variance(m.base)));
                                  d.value += impulse(rng);
                                  d.impulse = true;
                              }
                              return d;
                          },
                          [&rng](const auto& v) { return NoiseDraw{draw_base(noise::Base{v}, rng), false}; },
                      },
                      spec.variant());
}

double sample_noise(const NoiseSpec& spec, Rng& rng) { return draw_noise(spec, rng).value; }

Vector sample_noise_vector(const NoiseSpec& spec, Eigen::Index length, Rng& rng) {
    if (length <= 0) {
        throw UsageError("noise vector length must be positive");
    }
    Vector out(length);
    for (Eigen::Index i = 0; i < length; ++i) {
        out(i) = sample_noise(spec, rng);
    }
    return out;
}

}  // namespace filterlab
