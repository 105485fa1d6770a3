#ifndef FILTERLAB_SIM_HPP
#define FILTERLAB_SIM_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "filterlab/core_filter.hpp"
#include "filterlab/noise.hpp"
#include "filterlab/rng.hpp"

namespace filterlab {

/// Each regressor x(tau) is a fresh vector of independent N(0, variance) entries.
struct WhiteGaussianInput {
    double variance = 1.0;
};

/// Regressors are sliding windows over a recorded signal: x(tau) = [s(tau+L-1), ..., s(tau)].
struct SignalInput {
    std::vector<double> signal;
    std::string source;
};

using InputModel = std::variant<WhiteGaussianInput, SignalInput>;

enum class AlgorithmKind { Tacldm, Lms, Gdtls };

std::string_view to_string(AlgorithmKind kind);
/// "tacldm" | "lms" | "gdtls"; throws UsageError otherwise.
AlgorithmKind parse_algorithm(std::string_view name);

struct AlgorithmSpec {
    std::string label;
    AlgorithmKind kind = AlgorithmKind::Tacldm;
    FilterParams params;
};

struct ScenarioConfig {
    Eigen::Index filter_length = 9;
    std::size_t n_samples = 3000;
    std::size_t n_runs = 100;
    std::uint64_t seed = 1;
    InputModel input_model = WhiteGaussianInput{};
    NoiseSpec input_noise = NoiseSpec::gaussian(0.1);
    NoiseSpec output_noise = NoiseSpec::gaussian(0.1);
    std::vector<AlgorithmSpec> algorithms;
    /// The true weights flip sign for tau >= this index.
    std::optional<std::size_t> tracking_flip_at;
    std::size_t steady_window = 500;
    /// Stream indices of the runs; empty means 0 .. n_runs-1. When given it must hold n_runs
    /// distinct values, and its order does not affect the result.
    std::vector<std::uint64_t> run_indices;
    /// Worker cap; 0 picks FILTERLAB_THREADS or the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

/// One step of the errors-in-variables model with the clean pair kept for inspection.
struct EivStep {
    Sample sample;
    Vector clean_input;
    double clean_desired = 0.0;
    bool output_impulse = false;
};

struct TrajectoryResult {
    std::string label;
    /// Per-iteration E|w(tau) - w_o(tau)|^2, averaged over surviving runs.
    std::vector<double> msd;
    /// 10 log10(msd / |w_o|^2); +inf when every run diverged.
    std::vector<double> nmsd_db;
    double steady_state_msd = 0.0;
    double steady_state_db = 0.0;
    std::size_t runs = 0;
    std::size_t diverged_runs = 0;
    /// More than 10% of the runs diverged.
    bool divergence_flagged = false;
    /// A-priori error e(tau) of the lowest-indexed run; the residual echo in the AEC setting.
    std::vector<double> residual;
};

using MonteCarloResult = std::map<std::string, TrajectoryResult>;

/// Unit-scale default system: every tap equal to 1/sqrt(2L), so |w_o|^2 = 1/2.
Vector default_true_weights(Eigen::Index length);

/// Exponentially decaying random impulse response with unit norm.
Vector synthetic_echo_path(Eigen::Index length, std::uint64_t seed);

/// True weights in effect at iteration tau (negated after a tracking flip).
Vector true_weights_at(const Vector& true_weights, const ScenarioConfig& config, std::size_t tau);

std::vector<EivStep> eiv_generate(const Vector& true_weights, const ScenarioConfig& config, Rng& rng);

/// 10 log10(|w - w_o|^2 / |w_o|^2). Returns -infinity when w == w_o exactly.
double nmsd(const Vector& weights, const Vector& true_weights);

/// dB of the mean linear NMSD over `window` samples starting at `start`.
double window_nmsd_db(const TrajectoryResult& result, double true_norm_sq, std::size_t start, std::size_t window);

/// First iteration whose NMSD falls below threshold_db.
std::optional<std::size_t> iterations_to(const TrajectoryResult& result, double threshold_db);

/// Runs every algorithm over n_runs independent realizations. Run r uses stream seed
/// seed XOR r and all algorithms in a run see the same realization. Results are identical
/// for any worker count and any ordering of run_indices.
MonteCarloResult run_monte_carlo(const Vector& true_weights, const ScenarioConfig& config);

enum class SweepParameter { Gamma, Mu };

SweepParameter parse_sweep_parameter(std::string_view name);

/// One Monte Carlo run per value with the parameter applied to `algorithm_label`
/// (or to every TACLDM filter when the label is empty).
std::vector<TrajectoryResult> sweep(SweepParameter parameter, const std::vector<double>& values,
                                    const Vector& true_weights, const ScenarioConfig& base,
                                    const std::string& algorithm_label = {});

/// Echo cancellation: regressors are sliding windows of `speech`, the echo path is the true
/// system. Requires speech.size() >= n_samples + L where L = echo_path.size().
MonteCarloResult aec_scenario(const std::vector<double>& speech, const Vector& echo_path, ScenarioConfig config);

unsigned resolve_worker_count(unsigned requested);

}  // namespace filterlab

#endif  // FILTERLAB_SIM_HPP
