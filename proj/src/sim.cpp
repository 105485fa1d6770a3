#include "filterlab/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

#include "filterlab/baselines.hpp"
#include "filterlab/error.hpp"

namespace filterlab {

namespace {

constexpr std::size_t kRunsPerBlock = 8;

// Produces EIV steps one at a time so the Monte Carlo loop never stores a realization.
class EivSource {
public:
    EivSource(const Vector& true_weights, const ScenarioConfig& config, Rng& rng)
        : wo_(true_weights), config_(config), rng_(rng) {}

    EivStep next(std::size_t tau) {
        EivStep step;
        step.clean_input = clean_input(tau);
        const Vector u = sample_noise_vector(config_.input_noise, config_.filter_length, rng_);
        const NoiseDraw v = draw_noise(config_.output_noise, rng_);
        const bool flipped = config_.tracking_flip_at && tau >= *config_.tracking_flip_at;
        const double d = wo_.dot(step.clean_input);
        step.clean_desired = flipped ? -d : d;
        step.sample.noisy_input = step.clean_input + u;
        step.sample.noisy_desired = step.clean_desired + v.value;
        step.output_impulse = v.impulse;
        return step;
    }

private:
    Vector clean_input(std::size_t tau) {
        const auto L = config_.filter_length;
        if (const auto* white = std::get_if<WhiteGaussianInput>(&config_.input_model)) {
            std::normal_distribution<double> dist(0.0, std::sqrt(white->variance));
            Vector x(L);
            for (Eigen::Index i = 0; i < L; ++i) {
                x(i) = dist(rng_);
            }
            return x;
        }
        const auto& s = std::get<SignalInput>(config_.input_model).signal;
        Vector x(L);
        const std::size_t newest = tau + static_cast<std::size_t>(L) - 1;
        for (Eigen::Index i = 0; i < L; ++i) {
            x(i) = s[newest - static_cast<std::size_t>(i)];
        }
        return x;
    }

    const Vector& wo_;
    const ScenarioConfig& config_;
    Rng& rng_;
};

struct AlgoAccumulator {
    std::vector<double> msd_sum;
    std::size_t survived = 0;
    std::size_t diverged = 0;
};

struct BlockResult {
    std::vector<AlgoAccumulator> per_algorithm;
};

FilterState step_filter(const AlgorithmSpec& algo, const Sample& sample, const FilterState& state) {
    switch (algo.kind) {
        case AlgorithmKind::Tacldm:
            return tacldm_update(sample, state, algo.params);
        case AlgorithmKind::Lms:
            return lms_update(sample, state, algo.params.mu);
        case AlgorithmKind::Gdtls:
            return gdtls_update(sample, state, algo.params);
    }
    throw UsageError("unknown algorithm kind");
}

void run_block(const Vector& wo, const ScenarioConfig& config, const std::vector<std::uint64_t>& ids,
               std::size_t block, BlockResult& out, std::vector<std::vector<double>>* residual_out) {
    const std::size_t n = config.n_samples;
    const std::size_t n_alg = config.algorithms.size();
    out.per_algorithm.assign(n_alg, AlgoAccumulator{std::vector<double>(n, 0.0), 0, 0});

    const std::size_t first = block * kRunsPerBlock;
    const std::size_t last = std::min(ids.size(), first + kRunsPerBlock);
    const Vector neg_wo = -wo;

    std::vector<double> run_msd(n * n_alg);
    for (std::size_t run = first; run < last; ++run) {
        Rng rng = make_stream(config.seed, ids[run]);
        EivSource source(wo, config, rng);
        std::vector<FilterState> states(n_alg, FilterState::zeros(config.filter_length));
        std::vector<bool> alive(n_alg, true);
        const bool keep_residual = run == 0 && residual_out != nullptr;

        for (std::size_t tau = 0; tau < n; ++tau) {
            const EivStep step = source.next(tau);
            const bool flipped = config.tracking_flip_at && tau >= *config.tracking_flip_at;
            const Vector& target = flipped ? neg_wo : wo;
            for (std::size_t a = 0; a < n_alg; ++a) {
                if (!alive[a]) {
                    continue;
                }
                if (keep_residual) {
                    (*residual_out)[a][tau] = prediction_error(step.sample, states[a]);
                }
                try {
                    states[a] = step_filter(config.algorithms[a], step.sample, states[a]);
                } catch (const DivergenceError&) {
                    alive[a] = false;
                    continue;
                }
                run_msd[a * n + tau] = (states[a].weights - target).squaredNorm();
            }
        }

        for (std::size_t a = 0; a < n_alg; ++a) {
            auto& acc = out.per_algorithm[a];
            if (!alive[a]) {
                ++acc.diverged;
                continue;
            }
            ++acc.survived;
            for (std::size_t tau = 0; tau < n; ++tau) {
                acc.msd_sum[tau] += run_msd[a * n + tau];
            }
        }
    }
}

}  // namespace

std::string_view to_string(AlgorithmKind kind) {
    switch (kind) {
        case AlgorithmKind::Tacldm:
            return "tacldm";
        case AlgorithmKind::Lms:
            return "lms";
        case AlgorithmKind::Gdtls:
            return "gdtls";
    }
    return "unknown";
}

AlgorithmKind parse_algorithm(std::string_view name) {
    if (name == "tacldm") return AlgorithmKind::Tacldm;
    if (name == "lms") return AlgorithmKind::Lms;
    if (name == "gdtls") return AlgorithmKind::Gdtls;
    throw UsageError("unknown algorithm '" + std::string(name) + "' (expected tacldm, lms or gdtls)");
}

void ScenarioConfig::validate() const {
    if (filter_length < 1) {
        throw UsageError("filter length must be at least 1");
    }
    if (n_runs < 1) {
        throw UsageError("at least one Monte Carlo run is required");
    }
    if (!(steady_window > 0 && steady_window < n_samples)) {
        throw UsageError("steady_window must satisfy 0 < steady_window < n_samples");
    }
    if (!run_indices.empty()) {
        auto sorted = run_indices;
        std::sort(sorted.begin(), sorted.end());
        if (sorted.size() != n_runs || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw UsageError("run_indices must hold n_runs distinct values");
        }
    }
    if (algorithms.empty()) {
        throw UsageError("no algorithms configured");
    }
    for (const auto& a : algorithms) {
        a.params.validate();
    }
    if (const auto* white = std::get_if<WhiteGaussianInput>(&input_model); white && !(white->variance > 0.0)) {
        throw UsageError("white input variance must be positive");
    }
    if (const auto* sig = std::get_if<SignalInput>(&input_model)) {
        const auto needed = n_samples + static_cast<std::size_t>(filter_length);
        if (sig->signal.size() < needed) {
            throw UsageError("input signal has " + std::to_string(sig->signal.size()) + " samples; need at least " +
                             std::to_string(needed));
        }
    }
}

Vector default_true_weights(Eigen::Index length) {
    return Vector::Constant(length, 1.0 / std::sqrt(2.0 * static_cast<double>(length)));
}

Vector synthetic_echo_path(Eigen::Index length, std::uint64_t seed) {
    Rng rng(mix_seed(seed));
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector h(length);
    for (Eigen::Index k = 0; k < length; ++k) {
        h(k) = dist(rng) * std::exp(-0.35 * static_cast<double>(k));
    }
    return h / h.norm();
}

Vector true_weights_at(const Vector& true_weights, const ScenarioConfig& config, std::size_t tau) {
    if (config.tracking_flip_at && tau >= *config.tracking_flip_at) {
        return -true_weights;
    }
    return true_weights;
}

std::vector<EivStep> eiv_generate(const Vector& true_weights, const ScenarioConfig& config, Rng& rng) {
    if (true_weights.size() != config.filter_length) {
        throw UsageError("true weight length does not match filter length");
    }
    EivSource source(true_weights, config, rng);
    std::vector<EivStep> out;
    out.reserve(config.n_samples);
    for (std::size_t tau = 0; tau < config.n_samples; ++tau) {
        out.push_back(source.next(tau));
    }
    return out;
}

double nmsd(const Vector& weights, const Vector& true_weights) {
    if (weights.size() != true_weights.size()) {
        throw UsageError("nmsd: length mismatch");
    }
    const double ref = true_weights.squaredNorm();
    if (!(ref > 0.0)) {
        throw UsageError("nmsd: true weights must be non-zero");
    }
    const double dev = (weights - true_weights).squaredNorm();
    if (dev == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(dev / ref);
}

double window_nmsd_db(const TrajectoryResult& result, double true_norm_sq, std::size_t start, std::size_t window) {
    if (window == 0 || start + window > result.msd.size()) {
        throw UsageError("window_nmsd_db: window out of range");
    }
    double sum = 0.0;
    for (std::size_t i = start; i < start + window; ++i) {
        sum += result.msd[i];
    }
    return 10.0 * std::log10(sum / static_cast<double>(window) / true_norm_sq);
}

std::optional<std::size_t> iterations_to(const TrajectoryResult& result, double threshold_db) {
    for (std::size_t i = 0; i < result.nmsd_db.size(); ++i) {
        if (result.nmsd_db[i] < threshold_db) {
            return i;
        }
    }
    return std::nullopt;
}

unsigned resolve_worker_count(unsigned requested) {
    unsigned n = requested;
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("FILTERLAB_THREADS")) {
            const long cap = std::strtol(env, nullptr, 10);
            if (cap > 0) {
                n = std::min<unsigned>(n, static_cast<unsigned>(cap));
            }
        }
    }
    return std::max(1u, n);
}

MonteCarloResult run_monte_carlo(const Vector& true_weights, const ScenarioConfig& config) {
    config.validate();
    if (true_weights.size() != config.filter_length) {
        throw UsageError("true weight length " + std::to_string(true_weights.size()) +
                         " does not match filter length " + std::to_string(config.filter_length));
    }
    const double ref = true_weights.squaredNorm();
    if (!(ref > 0.0)) {
        throw UsageError("true weights must be non-zero for NMSD");
    }

    std::vector<std::uint64_t> ids = config.run_indices;
    if (ids.empty()) {
        ids.resize(config.n_runs);
        std::iota(ids.begin(), ids.end(), std::uint64_t{0});
    }
    std::sort(ids.begin(), ids.end());

    const std::size_t n = config.n_samples;
    const std::size_t n_alg = config.algorithms.size();
    const std::size_t n_blocks = (config.n_runs + kRunsPerBlock - 1) / kRunsPerBlock;
    std::vector<BlockResult> blocks(n_blocks);
    std::vector<std::vector<double>> residual(n_alg, std::vector<double>(n, 0.0));

    std::atomic<std::size_t> next_block{0};
    auto worker = [&] {
        for (std::size_t b = next_block++; b < n_blocks; b = next_block++) {
            run_block(true_weights, config, ids, b, blocks[b], b == 0 ? &residual : nullptr);
        }
    };
    const unsigned workers = std::min<unsigned>(resolve_worker_count(config.threads), static_cast<unsigned>(n_blocks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(worker);
        }
    }

    MonteCarloResult out;
    for (std::size_t a = 0; a < n_alg; ++a) {
        TrajectoryResult r;
        r.label = config.algorithms[a].label;
        r.runs = config.n_runs;
        r.msd.assign(n, 0.0);
        std::size_t survived = 0;
        for (const auto& block : blocks) {
            const auto& acc = block.per_algorithm[a];
            survived += acc.survived;
            r.diverged_runs += acc.diverged;
            for (std::size_t tau = 0; tau < n; ++tau) {
                r.msd[tau] += acc.msd_sum[tau];
            }
        }
        r.divergence_flagged = 10 * r.diverged_runs > config.n_runs;
        r.nmsd_db.resize(n);
        if (survived == 0) {
            std::fill(r.msd.begin(), r.msd.end(), std::numeric_limits<double>::infinity());
            std::fill(r.nmsd_db.begin(), r.nmsd_db.end(), std::numeric_limits<double>::infinity());
            r.steady_state_msd = r.steady_state_db = std::numeric_limits<double>::infinity();
        } else {
            for (std::size_t tau = 0; tau < n; ++tau) {
                r.msd[tau] /= static_cast<double>(survived);
                r.nmsd_db[tau] = 10.0 * std::log10(r.msd[tau] / ref);
            }
            const std::size_t start = n - config.steady_window;
            double sum = 0.0;
            for (std::size_t tau = start; tau < n; ++tau) {
                sum += r.msd[tau];
            }
            r.steady_state_msd = sum / static_cast<double>(config.steady_window);
            r.steady_state_db = 10.0 * std::log10(r.steady_state_msd / ref);
        }
        r.residual = std::move(residual[a]);
        out.emplace(r.label, std::move(r));
    }
    return out;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "gamma") return SweepParameter::Gamma;
    if (name == "mu") return SweepParameter::Mu;
    throw UsageError("sweep parameter must be 'gamma' or 'mu', got '" + std::string(name) + "'");
}

std::vector<TrajectoryResult> sweep(SweepParameter parameter, const std::vector<double>& values,
                                    const Vector& true_weights, const ScenarioConfig& base,
                                    const std::string& algorithm_label) {
    std::string target = algorithm_label;
    if (target.empty()) {
        const auto it = std::find_if(base.algorithms.begin(), base.algorithms.end(),
                                     [](const AlgorithmSpec& a) { return a.kind == AlgorithmKind::Tacldm; });
        if (it == base.algorithms.end()) {
            throw UsageError("sweep: no TACLDM filter configured");
        }
        target = it->label;
    }
    const bool found = std::any_of(base.algorithms.begin(), base.algorithms.end(),
                                   [&](const AlgorithmSpec& a) { return a.label == target; });
    if (!found) {
        throw UsageError("sweep: unknown algorithm label '" + target + "'");
    }

    std::vector<TrajectoryResult> out;
    out.reserve(values.size());
    for (const double v : values) {
        ScenarioConfig cfg = base;
        cfg.algorithms.erase(std::remove_if(cfg.algorithms.begin(), cfg.algorithms.end(),
                                            [&](const AlgorithmSpec& a) { return a.label != target; }),
                             cfg.algorithms.end());
        auto& p = cfg.algorithms.front().params;
        (parameter == SweepParameter::Gamma ? p.gamma : p.mu) = v;
        auto result = run_monte_carlo(true_weights, cfg);
        out.push_back(std::move(result.at(target)));
    }
    return out;
}

MonteCarloResult aec_scenario(const std::vector<double>& speech, const Vector& echo_path, ScenarioConfig config) {
    if (echo_path.size() < 1) {
        throw UsageError("echo path must have at least one tap");
    }
    config.filter_length = echo_path.size();
    const auto needed = config.n_samples + static_cast<std::size_t>(config.filter_length);
    if (speech.size() < needed) {
        throw UsageError("speech has " + std::to_string(speech.size()) + " samples; AEC needs at least " +
                         std::to_string(needed));
    }
    config.input_model = SignalInput{speech, "speech"};
    return run_monte_carlo(echo_path, config);
}

}  // namespace filterlab
