#ifndef FILTERLAB_CONFIG_HPP
#define FILTERLAB_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "filterlab/sim.hpp"
#include "filterlab/theory.hpp"

namespace filterlab {

/// Flat `section.key = value` text. `#` starts a comment; lists are comma separated.
/// Lookups mark keys as used so that leftovers can be reported as unknown.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<config>");
    static KeyValueConfig load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    std::optional<std::string> string(const std::string& key) const;
    std::optional<double> number(const std::string& key) const;
    std::optional<std::int64_t> integer(const std::string& key) const;
    std::optional<std::vector<double>> numbers(const std::string& key) const;

    /// Keys below `prefix.` in file order, e.g. sections("algorithm") -> {"tacldm", "gdtls"}.
    std::vector<std::string> subsections(const std::string& prefix) const;

    /// Throws ConfigError naming the first key that was never looked up.
    void reject_unknown() const;

    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        std::size_t order = 0;
    };
    std::string origin_;
    std::map<std::string, Entry> entries_;
    mutable std::set<std::string> used_;
};

struct SweepSettings {
    SweepParameter parameter = SweepParameter::Gamma;
    std::vector<double> values;
    std::string algorithm;
};

struct SurfaceSettings {
    double gamma = 1.0;
    double range_min = -2.0;
    double range_max = 2.0;
    std::size_t points = 41;
    std::size_t samples = 20000;
};

struct PredictSettings {
    double gamma = 1.0;
    std::vector<double> mu;
};

struct AecSettings {
    std::optional<std::filesystem::path> speech;
    std::optional<std::filesystem::path> echo_path;
    std::uint64_t echo_seed = 7;
};

/// Everything a subcommand needs, assembled from one config file.
struct Experiment {
    ScenarioConfig scenario;
    Vector true_weights;
    double epsilon = 1.0;
    std::optional<SweepSettings> sweep;
    SurfaceSettings surface;
    PredictSettings predict;
    AecSettings aec;

    /// Input power sigma_x^2: the white-input variance, or the mean square of a signal input.
    double input_power() const;
    /// R = sigma_x^2 I with the nominal noise variances of the configured processes.
    SystemSpec system_spec() const;
};

NoiseSpec parse_noise(const KeyValueConfig& cfg, const std::string& prefix);
Experiment build_experiment(const KeyValueConfig& cfg, const std::filesystem::path& base_dir = {});

}  // namespace filterlab

#endif  // FILTERLAB_CONFIG_HPP
