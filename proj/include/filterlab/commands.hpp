#ifndef FILTERLAB_COMMANDS_HPP
#define FILTERLAB_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "filterlab/config.hpp"

namespace filterlab {

struct CommandOptions {
    std::filesystem::path config_path;
    /// Empty: write nothing (bounds and predict still print their report).
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    bool simulate = false;
    bool allow_divergence = false;
    std::optional<std::filesystem::path> speech;
    std::optional<std::filesystem::path> echo_path;
    std::ostream* report = nullptr;  // defaults to std::cout
};

struct RunManifest {
    std::string command;
    std::filesystem::path config_path;
    std::filesystem::path output_dir;
    std::vector<std::string> emitted_files;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    std::size_t diverged_runs = 0;
    /// Set when a run diverged and divergence was not allowed.
    bool failed = false;

    int exit_code() const { return failed ? 3 : 0; }
};

/// Grid of the Monte Carlo expected cost over (w1, w2) for a two-tap system.
struct CostSurface {
    std::vector<double> axis;
    /// cost[i * n + j] at (axis[i], axis[j]).
    std::vector<double> cost;
    std::vector<double> cost_no_arctan;
    std::size_t argmax_i = 0;
    std::size_t argmax_j = 0;

    std::size_t size() const { return axis.size(); }
    double at(std::size_t i, std::size_t j) const { return cost[i * axis.size() + j]; }
};

/// 9 significant digits, shortest form; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

Experiment load_experiment(const CommandOptions& options);
CostSurface expected_cost_surface(const Experiment& experiment);

RunManifest cmd_identify(const CommandOptions& options);
RunManifest cmd_sweep(const CommandOptions& options);
RunManifest cmd_bounds(const CommandOptions& options);
RunManifest cmd_predict(const CommandOptions& options);
RunManifest cmd_surface(const CommandOptions& options);
RunManifest cmd_aec(const CommandOptions& options);

}  // namespace filterlab

#endif  // FILTERLAB_COMMANDS_HPP
