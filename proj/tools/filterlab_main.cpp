#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "filterlab/commands.hpp"

namespace {

void add_common(CLI::App* sub, filterlab::CommandOptions& o) {
    sub->add_option("--config", o.config_path, "Experiment config (section.key = value)")->required();
    sub->add_option("--out", o.out_dir, "Directory for CSV output");
    sub->add_option("--seed", o.seed, "Override scenario.seed");
    sub->add_option("--runs", o.runs, "Override scenario.runs");
    sub->add_flag("--allow-divergence", o.allow_divergence, "Exit 0 even if some runs diverge");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"filterlab: robust errors-in-variables adaptive filtering experiments"};
    app.require_subcommand(1);

    filterlab::CommandOptions opts;
    auto* identify = app.add_subcommand("identify", "Monte Carlo system identification, one NMSD curve per filter");
    auto* sweep = app.add_subcommand("sweep", "Repeat identification over a gamma or mu grid");
    auto* bounds = app.add_subcommand("bounds", "Step-size stability bounds and Hessian spectrum");
    auto* predict = app.add_subcommand("predict", "Theoretical steady-state MSD");
    auto* surface = app.add_subcommand("surface", "Expected-cost surface for a two-tap system");
    auto* aec = app.add_subcommand("aec", "Acoustic echo cancellation on a WAV recording");
    for (auto* sub : {identify, sweep, bounds, predict, surface, aec}) {
        add_common(sub, opts);
    }
    predict->add_flag("--simulate", opts.simulate, "Also run the Monte Carlo simulation for comparison");
    aec->add_option("--speech", opts.speech, "16-bit PCM mono WAV far-end signal");
    aec->add_option("--echo-path", opts.echo_path, "Echo impulse response, one coefficient per line");

    CLI11_PARSE(app, argc, argv);

    try {
        filterlab::RunManifest m;
        if (*identify) m = filterlab::cmd_identify(opts);
        else if (*sweep) m = filterlab::cmd_sweep(opts);
        else if (*bounds) m = filterlab::cmd_bounds(opts);
        else if (*predict) m = filterlab::cmd_predict(opts);
        else if (*surface) m = filterlab::cmd_surface(opts);
        else m = filterlab::cmd_aec(opts);
        if (m.failed) {
            std::cerr << "error: " << m.diverged_runs << " run(s) diverged (pass --allow-divergence to accept)\n";
        }
        return m.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
