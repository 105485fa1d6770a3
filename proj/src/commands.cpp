#include "filterlab/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "filterlab/error.hpp"
#include "filterlab/theory.hpp"
#include "filterlab/wav.hpp"

namespace filterlab {

namespace {

using Clock = std::chrono::steady_clock;

std::ostream& out_stream(const CommandOptions& o) { return o.report ? *o.report : std::cout; }

// Collects the files a command writes and produces the manifest at the end.
class OutputDir {
public:
    OutputDir(const CommandOptions& options, std::string command, std::uint64_t seed)
        : options_(options), start_(Clock::now()) {
        manifest_.command = std::move(command);
        manifest_.config_path = options.config_path;
        manifest_.output_dir = options.out_dir;
        manifest_.seed = seed;
        if (enabled()) {
            std::filesystem::create_directories(options.out_dir);
        }
    }

    bool enabled() const { return !options_.out_dir.empty(); }

    void write(const std::string& name, const std::string& content) {
        if (!enabled()) {
            return;
        }
        const auto path = options_.out_dir / name;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw IoError("cannot write " + path.string());
        }
        os << content;
        manifest_.emitted_files.push_back(name);
    }

    RunManifest finish(std::size_t diverged_runs) {
        manifest_.diverged_runs = diverged_runs;
        manifest_.failed = diverged_runs > 0 && !options_.allow_divergence;
        manifest_.wall_time_s = std::chrono::duration<double>(Clock::now() - start_).count();
        if (enabled()) {
            nlohmann::ordered_json j;
            j["command"] = manifest_.command;
            j["config_path"] = manifest_.config_path.string();
            j["output_dir"] = manifest_.output_dir.string();
            j["seed"] = manifest_.seed;
            j["emitted_files"] = manifest_.emitted_files;
            j["diverged_runs"] = manifest_.diverged_runs;
            j["wall_time_s"] = manifest_.wall_time_s;
            std::ofstream os(options_.out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
            os << j.dump(2) << '\n';
        }
        return manifest_;
    }

private:
    const CommandOptions& options_;
    Clock::time_point start_;
    RunManifest manifest_;
};

std::string curve_csv(const std::vector<double>& values, const char* column) {
    std::string s = std::string("iter,") + column + "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        s += std::to_string(i);
        s += ',';
        s += format_number(values[i]);
        s += '\n';
    }
    return s;
}

std::string matrix_csv(const Matrix& m) {
    std::string s;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        s += (c ? ",c" : "c") + std::to_string(c);
    }
    s += '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) s += ',';
            s += format_number(m(r, c));
        }
        s += '\n';
    }
    return s;
}

std::size_t total_diverged(const MonteCarloResult& result) {
    std::size_t n = 0;
    for (const auto& [label, r] : result) {
        n += r.diverged_runs;
    }
    return n;
}

std::string summary_csv(const ScenarioConfig& sc, const MonteCarloResult& result) {
    std::string s = "algorithm,kind,mu,gamma,steady_state_db,diverged_runs,runs\n";
    for (const auto& a : sc.algorithms) {
        const auto& r = result.at(a.label);
        s += a.label + "," + std::string(to_string(a.kind)) + "," + format_number(a.params.mu) + "," +
             (a.kind == AlgorithmKind::Tacldm ? format_number(a.params.gamma) : std::string()) + "," +
             format_number(r.steady_state_db) + "," + std::to_string(r.diverged_runs) + "," + std::to_string(r.runs) +
             "\n";
    }
    return s;
}

void report_runs(std::ostream& os, const ScenarioConfig& sc, const MonteCarloResult& result) {
    for (const auto& a : sc.algorithms) {
        const auto& r = result.at(a.label);
        os << "  " << a.label << ": steady-state NMSD " << format_number(r.steady_state_db) << " dB";
        if (r.diverged_runs) {
            os << " (" << r.diverged_runs << "/" << r.runs << " runs diverged"
               << (r.divergence_flagged ? ", FLAGGED" : "") << ")";
        }
        os << '\n';
    }
}

std::string db(double linear) { return format_number(10.0 * std::log10(linear)); }

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

Experiment load_experiment(const CommandOptions& options) {
    const auto cfg = KeyValueConfig::load(options.config_path);
    Experiment ex = build_experiment(cfg, options.config_path.parent_path());
    if (options.seed) ex.scenario.seed = *options.seed;
    if (options.runs) {
        if (*options.runs < 1) throw UsageError("--runs must be positive");
        ex.scenario.n_runs = *options.runs;
    }
    return ex;
}

RunManifest cmd_identify(const CommandOptions& options) {
    const Experiment ex = load_experiment(options);
    OutputDir out(options, "identify", ex.scenario.seed);
    auto& os = out_stream(options);
    const auto result = run_monte_carlo(ex.true_weights, ex.scenario);
    os << "identify: L=" << ex.scenario.filter_length << ", " << ex.scenario.n_samples << " samples, "
       << ex.scenario.n_runs << " runs, seed " << ex.scenario.seed << '\n';
    report_runs(os, ex.scenario, result);
    for (const auto& [label, r] : result) {
        out.write(label + ".csv", curve_csv(r.nmsd_db, "nmsd_db"));
    }
    out.write("summary.csv", summary_csv(ex.scenario, result));
    return out.finish(total_diverged(result));
}

RunManifest cmd_sweep(const CommandOptions& options) {
    const Experiment ex = load_experiment(options);
    if (!ex.sweep) {
        throw ConfigError(options.config_path.string() + ": sweep needs sweep.parameter and sweep.values");
    }
    const auto& sw = *ex.sweep;
    OutputDir out(options, "sweep", ex.scenario.seed);
    auto& os = out_stream(options);
    const std::string pname = sw.parameter == SweepParameter::Gamma ? "gamma" : "mu";
    const auto results = sweep(sw.parameter, sw.values, ex.true_weights, ex.scenario, sw.algorithm);

    std::string summary = "parameter,value,steady_state_db,iters_to_minus10db,diverged_runs,runs\n";
    std::size_t diverged = 0;
    os << "sweep over " << pname << ":\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const auto it = iterations_to(r, -10.0);
        diverged += r.diverged_runs;
        const std::string v = format_number(sw.values[i]);
        summary += pname + "," + v + "," + format_number(r.steady_state_db) + "," +
                   (it ? std::to_string(*it) : std::string("-1")) + "," + std::to_string(r.diverged_runs) + "," +
                   std::to_string(r.runs) + "\n";
        out.write("sweep_" + pname + "_" + std::to_string(i) + ".csv", curve_csv(r.nmsd_db, "nmsd_db"));
        os << "  " << pname << "=" << v << ": steady-state NMSD " << format_number(r.steady_state_db) << " dB";
        if (r.diverged_runs) os << ", " << r.diverged_runs << "/" << r.runs << " runs diverged";
        os << '\n';
    }
    out.write("sweep_summary.csv", summary);
    return out.finish(diverged);
}

RunManifest cmd_bounds(const CommandOptions& options) {
    const Experiment ex = load_experiment(options);
    OutputDir out(options, "bounds", ex.scenario.seed);
    auto& os = out_stream(options);
    const SystemSpec spec = ex.system_spec();
    const double gamma = ex.predict.gamma;
    const auto bounds = combined_step_bound(spec, gamma);
    const Matrix h = hessian_at_optimum(spec, gamma);
    const Vector spectrum = Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();

    os << "bounds: L=" << spec.length() << ", gamma=" << format_number(gamma)
       << ", sigma_i^2=" << format_number(spec.input_noise_var) << ", sigma_o^2=" << format_number(spec.output_noise_var)
       << ", sigma_x^2=" << format_number(spec.input_power()) << ", |w_bar_o|^2=" << format_number(spec.aug_norm_sq())
       << '\n';
    os << "  mean-convergence bound:   mu < " << format_number(bounds.mean_bound) << '\n';
    os << "  mean-square bound:        mu < " << format_number(bounds.msq_bound) << '\n';
    os << "  combined:                 mu < " << format_number(bounds.combined) << '\n';
    os << "  Hessian eigenvalues:";
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) os << ' ' << format_number(spectrum(i));
    os << '\n';
    for (const auto& a : ex.scenario.algorithms) {
        if (a.kind == AlgorithmKind::Tacldm && a.params.gamma == gamma && a.params.mu >= bounds.combined) {
            os << "  warning: " << a.label << " step " << format_number(a.params.mu) << " is outside the bound\n";
        }
    }

    out.write("bounds.csv", "gamma,mean_bound,msq_bound,combined\n" + format_number(gamma) + "," +
                                format_number(bounds.mean_bound) + "," + format_number(bounds.msq_bound) + "," +
                                format_number(bounds.combined) + "\n");
    out.write("hessian.csv", matrix_csv(h));
    std::string spec_csv = "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        spec_csv += std::to_string(i) + "," + format_number(spectrum(i)) + "\n";
    }
    out.write("hessian_spectrum.csv", spec_csv);
    return out.finish(0);
}

RunManifest cmd_predict(const CommandOptions& options) {
    const Experiment ex = load_experiment(options);
    OutputDir out(options, "predict", ex.scenario.seed);
    auto& os = out_stream(options);
    const SystemSpec spec = ex.system_spec();
    const double gamma = ex.predict.gamma;
    const auto bounds = combined_step_bound(spec, gamma);

    std::string csv = options.simulate ? "mu,theory_msd,theory_msd_db,sim_msd,sim_msd_db,difference_db\n"
                                       : "mu,theory_msd,theory_msd_db\n";
    std::size_t diverged = 0;
    os << "predict: gamma=" << format_number(gamma) << ", combined step bound " << format_number(bounds.combined)
       << '\n';
    for (const double mu : ex.predict.mu) {
        if (mu >= bounds.combined) {
            os << "  warning: mu=" << format_number(mu) << " is outside the stability bound\n";
        }
        const auto pred = steady_state_msd(spec, gamma, mu);
        csv += format_number(mu) + "," + format_number(pred.msd) + "," + db(pred.msd);
        os << "  mu=" << format_number(mu) << ": theory MSD " << db(pred.msd) << " dB";
        if (options.simulate) {
            ScenarioConfig sc = ex.scenario;
            sc.algorithms = {AlgorithmSpec{"tacldm", AlgorithmKind::Tacldm, FilterParams{mu, gamma, ex.epsilon}}};
            const auto r = run_monte_carlo(ex.true_weights, sc).at("tacldm");
            diverged += r.diverged_runs;
            const double diff = 10.0 * std::log10(r.steady_state_msd / pred.msd);
            csv += "," + format_number(r.steady_state_msd) + "," + db(r.steady_state_msd) + "," + format_number(diff);
            os << ", simulated " << db(r.steady_state_msd) << " dB (difference " << format_number(diff) << " dB)";
        }
        csv += '\n';
        os << '\n';
    }
    out.write("predict.csv", csv);
    return out.finish(diverged);
}

CostSurface expected_cost_surface(const Experiment& ex) {
    if (ex.scenario.filter_length != 2) {
        throw UsageError("surface: only two-tap systems can be mapped (filter_length = " +
                         std::to_string(ex.scenario.filter_length) + ")");
    }
    const auto& sf = ex.surface;
    ScenarioConfig sc = ex.scenario;
    sc.n_samples = sf.samples;
    sc.tracking_flip_at.reset();
    Rng rng = make_stream(sc.seed, 0);
    const auto steps = eiv_generate(ex.true_weights, sc, rng);

    CostSurface s;
    s.axis.resize(sf.points);
    for (std::size_t i = 0; i < sf.points; ++i) {
        s.axis[i] = sf.range_min + (sf.range_max - sf.range_min) * static_cast<double>(i) /
                                       static_cast<double>(sf.points - 1);
    }
    const std::size_t n = sf.points;
    s.cost.assign(n * n, 0.0);
    s.cost_no_arctan.assign(n * n, 0.0);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Vector w(2);
            w << s.axis[i], s.axis[j];
            const AugmentedWeight aug(w, ex.epsilon);
            double sum = 0.0;
            double sum_psi = 0.0;
            for (const auto& st : steps) {
                const double e = st.sample.noisy_desired - w.dot(st.sample.noisy_input);
                const double p = psi(e, aug, sf.gamma);
                sum += std::atan(p);
                sum_psi += p;
            }
            const double mean = sum / static_cast<double>(steps.size());
            s.cost[i * n + j] = mean;
            s.cost_no_arctan[i * n + j] = sum_psi / static_cast<double>(steps.size());
            if (mean > best) {
                best = mean;
                s.argmax_i = i;
                s.argmax_j = j;
            }
        }
    }
    return s;
}

RunManifest cmd_surface(const CommandOptions& options) {
    const Experiment ex = load_experiment(options);
    OutputDir out(options, "surface", ex.scenario.seed);
    auto& os = out_stream(options);
    const auto s = expected_cost_surface(ex);
    std::string csv = "w1,w2,cost,cost_no_arctan\n";
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            csv += format_number(s.axis[i]) + "," + format_number(s.axis[j]) + "," + format_number(s.cost[i * n + j]) +
                   "," + format_number(s.cost_no_arctan[i * n + j]) + "\n";
        }
    }
    out.write("surface.csv", csv);
    os << "surface: gamma=" << format_number(ex.surface.gamma) << ", " << n << "x" << n << " grid, maximum "
       << format_number(s.at(s.argmax_i, s.argmax_j)) << " at (" << format_number(s.axis[s.argmax_i]) << ", "
       << format_number(s.axis[s.argmax_j]) << "), true weights (" << format_number(ex.true_weights(0)) << ", "
       << format_number(ex.true_weights(1)) << ")\n";
    return out.finish(0);
}

RunManifest cmd_aec(const CommandOptions& options) {
    const Experiment ex = load_experiment(options);
    const auto speech_path = options.speech ? options.speech : ex.aec.speech;
    if (!speech_path) {
        throw UsageError("aec: no speech file (use --speech or aec.speech)");
    }
    const auto speech = read_wav_pcm16(*speech_path).samples;
    const auto echo_file = options.echo_path ? options.echo_path : ex.aec.echo_path;
    Vector echo;
    if (echo_file) {
        const auto coeffs = read_coefficients(*echo_file);
        echo = Eigen::Map<const Vector>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    } else {
        echo = synthetic_echo_path(ex.scenario.filter_length, ex.aec.echo_seed);
    }

    OutputDir out(options, "aec", ex.scenario.seed);
    auto& os = out_stream(options);
    const auto result = aec_scenario(speech, echo, ex.scenario);
    os << "aec: echo path of " << echo.size() << " taps, " << ex.scenario.n_samples << " samples, "
       << ex.scenario.n_runs << " runs\n";
    report_runs(os, ex.scenario, result);
    for (const auto& [label, r] : result) {
        out.write(label + "_nmsd.csv", curve_csv(r.nmsd_db, "nmsd_db"));
        out.write(label + "_residual.csv", curve_csv(r.residual, "residual"));
    }
    out.write("summary.csv", summary_csv(ex.scenario, result));
    return out.finish(total_diverged(result));
}

}  // namespace filterlab
