#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "filterlab/baselines.hpp"
#include "filterlab/commands.hpp"
#include "filterlab/core_filter.hpp"
#include "filterlab/error.hpp"
#include "filterlab/noise.hpp"
#include "filterlab/sim.hpp"
#include "filterlab/theory.hpp"

namespace py = pybind11;
using namespace filterlab;

namespace {

Sample make_sample(const Vector& x, double d) { return Sample{x, d}; }

FilterState make_state(const Vector& w) { return FilterState{w, 0}; }

py::dict manifest_dict(const RunManifest& m) {
    py::dict d;
    d["command"] = m.command;
    d["config_path"] = m.config_path.string();
    d["output_dir"] = m.output_dir.string();
    d["emitted_files"] = m.emitted_files;
    d["wall_time_s"] = m.wall_time_s;
    d["seed"] = m.seed;
    d["diverged_runs"] = m.diverged_runs;
    d["exit_code"] = m.exit_code();
    return d;
}

}  // namespace

PYBIND11_MODULE(_filterlab, m) {
    m.doc() = "Robust errors-in-variables adaptive filtering";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
    py::register_exception<StabilityBoundaryError>(m, "StabilityBoundaryError", PyExc_ArithmeticError);

    py::class_<FilterParams>(m, "FilterParams")
        .def(py::init([](double mu, double gamma, double epsilon) { return FilterParams{mu, gamma, epsilon}; }),
             py::arg("mu") = 0.1, py::arg("gamma") = 1.0, py::arg("epsilon") = 1.0)
        .def_readwrite("mu", &FilterParams::mu)
        .def_readwrite("gamma", &FilterParams::gamma)
        .def_readwrite("epsilon", &FilterParams::epsilon)
        .def("__repr__", [](const FilterParams& p) {
            return "FilterParams(mu=" + format_number(p.mu) + ", gamma=" + format_number(p.gamma) +
                   ", epsilon=" + format_number(p.epsilon) + ")";
        });

    m.def("psi", [](double e, const Vector& w, double eps, double gamma) {
        return psi(e, augmented_weight(w, eps), gamma);
    }, py::arg("error"), py::arg("weights"), py::arg("epsilon"), py::arg("gamma"));
    m.def("instantaneous_cost", [](double e, const Vector& w, double eps, double gamma) {
        return instantaneous_cost(e, augmented_weight(w, eps), gamma);
    }, py::arg("error"), py::arg("weights"), py::arg("epsilon"), py::arg("gamma"));
    m.def("shape_factor", [](double e, const Vector& w, double eps, double gamma) {
        return shape_factor(e, augmented_weight(w, eps), gamma);
    }, py::arg("error"), py::arg("weights"), py::arg("epsilon"), py::arg("gamma"));
    m.def("instantaneous_gradient", [](const Vector& x, double d, const Vector& w, const FilterParams& p) {
        return Vector(instantaneous_gradient(make_sample(x, d), make_state(w), p));
    }, py::arg("x"), py::arg("d"), py::arg("weights"), py::arg("params"));
    m.def("tacldm_update", [](const Vector& x, double d, const Vector& w, const FilterParams& p) {
        return Vector(tacldm_update(make_sample(x, d), make_state(w), p).weights);
    }, py::arg("x"), py::arg("d"), py::arg("weights"), py::arg("params"));
    m.def("lms_update", [](const Vector& x, double d, const Vector& w, double mu) {
        return Vector(lms_update(make_sample(x, d), make_state(w), mu).weights);
    }, py::arg("x"), py::arg("d"), py::arg("weights"), py::arg("mu"));
    m.def("gdtls_update", [](const Vector& x, double d, const Vector& w, const FilterParams& p) {
        return Vector(gdtls_update(make_sample(x, d), make_state(w), p).weights);
    }, py::arg("x"), py::arg("d"), py::arg("weights"), py::arg("params"));
    m.def("matched_gdtls_step", &matched_gdtls_step, py::arg("mu"), py::arg("gamma"));

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def_static("none", &NoiseSpec::none)
        .def_static("gaussian", &NoiseSpec::gaussian, py::arg("variance"))
        .def_static("laplacian", &NoiseSpec::laplacian, py::arg("variance"))
        .def_static("generalized_gaussian", &NoiseSpec::generalized_gaussian, py::arg("alpha"), py::arg("variance"))
        .def_static("uniform", &NoiseSpec::uniform, py::arg("half_width"))
        .def_static("binary", &NoiseSpec::binary, py::arg("level"))
        .def_static("impulsive_mixture", &NoiseSpec::impulsive_mixture, py::arg("base"), py::arg("prob"),
                    py::arg("impulse_std_ratio") = 100.0)
        .def_property_readonly("variance", &NoiseSpec::variance)
        .def_property_readonly("nominal_variance", &NoiseSpec::nominal_variance)
        .def_property_readonly("excess_kurtosis", &NoiseSpec::excess_kurtosis)
        .def("sample", [](const NoiseSpec& s, Eigen::Index n, std::uint64_t seed) {
            Rng rng(mix_seed(seed));
            return Vector(sample_noise_vector(s, n, rng));
        }, py::arg("n"), py::arg("seed") = 1)
        .def("__repr__", &NoiseSpec::describe);
    m.def("gg_scale_from_variance", &gg_scale_from_variance, py::arg("alpha"), py::arg("variance"));

    py::class_<SystemSpec>(m, "SystemSpec")
        .def(py::init([](const Vector& w, const Matrix& R, double si, double so) {
            return SystemSpec{w, R, si, so};
        }), py::arg("true_weights"), py::arg("input_covariance"), py::arg("input_noise_var"),
             py::arg("output_noise_var"))
        .def_static("white", &SystemSpec::white, py::arg("true_weights"), py::arg("input_var"),
                    py::arg("input_noise_var"), py::arg("output_noise_var"))
        .def_readwrite("true_weights", &SystemSpec::true_weights)
        .def_readwrite("input_covariance", &SystemSpec::input_covariance)
        .def_readwrite("input_noise_var", &SystemSpec::input_noise_var)
        .def_readwrite("output_noise_var", &SystemSpec::output_noise_var)
        .def_property_readonly("epsilon", &SystemSpec::epsilon);

    py::class_<StabilityBounds>(m, "StabilityBounds")
        .def_readonly("mean_bound", &StabilityBounds::mean_bound)
        .def_readonly("msq_bound", &StabilityBounds::msq_bound)
        .def_readonly("combined", &StabilityBounds::combined);
    py::class_<MsdPrediction>(m, "MsdPrediction")
        .def_readonly("hessian", &MsdPrediction::hessian)
        .def_readonly("grad_noise_cov", &MsdPrediction::grad_noise_cov)
        .def_readonly("msd", &MsdPrediction::msd)
        .def_readonly("mean_spectral_radius", &MsdPrediction::mean_spectral_radius)
        .def_readonly("residual", &MsdPrediction::residual);

    m.def("hessian_at_optimum", &hessian_at_optimum, py::arg("spec"), py::arg("gamma"));
    m.def("gradient_noise_covariance", &gradient_noise_covariance, py::arg("spec"), py::arg("gamma"));
    m.def("mean_step_bound", &mean_step_bound, py::arg("spec"), py::arg("gamma"));
    m.def("msq_step_bound", py::overload_cast<const SystemSpec&, double>(&msq_step_bound), py::arg("spec"),
          py::arg("gamma"));
    m.def("combined_step_bound", py::overload_cast<const SystemSpec&, double>(&combined_step_bound),
          py::arg("spec"), py::arg("gamma"));
    m.def("steady_state_msd", &steady_state_msd, py::arg("spec"), py::arg("gamma"), py::arg("mu"));

    py::class_<AlgorithmSpec>(m, "AlgorithmSpec")
        .def(py::init([](std::string label, const std::string& kind, const FilterParams& p) {
            return AlgorithmSpec{std::move(label), parse_algorithm(kind), p};
        }), py::arg("label"), py::arg("kind"), py::arg("params"))
        .def_readonly("label", &AlgorithmSpec::label)
        .def_property_readonly("kind", [](const AlgorithmSpec& a) { return std::string(to_string(a.kind)); })
        .def_readonly("params", &AlgorithmSpec::params);

    py::class_<TrajectoryResult>(m, "TrajectoryResult")
        .def_readonly("label", &TrajectoryResult::label)
        .def_readonly("msd", &TrajectoryResult::msd)
        .def_readonly("nmsd_db", &TrajectoryResult::nmsd_db)
        .def_readonly("steady_state_msd", &TrajectoryResult::steady_state_msd)
        .def_readonly("steady_state_db", &TrajectoryResult::steady_state_db)
        .def_readonly("runs", &TrajectoryResult::runs)
        .def_readonly("diverged_runs", &TrajectoryResult::diverged_runs)
        .def_readonly("divergence_flagged", &TrajectoryResult::divergence_flagged)
        .def_readonly("residual", &TrajectoryResult::residual);

    m.def("default_true_weights", &default_true_weights, py::arg("length"));
    m.def("synthetic_echo_path", &synthetic_echo_path, py::arg("length"), py::arg("seed") = 7);
    m.def("nmsd", &nmsd, py::arg("weights"), py::arg("true_weights"));

    m.def(
        "run_monte_carlo",
        [](const Vector& wo, const std::vector<AlgorithmSpec>& algorithms, std::size_t samples, std::size_t runs,
           std::uint64_t seed, const NoiseSpec& input_noise, const NoiseSpec& output_noise, double input_var,
           std::optional<std::size_t> flip_at, std::size_t steady_window, unsigned threads) {
            ScenarioConfig c;
            c.filter_length = wo.size();
            c.n_samples = samples;
            c.n_runs = runs;
            c.seed = seed;
            c.input_model = WhiteGaussianInput{input_var};
            c.input_noise = input_noise;
            c.output_noise = output_noise;
            c.algorithms = algorithms;
            c.tracking_flip_at = flip_at;
            c.steady_window = steady_window;
            c.threads = threads;
            py::gil_scoped_release release;
            return run_monte_carlo(wo, c);
        },
        py::arg("true_weights"), py::arg("algorithms"), py::arg("samples") = 3000, py::arg("runs") = 100,
        py::arg("seed") = 1, py::arg("input_noise") = NoiseSpec::gaussian(0.1),
        py::arg("output_noise") = NoiseSpec::gaussian(0.1), py::arg("input_var") = 1.0,
        py::arg("tracking_flip_at") = std::nullopt, py::arg("steady_window") = 500, py::arg("threads") = 0);

    m.def(
        "run_command",
        [](const std::string& command, const std::filesystem::path& config, const std::filesystem::path& out,
           std::optional<std::uint64_t> seed, std::optional<std::size_t> runs, bool simulate, bool allow_divergence) {
            CommandOptions o;
            o.config_path = config;
            o.out_dir = out;
            o.seed = seed;
            o.runs = runs;
            o.simulate = simulate;
            o.allow_divergence = allow_divergence;
            RunManifest r;
            if (command == "identify") r = cmd_identify(o);
            else if (command == "sweep") r = cmd_sweep(o);
            else if (command == "bounds") r = cmd_bounds(o);
            else if (command == "predict") r = cmd_predict(o);
            else if (command == "surface") r = cmd_surface(o);
            else if (command == "aec") r = cmd_aec(o);
            else throw UsageError("unknown command '" + command + "'");
            return manifest_dict(r);
        },
        py::arg("command"), py::arg("config"), py::arg("out") = std::filesystem::path{}, py::arg("seed") = std::nullopt,
        py::arg("runs") = std::nullopt, py::arg("simulate") = false, py::arg("allow_divergence") = false);
}
