#include "filterlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "filterlab/baselines.hpp"
#include "filterlab/error.hpp"
#include "filterlab/wav.hpp"

namespace filterlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) {
        return false;
    }
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::size_t order = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        const auto where = origin + ":" + std::to_string(line_no);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'section.key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos || key.front() == '.' || key.back() == '.') {
            throw ConfigError(where + ": key '" + key + "' must have the form section.key");
        }
        if (cfg.entries_.count(key)) {
            throw ConfigError(where + ": duplicate key '" + key + "'");
        }
        cfg.entries_[key] = Entry{value, line_no, order++};
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

void KeyValueConfig::fail(const std::string& key, const std::string& message) const {
    const auto it = entries_.find(key);
    std::string where = origin_;
    if (it != entries_.end()) {
        where += ":" + std::to_string(it->second.line);
    }
    throw ConfigError(where + ": key '" + key + "': " + message);
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

std::optional<std::string> KeyValueConfig::string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    used_.insert(key);
    return it->second.value;
}

std::optional<double> KeyValueConfig::number(const std::string& key) const {
    const auto s = string(key);
    if (!s) {
        return std::nullopt;
    }
    double v = 0.0;
    if (!parse_double(*s, v) || !std::isfinite(v)) {
        fail(key, "expected a finite number, got '" + *s + "'");
    }
    return v;
}

std::optional<std::int64_t> KeyValueConfig::integer(const std::string& key) const {
    const auto v = number(key);
    if (!v) {
        return std::nullopt;
    }
    if (std::floor(*v) != *v) {
        fail(key, "expected an integer");
    }
    return static_cast<std::int64_t>(*v);
}

std::optional<std::vector<double>> KeyValueConfig::numbers(const std::string& key) const {
    const auto s = string(key);
    if (!s) {
        return std::nullopt;
    }
    std::vector<double> out;
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        if (!parse_double(item, v) || !std::isfinite(v)) {
            fail(key, "expected a comma-separated list of numbers, got '" + trim(item) + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        fail(key, "empty list");
    }
    return out;
}

std::vector<std::string> KeyValueConfig::subsections(const std::string& prefix) const {
    const std::string head = prefix + ".";
    std::vector<std::pair<std::size_t, std::string>> found;
    for (const auto& [key, entry] : entries_) {
        if (key.rfind(head, 0) != 0) {
            continue;
        }
        const auto rest = key.substr(head.size());
        const auto dot = rest.find('.');
        if (dot == std::string::npos) {
            continue;
        }
        const auto name = rest.substr(0, dot);
        const auto it = std::find_if(found.begin(), found.end(), [&](const auto& p) { return p.second == name; });
        if (it == found.end()) {
            found.emplace_back(entry.order, name);
        } else {
            it->first = std::min(it->first, entry.order);
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<std::string> out;
    for (auto& p : found) {
        out.push_back(std::move(p.second));
    }
    return out;
}

void KeyValueConfig::reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
        if (!used_.count(key)) {
            throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
        }
    }
}

NoiseSpec parse_noise(const KeyValueConfig& cfg, const std::string& prefix) {
    const auto kind_key = prefix + ".kind";
    const std::string kind = cfg.string(kind_key).value_or("gaussian");
    const auto positive = [&](const std::string& field, std::optional<double> fallback = std::nullopt) {
        const auto key = prefix + "." + field;
        const auto v = cfg.number(key);
        if (!v && !fallback) {
            cfg.fail(key, "required for noise kind '" + kind + "'");
        }
        const double x = v.value_or(fallback.value_or(0.0));
        if (!(x > 0.0)) {
            cfg.fail(key, "must be positive");
        }
        return x;
    };

    try {
        if (kind == "none") return NoiseSpec::none();
        if (kind == "gaussian") return NoiseSpec::gaussian(positive("variance", 0.1));
        if (kind == "laplacian") return NoiseSpec::laplacian(positive("variance"));
        if (kind == "generalized_gaussian") {
            const double alpha = positive("alpha");
            return NoiseSpec::generalized_gaussian(alpha, positive("variance"));
        }
        if (kind == "uniform") return NoiseSpec::uniform(positive("half_width"));
        if (kind == "binary") return NoiseSpec::binary(positive("level"));
        if (kind == "impulsive_mixture") {
            const auto base_kind = cfg.string(prefix + ".base.kind");
            if (base_kind && *base_kind == "impulsive_mixture") {
                cfg.fail(prefix + ".base.kind", "a mixture base cannot itself be a mixture");
            }
            const NoiseSpec base = parse_noise(cfg, prefix + ".base");
            const double prob = positive("prob");
            if (!(prob < 1.0)) {
                cfg.fail(prefix + ".prob", "must lie in (0, 1)");
            }
            return NoiseSpec::impulsive_mixture(base, prob, positive("impulse_std_ratio", 100.0));
        }
    } catch (const ParameterError& e) {
        cfg.fail(kind_key, e.what());
    }
    cfg.fail(kind_key,
             "unknown noise kind '" + kind +
                 "' (expected none, gaussian, laplacian, generalized_gaussian, uniform, binary, impulsive_mixture)");
}

double Experiment::input_power() const {
    if (const auto* white = std::get_if<WhiteGaussianInput>(&scenario.input_model)) {
        return white->variance;
    }
    const auto& s = std::get<SignalInput>(scenario.input_model).signal;
    double sum = 0.0;
    for (const double v : s) {
        sum += v * v;
    }
    return s.empty() ? 0.0 : sum / static_cast<double>(s.size());
}

SystemSpec Experiment::system_spec() const {
    double si = scenario.input_noise.nominal_variance();
    double so = scenario.output_noise.nominal_variance();
    if (!(si > 0.0) || !(so > 0.0)) {
        throw UsageError("theory needs positive input and output noise variances");
    }
    return SystemSpec::white(true_weights, input_power(), si, so);
}

Experiment build_experiment(const KeyValueConfig& cfg, const std::filesystem::path& base_dir) {
    Experiment ex;
    auto& sc = ex.scenario;

    const auto positive_int = [&](const std::string& key, std::int64_t fallback) {
        const auto v = cfg.integer(key).value_or(fallback);
        if (v < 1) {
            cfg.fail(key, "must be a positive integer");
        }
        return v;
    };

    const auto weights = cfg.numbers("system.true_weights");
    const std::int64_t default_length = weights ? static_cast<std::int64_t>(weights->size()) : 9;
    sc.filter_length = positive_int("scenario.filter_length", default_length);
    if (weights) {
        if (static_cast<Eigen::Index>(weights->size()) != sc.filter_length) {
            cfg.fail("system.true_weights", "has " + std::to_string(weights->size()) + " entries but filter_length is " +
                                                std::to_string(sc.filter_length));
        }
        ex.true_weights = Eigen::Map<const Vector>(weights->data(), static_cast<Eigen::Index>(weights->size()));
    } else {
        ex.true_weights = default_true_weights(sc.filter_length);
    }

    sc.n_samples = static_cast<std::size_t>(positive_int("scenario.samples", 3000));
    sc.n_runs = static_cast<std::size_t>(positive_int("scenario.runs", 100));
    const auto seed = cfg.integer("scenario.seed").value_or(1);
    if (seed < 0) {
        cfg.fail("scenario.seed", "must be non-negative");
    }
    sc.seed = static_cast<std::uint64_t>(seed);
    const std::int64_t default_window = std::max<std::int64_t>(1, std::min<std::int64_t>(500, sc.n_samples / 2));
    sc.steady_window = static_cast<std::size_t>(positive_int("scenario.steady_window", default_window));
    if (sc.steady_window >= sc.n_samples) {
        cfg.fail("scenario.steady_window", "must be smaller than scenario.samples");
    }
    if (const auto flip = cfg.integer("scenario.tracking_flip_at")) {
        if (*flip < 0) {
            cfg.fail("scenario.tracking_flip_at", "must be non-negative");
        }
        sc.tracking_flip_at = static_cast<std::size_t>(*flip);
    }
    if (const auto threads = cfg.integer("scenario.threads")) {
        if (*threads < 0) {
            cfg.fail("scenario.threads", "must be non-negative");
        }
        sc.threads = static_cast<unsigned>(*threads);
    }

    const std::string input_kind = cfg.string("input.kind").value_or("white_gaussian");
    if (input_kind == "white_gaussian") {
        const double var = cfg.number("input.variance").value_or(1.0);
        if (!(var > 0.0)) {
            cfg.fail("input.variance", "must be positive");
        }
        sc.input_model = WhiteGaussianInput{var};
    } else if (input_kind == "speech_file") {
        const auto p = cfg.string("input.path");
        if (!p) {
            cfg.fail("input.kind", "speech_file input needs input.path");
        }
        std::filesystem::path path(*p);
        if (path.is_relative()) {
            path = base_dir / path;
        }
        sc.input_model = SignalInput{read_wav_pcm16(path).samples, path.string()};
    } else {
        cfg.fail("input.kind", "unknown input kind '" + input_kind + "' (expected white_gaussian or speech_file)");
    }

    sc.input_noise = parse_noise(cfg, "input_noise");
    sc.output_noise = parse_noise(cfg, "output_noise");

    if (const auto eps = cfg.number("system.epsilon")) {
        if (!(*eps > 0.0)) {
            cfg.fail("system.epsilon", "must be positive");
        }
        ex.epsilon = *eps;
    } else {
        const double si = sc.input_noise.nominal_variance();
        const double so = sc.output_noise.nominal_variance();
        ex.epsilon = (si > 0.0 && so > 0.0) ? so / si : 1.0;
    }

    auto labels = cfg.subsections("algorithm");
    if (labels.empty()) {
        sc.algorithms.push_back(AlgorithmSpec{"tacldm", AlgorithmKind::Tacldm, FilterParams{0.1, 1.0, ex.epsilon}});
    }
    std::vector<std::pair<std::size_t, std::string>> matches;
    for (const auto& label : labels) {
        const std::string prefix = "algorithm." + label;
        AlgorithmSpec a;
        a.label = label;
        const std::string kind = cfg.string(prefix + ".kind").value_or(label);
        try {
            a.kind = parse_algorithm(kind);
        } catch (const UsageError& e) {
            cfg.fail(prefix + ".kind", e.what());
        }
        a.params.mu = cfg.number(prefix + ".mu").value_or(0.1);
        a.params.gamma = cfg.number(prefix + ".gamma").value_or(1.0);
        a.params.epsilon = cfg.number(prefix + ".epsilon").value_or(ex.epsilon);
        try {
            a.params.validate();
        } catch (const ParameterError& e) {
            cfg.fail(prefix, e.what());
        }
        if (const auto m = cfg.string(prefix + ".match")) {
            if (a.kind != AlgorithmKind::Gdtls) {
                cfg.fail(prefix + ".match", "only gdtls filters can match a TACLDM convergence rate");
            }
            if (cfg.has(prefix + ".mu")) {
                cfg.fail(prefix + ".match", "give either mu or match, not both");
            }
            matches.emplace_back(sc.algorithms.size(), *m);
        }
        sc.algorithms.push_back(std::move(a));
    }
    for (const auto& [index, target] : matches) {
        const auto it = std::find_if(sc.algorithms.begin(), sc.algorithms.end(),
                                     [&](const AlgorithmSpec& a) { return a.label == target; });
        const auto key = "algorithm." + sc.algorithms[index].label + ".match";
        if (it == sc.algorithms.end() || it->kind != AlgorithmKind::Tacldm) {
            cfg.fail(key, "'" + target + "' is not a configured tacldm filter");
        }
        sc.algorithms[index].params.mu = matched_gdtls_step(it->params.mu, it->params.gamma);
    }

    const auto first_tacldm = std::find_if(sc.algorithms.begin(), sc.algorithms.end(),
                                           [](const AlgorithmSpec& a) { return a.kind == AlgorithmKind::Tacldm; });
    const double default_gamma = first_tacldm != sc.algorithms.end() ? first_tacldm->params.gamma : 1.0;

    if (cfg.has("sweep.parameter") || cfg.has("sweep.values")) {
        SweepSettings sw;
        const auto param = cfg.string("sweep.parameter").value_or("gamma");
        try {
            sw.parameter = parse_sweep_parameter(param);
        } catch (const UsageError& e) {
            cfg.fail("sweep.parameter", e.what());
        }
        const auto values = cfg.numbers("sweep.values");
        if (!values) {
            cfg.fail("sweep.parameter", "sweep.values is required");
        }
        sw.values = *values;
        sw.algorithm = cfg.string("sweep.algorithm").value_or("");
        ex.sweep = std::move(sw);
    }

    auto& sf = ex.surface;
    sf.gamma = cfg.number("surface.gamma").value_or(default_gamma);
    sf.range_min = cfg.number("surface.min").value_or(-2.0);
    sf.range_max = cfg.number("surface.max").value_or(2.0);
    sf.points = static_cast<std::size_t>(positive_int("surface.points", 41));
    sf.samples = static_cast<std::size_t>(positive_int("surface.samples", 20000));
    if (!(sf.gamma > 0.0)) {
        cfg.fail("surface.gamma", "must be positive");
    }
    if (!(sf.range_max > sf.range_min)) {
        cfg.fail("surface.max", "must exceed surface.min");
    }
    if (sf.points < 2) {
        cfg.fail("surface.points", "need at least 2 grid points");
    }

    ex.predict.gamma = cfg.number("predict.gamma").value_or(default_gamma);
    if (!(ex.predict.gamma > 0.0)) {
        cfg.fail("predict.gamma", "must be positive");
    }
    if (const auto mus = cfg.numbers("predict.mu")) {
        for (const double m : *mus) {
            if (m < 0.0) {
                cfg.fail("predict.mu", "step sizes must be non-negative");
            }
        }
        ex.predict.mu = *mus;
    } else if (first_tacldm != sc.algorithms.end()) {
        ex.predict.mu = {first_tacldm->params.mu};
    } else {
        ex.predict.mu = {0.1};
    }

    const auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() ? base_dir / path : path;
    };
    if (const auto s = cfg.string("aec.speech")) ex.aec.speech = resolve(*s);
    if (const auto s = cfg.string("aec.echo_path")) ex.aec.echo_path = resolve(*s);
    if (const auto s = cfg.integer("aec.echo_seed")) ex.aec.echo_seed = static_cast<std::uint64_t>(*s);

    cfg.reject_unknown();
    return ex;
}

}  // namespace filterlab
