#include <string>

#include <doctest.h>

#include "filterlab/baselines.hpp"
#include "filterlab/config.hpp"
#include "filterlab/error.hpp"

using namespace filterlab;

namespace {

Experiment build(const std::string& text) { return build_experiment(KeyValueConfig::parse(text, "test.cfg")); }

std::string error_of(const std::string& text) {
    try {
        auto cfg = KeyValueConfig::parse(text, "test.cfg");
        build_experiment(cfg);
        cfg.reject_unknown();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("defaults") {
    const auto ex = build("");
    CHECK(ex.scenario.filter_length == 9);
    CHECK(ex.scenario.n_samples == 3000);
    CHECK(ex.scenario.n_runs == 100);
    CHECK(ex.scenario.steady_window == 500);
    CHECK(ex.true_weights.isApprox(default_true_weights(9)));
    CHECK(ex.epsilon == doctest::Approx(1.0));
    REQUIRE(ex.scenario.algorithms.size() == 1);
    CHECK(ex.scenario.algorithms[0].kind == AlgorithmKind::Tacldm);
    CHECK(ex.scenario.input_noise.variance() == doctest::Approx(0.1));
    CHECK_FALSE(ex.sweep.has_value());

    CHECK(build("scenario.samples = 100").scenario.steady_window == 50);
}

TEST_CASE("full scenario") {
    const auto ex = build(R"(
# system identification
scenario.filter_length = 2
scenario.samples = 400
scenario.runs = 7
scenario.seed = 99
scenario.tracking_flip_at = 200
system.true_weights = -0.6, 0.8
input.variance = 2
input_noise.kind = uniform
input_noise.half_width = 1.4142135623730951
output_noise.kind = impulsive_mixture
output_noise.prob = 0.02
output_noise.base.kind = laplacian
output_noise.base.variance = 1
algorithm.robust.kind = tacldm
algorithm.robust.mu = 0.3
algorithm.robust.gamma = 1.4
algorithm.gdtls.match = robust
algorithm.lms.mu = 0.01
sweep.parameter = mu
sweep.values = 0.05, 0.1
)");
    CHECK(ex.scenario.filter_length == 2);
    CHECK(ex.scenario.seed == 99);
    CHECK(ex.scenario.tracking_flip_at == 200u);
    CHECK(ex.true_weights(0) == doctest::Approx(-0.6));
    CHECK(ex.input_power() == doctest::Approx(2.0));
    CHECK(ex.scenario.input_noise.variance() == doctest::Approx(2.0 / 3.0));
    CHECK(ex.scenario.output_noise.is_mixture());
    CHECK(ex.scenario.output_noise.nominal_variance() == doctest::Approx(1.0));
    CHECK(ex.epsilon == doctest::Approx(1.5));

    REQUIRE(ex.scenario.algorithms.size() == 3);
    CHECK(ex.scenario.algorithms[0].label == "robust");
    CHECK(ex.scenario.algorithms[1].kind == AlgorithmKind::Gdtls);
    CHECK(ex.scenario.algorithms[1].params.mu == doctest::Approx(matched_gdtls_step(0.3, 1.4)));
    CHECK(ex.scenario.algorithms[2].kind == AlgorithmKind::Lms);
    CHECK(ex.surface.gamma == doctest::Approx(1.4));

    REQUIRE(ex.sweep.has_value());
    CHECK(ex.sweep->parameter == SweepParameter::Mu);
    CHECK(ex.sweep->values.size() == 2);

    const auto spec = ex.system_spec();
    CHECK(spec.input_covariance.isApprox(2.0 * Matrix::Identity(2, 2)));
    CHECK(spec.epsilon() == doctest::Approx(1.5));
}

TEST_CASE("zero true weights are accepted for theory") {
    const auto ex = build("system.true_weights = 0, 0, 0");
    CHECK(ex.true_weights.isZero(0.0));
    CHECK(ex.system_spec().length() == 3);
}

TEST_CASE("diagnostics name the offending key") {
    CHECK(contains(error_of("scenario.samples = abc"), "scenario.samples"));
    CHECK(contains(error_of("scenario.samples = abc"), "test.cfg:1"));
    CHECK(contains(error_of("\nscenario.runs = 0"), "test.cfg:2: key 'scenario.runs'"));
    CHECK(contains(error_of("scenario.samples = 2.5"), "expected an integer"));
    CHECK(contains(error_of("system.true_weights = 1, x"), "system.true_weights"));
    CHECK(contains(error_of("system.true_weights = 1, 2\nscenario.filter_length = 3"), "system.true_weights"));
    CHECK(contains(error_of("input_noise.kind = pink"), "input_noise.kind"));
    CHECK(contains(error_of("input_noise.kind = laplacian"), "input_noise.variance"));
    CHECK(contains(error_of("output_noise.kind = impulsive_mixture\noutput_noise.prob = 1.5"), "output_noise.prob"));
    CHECK(contains(error_of("output_noise.kind = impulsive_mixture\noutput_noise.prob = 0.1\n"
                            "output_noise.base.kind = impulsive_mixture"),
                   "output_noise.base.kind"));
    CHECK(contains(error_of("algorithm.a.kind = rls"), "algorithm.a.kind"));
    CHECK(contains(error_of("algorithm.a.kind = tacldm\nalgorithm.a.gamma = -1"), "algorithm.a"));
    CHECK(contains(error_of("algorithm.a.kind = lms\nalgorithm.a.match = b"), "algorithm.a.match"));
    CHECK(contains(error_of("algorithm.g.kind = gdtls\nalgorithm.g.match = nobody"), "algorithm.g.match"));
    CHECK(contains(error_of("scenario.samples = 100\nscenario.steady_window = 100"), "scenario.steady_window"));
    CHECK(contains(error_of("sweep.parameter = delta\nsweep.values = 1"), "sweep.parameter"));
    CHECK(contains(error_of("scenario.typo = 1"), "unknown key 'scenario.typo'"));
    CHECK(contains(error_of("just words"), "test.cfg:1"));
    CHECK(contains(error_of("a.b = 1\na.b = 2"), "duplicate key 'a.b'"));
    CHECK(contains(error_of("novalue = 3"), "section.key"));
}

TEST_CASE("key value access") {
    const auto cfg = KeyValueConfig::parse("a.x = 1 # trailing\na.list = 1, 2 ,3\nb.c.d = hi\nb.e.f = 2\nb.c.g = 3");
    CHECK(cfg.integer("a.x") == 1);
    CHECK(cfg.numbers("a.list")->size() == 3);
    CHECK(cfg.string("b.c.d") == "hi");
    CHECK_FALSE(cfg.has("a.y"));
    CHECK_FALSE(cfg.number("a.y").has_value());
    const auto subs = cfg.subsections("b");
    REQUIRE(subs.size() == 2);
    CHECK(subs[0] == "c");
    CHECK(subs[1] == "e");
    CHECK_THROWS_AS(cfg.reject_unknown(), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/file.cfg"), ConfigError);
}
