#include <doctest.h>

#include <algorithm>

#include "codiff/experiments.hpp"

using namespace codiff;

TEST_CASE("config parsing") {
    const auto cfg = ExperimentConfig::parse("# comment\nexperiment = l1_cases\n\np = 2, 3\nseed=7\n");
    CHECK(cfg.get_string("experiment", "") == "l1_cases");
    CHECK(cfg.get_doubles("p", {}) == std::vector<double>{2, 3});
    CHECK(cfg.get_seed(1) == 7);
    CHECK(cfg.get_int("N", 4, 1, 16) == 4);
    CHECK_THROWS_AS(ExperimentConfig::parse("bogus = 1"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("no equals sign"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("N = 100").get_int("N", 4, 1, 16), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("r = abc").get_double("r", 1, 0, 10), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("K = 2").schedule(), ConfigError);
}

TEST_CASE("catalog") {
    const auto& cat = experiment_catalog();
    CHECK(cat.size() == 12);
    for (const char* id : {"ball_theorem_4_1", "cone_l2_theorem_4_3", "remez_continuity_theorem_4_8", "l1_cases"}) {
        CHECK(std::any_of(cat.begin(), cat.end(), [&](const ExperimentInfo& e) { return e.id == id; }));
    }
}

TEST_CASE("unknown experiment") {
    CHECK_THROWS_AS(run_experiment("nope", {}), ConfigError);
}

TEST_CASE("reports are reproducible") {
    const auto cfg = ExperimentConfig::parse("seed = 7\ncount = 3\n");
    const auto a = run_experiment("affine_maps", cfg);
    const auto b = run_experiment("affine_maps", cfg);
    CHECK(a.report().dump() == b.report().dump());
    CHECK(a.trace_csv == b.trace_csv);
    CHECK(a.passed);
}

TEST_CASE("l1_cases reports the three limits") {
    const auto res = run_experiment("l1_cases", ExperimentConfig::parse("count = 2"));
    const auto& cases = res.details["cases"];
    REQUIRE(cases.size() == 3);
    CHECK(cases[0]["split_denominator_limit"].get<double>() == doctest::Approx(0.25).epsilon(0.05));
    CHECK(cases[1]["split_denominator_limit"].get<double>() == doctest::Approx(0.5).epsilon(0.05));
    CHECK(cases[2]["split_denominator_limit"].get<double>() == doctest::Approx(0.5).epsilon(0.05));
}
