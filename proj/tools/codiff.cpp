// codiff: run the coderivative / fixed-point experiments.
//
//   codiff list
//   codiff run --experiment <id> [--config <path>] [--seed <int>] [--out <path>] [--set key=value]...
//   codiff trace --experiment <id> [--config <path>] [--seed <int>] [--set key=value]...
//
// Exit status: 0 pass, 1 fail, 2 configuration error.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "codiff/experiments.hpp"

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunArgs {
    std::string experiment;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::string> overrides;
};

// File first, then flags.
codiff::ExperimentConfig build_config(const RunArgs& a) {
    auto cfg = a.config_path.empty() ? codiff::ExperimentConfig{} : codiff::ExperimentConfig::load(a.config_path);
    for (const auto& kv : a.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw codiff::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (a.seed) cfg.set("seed", std::to_string(*a.seed));
    if (!a.out.empty()) cfg.set("out", a.out);
    std::string id = a.experiment;
    if (id.empty()) id = cfg.get_string("experiment", "");
    if (id.empty()) throw codiff::ConfigError("no experiment given (--experiment or experiment= in the config)");
    if (!a.experiment.empty()) cfg.set("experiment", a.experiment);
    return cfg;
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
    cmd->add_option("--experiment,-e", a.experiment, "experiment id (see list)");
    cmd->add_option("--config,-c", a.config_path, "key=value config file");
    cmd->add_option("--seed", a.seed, "sampling seed");
    cmd->add_option("--set", a.overrides, "override a config key (key=value)");
}

int do_run(const RunArgs& a) {
    const auto cfg = build_config(a);
    const std::string id = cfg.get_string("experiment", "");
    const auto result = codiff::run_experiment(id, cfg);

    nlohmann::ordered_json report;
    const auto body = result.report();
    for (auto it = body.begin(); it != body.end(); ++it) {
        report[it.key()] = it.value();
        if (it.key() == "experiment") report["timestamp"] = utc_timestamp();
    }
    const std::string text = report.dump(2) + "\n";
    const std::string out = cfg.get_string("out", "");
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw codiff::ConfigError("cannot write '" + out + "'");
        f << text;
    }
    std::cerr << id << ": " << (result.passed ? "PASS" : "FAIL") << " (" << result.summary() << ")\n";
    return result.passed ? 0 : 1;
}

int do_trace(const RunArgs& a) {
    const auto cfg = build_config(a);
    const auto result = codiff::run_experiment(cfg.get_string("experiment", ""), cfg);
    std::cout << result.trace_csv;
    return result.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed points of coderivatives of metric projections"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list experiment ids and the statement each verifies");
    RunArgs run_args, trace_args;
    auto* run = app.add_subcommand("run", "run an experiment and write its JSON report");
    add_run_options(run, run_args);
    run->add_option("--out,-o", run_args.out, "report path (stdout when omitted)");
    auto* trace = app.add_subcommand("trace", "print the quotient trace of an experiment as CSV");
    add_run_options(trace, trace_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            for (const auto& info : codiff::experiment_catalog()) std::cout << info.id << "\t" << info.statement << "\n";
            return 0;
        }
        if (run->parsed()) return do_run(run_args);
        if (trace->parsed()) return do_trace(trace_args);
    } catch (const codiff::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
