#pragma once

// Reproducible experiments, one per acceptance criterion, shared by the CLI
// and the acceptance binary.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "codiff/limsup_oracle.hpp"

namespace codiff {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration. Lines starting with '#' are comments.
class ExperimentConfig {
public:
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);

    // Rejects unknown keys.
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& entries() const { return values_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback, double lo, double hi) const;
    int get_int(const std::string& key, int fallback, int lo, int hi) const;
    std::uint64_t get_seed(std::uint64_t fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

    // r0, K, S, seed.
    SamplingSchedule schedule() const;

private:
    std::map<std::string, std::string> values_;
};

struct ExperimentInfo {
    std::string id;
    std::string statement;
};

const std::vector<ExperimentInfo>& experiment_catalog();

struct Check {
    std::string name;
    bool passed;
    nlohmann::ordered_json detail;
};

struct ExperimentResult {
    std::string id;
    std::string statement;
    bool passed = false;
    std::vector<Check> checks;
    nlohmann::ordered_json inputs;
    nlohmann::ordered_json details;
    std::string trace_csv;  // quotient trace of a representative estimate

    // Stable key order; no timestamp.
    nlohmann::ordered_json report() const;
    std::string summary() const;
};

// Throws ConfigError for an unknown id or an out-of-range parameter.
ExperimentResult run_experiment(const std::string& id, const ExperimentConfig& config);

}  // namespace codiff
