#pragma once
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "apc/common.hpp"

namespace apc {

// One assertable property tallied over many instances.
struct Check {
    std::string id;
    long long instances = 0;
    long long failures = 0;
    long long skipped = 0;
    double worst = std::numeric_limits<double>::infinity();  // smallest margin seen; >= 0 passes
    bool assertable = true;
    std::string detail;  // first failure, or a summary line
    bool holds() const { return !assertable || failures == 0; }
};

struct ExperimentReport {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    uint64_t seed = 0;
    std::vector<std::string> input_hashes;
    std::vector<Check> checks;
    nlohmann::json stages = nlohmann::json::array();   // per-stage certificates and achieved values
    nlohmann::json timing = nlohmann::json::object();  // wallclock, excluded from the payload
    double wallclock = 0;
    bool passed() const;
};

struct SuiteOptions {
    uint64_t seed = 1;
    long long size_budget = -1;  // group-order cap; -1 uses APC_BUDGET
    double scale = 1.0;          // instance-count multiplier; 1 is the acceptance size
};

std::vector<std::string> suite_ids();
// Documented runtime budget in seconds.
double suite_time_budget(const std::string& id);
ExperimentReport run_suite(const std::string& id, const SuiteOptions& opt);

nlohmann::json report_json(const ExperimentReport& r, bool with_timing = true);
std::string report_tsv(const ExperimentReport& r);
// Hash of the payload without timing; equal reports hash equal.
std::string payload_hash(const ExperimentReport& r);
// format: "json" or "tsv"; path "-" is stdout.
void emit_report(const ExperimentReport& r, const std::string& path, const std::string& format);
// Writes <dir>/<payload hash>.json unless it already exists; returns the path.
std::string store_report(const ExperimentReport& r, const std::string& dir);

}  // namespace apc
