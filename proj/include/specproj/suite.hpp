#pragma once

#include <map>
#include <string>
#include <vector>

#include "specproj/config.hpp"

namespace specproj {

struct CheckResult {
    std::string name;
    std::map<std::string, double> parameters;
    std::map<std::string, double> residuals;
    double residual = 0.0;  // headline residual compared against tolerance
    double tolerance = 0.0;
    bool pass = false;
    double runtime_seconds = 0.0;
    std::string note;
};

struct VerificationReport {
    std::string fingerprint;
    std::uint64_t seed = 0;
    int n = 0, r = 0;
    std::vector<CheckResult> checks;
    bool all_pass = false;

    std::string to_json(bool include_runtime = true) const;
};

/// Names of all suite checks, in execution order.
std::vector<std::string> suite_check_names();

/// Run the configured subset of checks (empty selection = the config's list,
/// or every applicable check). Checks run concurrently up to the worker
/// count; report assembly is ordered.
VerificationReport run_suite(const Config& cfg, const std::vector<std::string>& only = {});

void write_report(const VerificationReport& report, const std::string& path);

} // namespace specproj
