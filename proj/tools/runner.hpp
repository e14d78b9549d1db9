#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scenario.hpp"

namespace fplab::cli {

// Everything deterministic about a run: the payload must come out
// byte-identical when the same scenario is executed again.
struct RunResult {
    nlohmann::json payload;
    // (file suffix, csv text) pairs, e.g. ("measure", "...") -> name.measure.csv
    std::vector<std::pair<std::string, std::string>> tables;
    bool assertion_failed = false;
    std::string assertion_message;
};

RunResult run_scenario(const Scenario& sc);

// Shortest decimal form that round-trips, shared by every CSV emitter.
std::string format_double(double value);

} // namespace fplab::cli
