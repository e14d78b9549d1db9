#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "fplab/rational.hpp"

namespace fplab::cli {

// A scenario is a flat key = value map; every experiment parameter is spelled
// out explicitly (no implicit N, l, epsilon or seeds).
struct Scenario {
    std::string origin; // file path, or "<flags>" when built from options
    std::map<std::string, std::string> keys;

    bool has(const std::string& key) const;
    const std::string& require(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;

    std::uint64_t require_u64(const std::string& key) const;
    std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
    int require_int(const std::string& key) const;
    int get_int_or(const std::string& key, int fallback) const;
    double require_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    Rational require_rational(const std::string& key) const;
    bool get_bool_or(const std::string& key, bool fallback) const;

    void set(const std::string& key, std::string value);
};

// Lines of `key = value`; blank lines and lines starting with # are skipped;
// a ` #` introduces a trailing comment.  Duplicate keys are parse errors.
Scenario parse_scenario_text(std::istream& in, const std::string& origin);
Scenario parse_scenario_file(const std::filesystem::path& path);

} // namespace fplab::cli
