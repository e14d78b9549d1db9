#include "scenario.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "fplab/error.hpp"

namespace fplab::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' && c != '-') {
            return false;
        }
    }
    return true;
}

[[noreturn]] void missing(const std::string& key, const std::string& origin) {
    raise(ErrorKind::Schema, origin + ": missing required key '" + key + "'");
}

} // namespace

bool Scenario::has(const std::string& key) const { return keys.count(key) > 0; }

const std::string& Scenario::require(const std::string& key) const {
    auto it = keys.find(key);
    if (it == keys.end()) missing(key, origin);
    return it->second;
}

std::string Scenario::get_or(const std::string& key, const std::string& fallback) const {
    auto it = keys.find(key);
    return it == keys.end() ? fallback : it->second;
}

std::uint64_t Scenario::require_u64(const std::string& key) const {
    const std::string& raw = require(key);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
        raise(ErrorKind::Schema, origin + ": key '" + key + "' needs a non-negative integer, got '" + raw + "'");
    }
    return value;
}

std::uint64_t Scenario::get_u64_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? require_u64(key) : fallback;
}

int Scenario::require_int(const std::string& key) const {
    const std::string& raw = require(key);
    int value = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
        raise(ErrorKind::Schema, origin + ": key '" + key + "' needs an integer, got '" + raw + "'");
    }
    return value;
}

int Scenario::get_int_or(const std::string& key, int fallback) const {
    return has(key) ? require_int(key) : fallback;
}

double Scenario::require_double(const std::string& key) const {
    const std::string& raw = require(key);
    double value = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
        raise(ErrorKind::Schema, origin + ": key '" + key + "' needs a real number, got '" + raw + "'");
    }
    return value;
}

double Scenario::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? require_double(key) : fallback;
}

Rational Scenario::require_rational(const std::string& key) const {
    const std::string& raw = require(key);
    try {
        return parse_rational(raw);
    } catch (const Error& e) {
        raise(ErrorKind::Schema, origin + ": key '" + key + "': " + e.what());
    }
}

bool Scenario::get_bool_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& raw = require(key);
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    raise(ErrorKind::Schema, origin + ": key '" + key + "' needs true or false, got '" + raw + "'");
}

void Scenario::set(const std::string& key, std::string value) {
    keys[key] = std::move(value);
}

Scenario parse_scenario_text(std::istream& in, const std::string& origin) {
    Scenario sc;
    sc.origin = origin;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        if (auto pos = body.find(" #"); pos != std::string::npos) {
            body = trim(body.substr(0, pos));
        }
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            raise(ErrorKind::Parse,
                  origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (!valid_key(key)) {
            raise(ErrorKind::Parse,
                  origin + ":" + std::to_string(line_no) + ": bad key '" + key + "'");
        }
        if (value.empty()) {
            raise(ErrorKind::Parse,
                  origin + ":" + std::to_string(line_no) + ": empty value for '" + key + "'");
        }
        if (!sc.keys.emplace(key, value).second) {
            raise(ErrorKind::Parse,
                  origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return sc;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorKind::Io, "cannot open scenario file " + path.string());
    }
    return parse_scenario_text(in, path.string());
}

} // namespace fplab::cli
