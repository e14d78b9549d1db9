#pragma once

#include <stdexcept>
#include <string>

namespace fplab {

enum class ErrorKind {
    Parse,         // malformed input text (CSV row, scenario line)
    Schema,        // well-formed input violating the declared schema
    Dimension,     // length or coordinate mismatch
    Parameter,     // argument outside the documented regime
    Budget,        // enumeration larger than the configured budget
    EmptyCell,     // conditional rate over an empty cell
    EmptySet,      // statistic over an empty multiset
    Scheme,        // invalid inclusion scheme
    Estimator,     // estimator precondition violated
    Degenerate,    // zero-variance moment where variation is required
    Inconsistency, // declared VC dimension contradicted by a shattered set
    Io,            // filesystem failure
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace fplab
