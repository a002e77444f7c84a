#pragma once

#include <stdexcept>
#include <string>

namespace uwqkd {

// Invalid argument or parameter outside its physical range.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed configuration, optical-train or radiance file.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

// A query that has no answer for the given parameters (e.g. insecure at zero range).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Radiance lookup for a scenario the table does not cover.
class TableGapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace uwqkd
