#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kellybet {

/// Malformed or invariant-violating input data (CSV rows, prediction files).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    /// 1-based source line, or 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid parameters or configuration (violated preconditions).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Not enough data to compute a result (e.g. fewer than two months for Sharpe).
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kellybet
