#pragma once

#include <stdexcept>
#include <string>

namespace qsp {

/// Expression text could not be parsed. `position` is a 0-based byte offset
/// into the input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// A time function failed to evaluate to a finite real. Carries the time and
/// the offending subexpression.
class EvalError : public std::runtime_error {
public:
    EvalError(std::string message, double t, std::string subexpression)
        : std::runtime_error(message + " at t=" + std::to_string(t) + " in " + subexpression),
          t_(t),
          subexpression_(std::move(subexpression)) {}

    double t() const { return t_; }
    const std::string& subexpression() const { return subexpression_; }

private:
    double t_;
    std::string subexpression_;
};

/// A family constructor rejected its parameters. The message names the failed
/// condition and a concrete counterexample point.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A run configuration is missing, malformed, or references unknown entities.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qsp
