#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardyrad {

/// Argument outside the declared domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A structural hypothesis of the continuous problem fails (e.g. the
/// existence inequality). Distinct from software failures so callers can
/// tell "theory says no" apart from "computation broke".
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SpectralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed-form manipulation left the power-sum class.
class UnsupportedFormError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}

    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(format(message, line, column)),
          message_(message), line_(line), column_(column) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& m, std::size_t line, std::size_t column)
    {
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + m;
    }

    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

} // namespace hardyrad
