#ifndef IMPGREEN_ERRORS_HPP
#define IMPGREEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace impgreen {

// Argument outside the mathematical domain of an operation
// (e.g. z on the closed negative real axis, r <= 0, t < z_d).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// No evaluation branch can certify the requested tolerance.
struct AccuracyError : std::runtime_error {
    explicit AccuracyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input lies outside the certified analytic-continuation regime
// (kappa too large, Re chi <= 0, branch-cut crossing).
struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Panel budget exhausted before the tail bound closed.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration schema or value error; carries the offending field path.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_path, const std::string& msg)
        : std::runtime_error(field_path + ": " + msg), field(std::move(field_path)) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Sampled block entry error exceeded the requested tolerance.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace impgreen

#endif
