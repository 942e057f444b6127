#pragma once

#include <stdexcept>
#include <string>

namespace rte {

/// Invalid user-facing parameter. `field()` names the offending key
/// (e.g. "grid.dt" or "kernel.g") so callers can report a path.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field.empty() ? what : field + ": " + what),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Argument outside the mathematical domain of an operation (g >= 1, r >= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Non-finite value produced by the scheme. Carries the time step and the
/// flat data index so the offending (point, direction) can be reported.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, long step, std::size_t index)
        : std::runtime_error(what), step_(step), index_(index) {}

    long step() const noexcept { return step_; }
    std::size_t index() const noexcept { return index_; }

private:
    long step_;
    std::size_t index_;
};

}  // namespace rte
