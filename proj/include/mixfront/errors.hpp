#pragma once

#include <stdexcept>
#include <string>

namespace mixfront {

/// Invalid parameters; the message names the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A field went below -1e-13 during a step (step-size rule violated).
class UndershootError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The fronts would cross (h - g <= 0).
class FrontCollapseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hypotheses of the requested construction do not hold.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wraps a step failure with the simulation time it happened at.
class SolverError : public std::runtime_error {
public:
    SolverError(double t, const std::string& what)
        : std::runtime_error("t=" + std::to_string(t) + ": " + what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace mixfront
