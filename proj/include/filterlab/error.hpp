#ifndef FILTERLAB_ERROR_HPP
#define FILTERLAB_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace filterlab {

/// Invalid numeric parameter (non-positive step, kernel, variance, non-SPD covariance, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller passed inconsistent arguments, e.g. mismatched vector lengths.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed configuration file; the message names the offending key path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an update produces a non-finite weight.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(std::uint64_t iteration)
        : std::runtime_error("non-finite weights after iteration " + std::to_string(iteration)),
          iteration_(iteration) {}

    std::uint64_t iteration() const noexcept { return iteration_; }

private:
    std::uint64_t iteration_;
};

/// (I - F) is singular: the step size sits on the mean-square stability boundary.
class StabilityBoundaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace filterlab

#endif  // FILTERLAB_ERROR_HPP
