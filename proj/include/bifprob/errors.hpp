#pragma once

#include <stdexcept>
#include <string>

namespace bifprob {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A required moment or Mellin value diverges.
class ExistenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation not available for this distribution or factor kind.
class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical routine failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cumulated coefficients grew past the scaling guard.
class OverflowGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration or literal.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bifprob
