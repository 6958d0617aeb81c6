#pragma once

#include <stdexcept>
#include <string>

namespace sldual {

/// Raised when an iteration or a backward sweep produces a non-finite value
/// or an iterative refinement fails to converge.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an exact enumeration would exceed its configured size budget.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for inputs the library deliberately does not handle
/// (utilities unbounded below at zero, non-Lipschitz conjugates).
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sldual
