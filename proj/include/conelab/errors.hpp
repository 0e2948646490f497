#pragma once

#include <stdexcept>
#include <string>

namespace conelab {

/// Bad user-facing arguments (CLI usage).  Exit code 1.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration / preconditions.  Exit code 2.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An iterative solver failed to reach its tolerance.  Exit code 3.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A certified property failed to hold (local minimality, recurrence,
/// containment).  Exit code 4.
struct certificate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace conelab
