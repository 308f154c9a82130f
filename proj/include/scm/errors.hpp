#pragma once

#include <stdexcept>
#include <string>

namespace scm {

// Invalid input shape: bad parameters, malformed config, violated type invariants.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computation that is well-posed in type terms but numerically rejected:
// cusp present, atom on an integration path, shooting bracket failure.
struct numerical_rejection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation requested exactly at a singular point of the metric.
struct singular_point_error : numerical_rejection {
    using numerical_rejection::numerical_rejection;
};

// Membership query within the boundary ambiguity band.
struct boundary_ambiguous : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace scm
