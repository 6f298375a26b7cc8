#pragma once

#include <stdexcept>
#include <string>

namespace shapereg {

// Input-level problems: malformed CSV, bad configuration, unusable data.
// The CLI maps these to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdowns that indicate the requested computation is not
// trustworthy (near-singular Toeplitz system, prediction-error collapse).
// The CLI maps these to exit code 3.
struct ConditioningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Circulant embedding failed to become positive semidefinite within the
// enlargement budget.  Also mapped to exit code 3.
struct EmbeddingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace shapereg
