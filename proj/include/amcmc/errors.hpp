#pragma once

#include <stdexcept>
#include <string>

namespace amcmc {

// Mismatched support sizes / vector dimensions.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A value outside its admissible range (theta out of grid, tolerance <= 0, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Quadrature failed to converge, Cholesky of a non-SPD matrix, ...
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Not enough observations to form the requested statistic.
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid experiment configuration (CLI layer).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace amcmc
