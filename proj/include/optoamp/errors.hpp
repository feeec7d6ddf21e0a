// errors.hpp — exception types shared across the library and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace optoamp {

// Invalid configuration or arguments (bad dims, unknown modes/keys, unstable params).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failures: step-size underflow, singular/degenerate generators, non-convergence.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StiffnessError : SolverError {
    using SolverError::SolverError;
};

struct NonUniqueSteadyState : SolverError {
    using SolverError::SolverError;
};

struct ConvergenceError : SolverError {
    using SolverError::SolverError;
};

// Observables disagree between a run and its enlarged-truncation replica.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A physical invariant or acceptance threshold was violated.
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Observable undefined for the given state (e.g. g2 of vacuum).
struct UndefinedObservable : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace optoamp
