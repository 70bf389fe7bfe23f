#pragma once

#include <stdexcept>
#include <string>

namespace scpw {

/// Bad caller input: infeasible moments, violated preconditions, malformed files.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a result (closure singularity,
/// step-size underflow, non-convergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace scpw
